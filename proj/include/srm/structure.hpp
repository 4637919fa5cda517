#ifndef SRM_STRUCTURE_HPP
#define SRM_STRUCTURE_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "srm/polynomial.hpp"
#include "srm/vector_field.hpp"

namespace srm {

using Expr = Polynomial;

/// Axis-aligned box [lo_i, hi_i].
struct Box {
  std::vector<Rational> lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x, double slack = 0.0) const;
  Eigen::VectorXd lower() const { return to_double(lo); }
  Eigen::VectorXd upper() const { return to_double(hi); }
  Eigen::VectorXd center() const { return 0.5 * (lower() + upper()); }
  double volume() const { return (upper() - lower()).prod(); }
  std::string to_string() const;
};

/// A parametrized submanifold s -> map(s), s in parambox; map components are
/// polynomials in the k parameters t1..tk.
struct Stratum {
  std::string name;
  int k = 0;
  std::vector<Polynomial> map;
  Box parambox;

  Eigen::VectorXd point(const Eigen::Ref<const Eigen::VectorXd>& s) const;
  std::vector<Rational> point(std::span<const Rational> s) const;
  /// n x k Jacobian of the parametrization.
  Eigen::MatrixXd jacobian(const Eigen::Ref<const Eigen::VectorXd>& s) const;
  bool is_open(int n) const { return k == n; }
};

/// Sub-Riemannian structure given by a free generating family: X_1..X_m are
/// declared orthonormal, the metric on the span is the induced minimal-norm one.
struct SRStructure {
  int dim = 0;
  std::vector<std::string> field_names;
  std::vector<VectorField> fields;
  Expr volume;  // density of omega with respect to dx_1 ^ ... ^ dx_n
  Box box;
  std::vector<Rational> probe;
  std::vector<Stratum> strata;

  int m() const { return static_cast<int>(fields.size()); }
  const Stratum& stratum(const std::string& name) const;
  double density(const Eigen::Ref<const Eigen::VectorXd>& x) const { return volume.eval(x); }
};

struct ParseOptions {
  /// Run the bracket-generating check at the probe point.
  bool check_generating = true;
  int depth_cap = 6;
};

/// Parses a single expression over variables prefix1..prefixN.
Expr parse_expression(const std::string& text, int nvars, const std::string& prefix = "x");
SRStructure parse_structure(const std::string& text, const ParseOptions& opts = {});
SRStructure load_structure(const std::string& path, const ParseOptions& opts = {});
/// Canonical structure-file text; parse_structure(to_text(s)) reproduces s.
std::string to_text(const SRStructure& s);

}  // namespace srm

#endif  // SRM_STRUCTURE_HPP
