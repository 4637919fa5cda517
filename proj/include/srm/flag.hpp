#ifndef SRM_FLAG_HPP
#define SRM_FLAG_HPP

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "srm/structure.hpp"
#include "srm/vector_field.hpp"

namespace srm {

/// Right-nested bracket [X_{l0},[X_{l1},[...,[X_{l(k-2)},X_{l(k-1)}]]]] over
/// generator indices (0-based). Every iterated bracket of a generating family
/// is a combination of these.
struct BracketWord {
  std::vector<int> letters;

  int length() const { return static_cast<int>(letters.size()); }
  std::string to_string(const std::vector<std::string>& names = {}) const;
  bool operator==(const BracketWord&) const = default;
  auto operator<=>(const BracketWord&) const = default;
};

struct BracketEntry {
  BracketWord word;
  VectorField value;
};

/// Words up to the requested length, deduplicated by canonical value up to
/// sign, with zero values dropped. Grown lazily and shared across points.
class BracketTable {
 public:
  explicit BracketTable(std::vector<VectorField> family) : family_(std::move(family)) {}

  const std::vector<BracketEntry>& up_to(int depth);
  /// Entries of exactly the given length (after ensuring depth).
  std::vector<const BracketEntry*> of_length(int length);
  const std::vector<VectorField>& family() const { return family_; }
  /// Symbolic value of an arbitrary right-nested word (memoized).
  const VectorField& value(const BracketWord& w);

 private:
  std::vector<VectorField> family_;
  std::vector<BracketEntry> entries_;
  int depth_ = 0;
  std::map<BracketWord, VectorField> memo_;
};

std::vector<BracketWord> enumerate_brackets(const std::vector<VectorField>& family, int depth);

struct FlagOptions {
  double tol = 1e-9;
  int depth_cap = 6;
};

struct FlagData {
  Eigen::VectorXd point;
  int step = 0;                         // r(p)
  std::vector<int> growth;              // n_1..n_r
  std::vector<int> weights;             // w_1..w_n
  int Q = 0;                            // sum_i i (n_i - n_{i-1})
  std::vector<std::vector<BracketWord>> spanning;  // words realizing D^i / D^{i-1}
  bool exact_rank_agrees = true;        // rational rank cross-check

  int dim() const { return growth.empty() ? 0 : growth.back(); }
  /// Q computed from the weights; equals Q by construction of both paths.
  int Q_from_weights() const;
};

FlagData flag_at(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, const FlagOptions& opts = {});
FlagData flag_at(BracketTable& table, int dim, const Eigen::Ref<const Eigen::VectorXd>& p,
                 const FlagOptions& opts = {});
/// Flag of an arbitrary family of polynomial fields.
FlagData flag_at(const std::vector<VectorField>& family, const Eigen::Ref<const Eigen::VectorXd>& p,
                 const FlagOptions& opts = {});

/// Weights from a growth vector: w_i = s iff n_{s-1} < i <= n_s.
std::vector<int> weights_from_growth(const std::vector<int>& growth);
int homogeneous_dimension(const std::vector<int>& growth);

enum class PointClass { Regular, Singular };
std::string to_string(PointClass c);

struct GridSpec {
  std::vector<int> counts;  // points per axis
  Box box;                  // defaults to the structure box when empty
};

struct ClassifyOptions {
  FlagOptions flag;
  double probe_radius = 0.0;  // 0 selects a quarter of the smallest grid spacing
  int probe_count = 8;
  std::uint64_t seed = 1;
};

struct GridPoint {
  Eigen::VectorXd point;
  FlagData flag;
  PointClass cls;
};

std::vector<GridPoint> classify_grid(const SRStructure& s, const GridSpec& grid, const ClassifyOptions& opts = {});

}  // namespace srm

#endif  // SRM_FLAG_HPP
