#ifndef SRM_VECTOR_FIELD_HPP
#define SRM_VECTOR_FIELD_HPP

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "srm/polynomial.hpp"

namespace srm {

/// Polynomial vector field on R^n, component k multiplying d/dx_k.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(std::vector<Polynomial> components);
  static VectorField zero(int dim);
  /// The coordinate field d/dx_{k}.
  static VectorField coordinate(int dim, int k);

  int dim() const noexcept { return static_cast<int>(components_.size()); }
  const Polynomial& operator[](int k) const { return components_.at(k); }
  const std::vector<Polynomial>& components() const noexcept { return components_; }
  bool is_zero() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(const Rational& c, VectorField a);
  friend VectorField operator*(const Polynomial& f, const VectorField& a);
  VectorField operator-() const;
  bool operator==(const VectorField& o) const { return components_ == o.components_; }

  /// Derivation X f = sum_j X^j d_j f.
  Polynomial apply(const Polynomial& f) const;
  Eigen::VectorXd eval(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  std::vector<Rational> eval(std::span<const Rational> x) const;

  std::string to_string(const std::string& prefix = "x") const;

 private:
  std::vector<Polynomial> components_;
};

/// [X,Y]^k = sum_j (X^j d_j Y^k - Y^j d_j X^k).
VectorField lie_bracket(const VectorField& x, const VectorField& y);

}  // namespace srm

#endif  // SRM_VECTOR_FIELD_HPP
