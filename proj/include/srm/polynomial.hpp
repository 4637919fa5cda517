#ifndef SRM_POLYNOMIAL_HPP
#define SRM_POLYNOMIAL_HPP

#include <gmpxx.h>

#include <Eigen/Core>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace srm {

using Rational = mpq_class;
using Exponents = std::vector<int>;
using Weights = std::vector<int>;

/// Exact conversion of a finite double (a dyadic rational).
Rational rational_from_double(double v);
/// Parses "3", "-2/5", "0.125", "1e-3" exactly.
Rational rational_from_string(const std::string& s);
std::string to_string(const Rational& q);
std::vector<Rational> to_rational(const Eigen::VectorXd& p);
Eigen::VectorXd to_double(std::span<const Rational> p);

/// Multivariate polynomial with rational coefficients in canonical form:
/// a sorted map from exponent vectors to nonzero coefficients. Two
/// polynomials are equal iff their maps are equal.
class Polynomial {
 public:
  using Terms = std::map<Exponents, Rational>;

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Rational& c);
  /// The coordinate function x_{var}, with var 0-based.
  static Polynomial variable(int nvars, int var);
  static Polynomial monomial(const Exponents& alpha, const Rational& c);

  int nvars() const noexcept { return nvars_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (zero if absent).
  Rational constant_term() const;
  int degree() const;

  /// Adds c·x^alpha, dropping the entry if it cancels.
  void add_term(const Exponents& alpha, const Rational& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  Polynomial operator-() const;
  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  Polynomial pow(unsigned k) const;
  /// Exact partial derivative with respect to x_{var} (0-based).
  Polynomial diff(int var) const;

  double eval(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Rational eval(std::span<const Rational> x) const;

  /// Substitutes x_i := subs[i]. All subs must share one variable count.
  Polynomial compose(const std::vector<Polynomial>& subs) const;

  /// Min / max of sum_i alpha_i w_i over the terms. Zero polynomial returns
  /// a large sentinel for the min and -1 for the max.
  int weighted_order(const Weights& w) const;
  int weighted_degree(const Weights& w) const;
  /// Terms of weighted degree exactly d.
  Polynomial weighted_part(const Weights& w, int d) const;
  /// Multiplies the coefficient of x^alpha by lambda^(w.alpha + shift).
  /// Every exponent w.alpha + shift must be nonnegative.
  Polynomial weighted_scale(const Weights& w, const Rational& lambda, int shift) const;
  /// Same polynomial viewed in a ring with more variables.
  Polynomial extend(int nvars) const;

  /// Re-parseable text, variables named prefix1..prefixN.
  std::string to_string(const std::string& prefix = "x") const;

 private:
  int nvars_ = 0;
  Terms terms_;
};

Rational pow(const Rational& q, int k);

}  // namespace srm

#endif  // SRM_POLYNOMIAL_HPP
