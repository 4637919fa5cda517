#include "srm/polynomial.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "srm/errors.hpp"

namespace srm {

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw ValidationError("vf-dsl.value", "non-finite coordinate");
  // mpq_set_d is exact for doubles
  Rational q;
  mpq_set_d(q.get_mpq_t(), v);
  q.canonicalize();
  return q;
}

Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational num = rational_from_string(s.substr(0, slash));
    Rational den = rational_from_string(s.substr(slash + 1));
    if (den == 0) throw ValidationError("vf-dsl.value", "zero denominator in '" + s + "'");
    return num / den;
  }
  std::string t = s;
  int exp10 = 0;
  auto e = t.find_first_of("eE");
  if (e != std::string::npos) {
    exp10 = std::stoi(t.substr(e + 1));
    t = t.substr(0, e);
  }
  bool neg = false;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    neg = t[0] == '-';
    t = t.substr(1);
  }
  auto dot = t.find('.');
  std::string digits = t;
  if (dot != std::string::npos) {
    digits = t.substr(0, dot) + t.substr(dot + 1);
    exp10 -= static_cast<int>(t.size() - dot - 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw ValidationError("vf-dsl.value", "malformed number '" + s + "'");
  Rational q{mpz_class(digits, 10)};  // base 10: a leading zero must not mean octal
  mpz_class ten = 10;
  mpz_class scale;
  mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::abs(exp10)));
  if (exp10 >= 0)
    q *= scale;
  else
    q /= scale;
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::vector<Rational> to_rational(const Eigen::VectorXd& p) {
  std::vector<Rational> out;
  out.reserve(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back(rational_from_double(p[i]));
  return out;
}

Eigen::VectorXd to_double(std::span<const Rational> p) {
  Eigen::VectorXd v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) v[static_cast<Eigen::Index>(i)] = p[i].get_d();
  return v;
}

Rational pow(const Rational& q, int k) {
  Rational r = 1;
  Rational b = k >= 0 ? q : Rational(1 / q);
  for (int i = 0; i < std::abs(k); ++i) r *= b;
  return r;
}

Polynomial Polynomial::constant(int nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int var) {
  Exponents a(nvars, 0);
  a.at(var) = 1;
  return monomial(a, 1);
}

Polynomial Polynomial::monomial(const Exponents& alpha, const Rational& c) {
  Polynomial p(static_cast<int>(alpha.size()));
  p.add_term(alpha, c);
  return p;
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  for (int e : terms_.begin()->first)
    if (e != 0) return false;
  return true;
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Exponents(nvars_, 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [a, c] : terms_) {
    int s = 0;
    for (int e : a) s += e;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(const Exponents& alpha, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (nvars_ == 0 && terms_.empty()) nvars_ = o.nvars_;
  for (const auto& [a, c] : o.terms_) add_term(a, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (nvars_ == 0 && terms_.empty()) nvars_ = o.nvars_;
  for (const auto& [a, c] : o.terms_) add_term(a, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [a, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r(std::max(a.nvars_, b.nvars_));
  Exponents e(r.nvars_, 0);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < r.nvars_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [a, c] : r.terms_) c = -c;
  return r;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r = constant(nvars_, 1);
  Polynomial b = *this;
  while (k) {
    if (k & 1u) r = r * b;
    k >>= 1u;
    if (k) b = b * b;
  }
  return r;
}

Polynomial Polynomial::diff(int var) const {
  Polynomial r(nvars_);
  for (const auto& [a, c] : terms_) {
    if (a[var] == 0) continue;
    Exponents e = a;
    e[var] -= 1;
    r.add_term(e, c * a[var]);
  }
  return r;
}

double Polynomial::eval(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double s = 0;
  for (const auto& [a, c] : terms_) {
    double t = c.get_d();
    for (int i = 0; i < nvars_; ++i)
      if (a[i]) t *= std::pow(x[i], a[i]);
    s += t;
  }
  return s;
}

Rational Polynomial::eval(std::span<const Rational> x) const {
  Rational s = 0;
  for (const auto& [a, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < a[i]; ++k) t *= x[i];
    s += t;
  }
  return s;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& subs) const {
  if (static_cast<int>(subs.size()) != nvars_)
    throw std::invalid_argument("compose: substitution count mismatch");
  int m = subs.empty() ? 0 : subs.front().nvars();
  // cache powers of each substituted polynomial
  std::vector<std::vector<Polynomial>> powers(nvars_);
  Polynomial r(m);
  for (const auto& [a, c] : terms_) {
    Polynomial t = constant(m, c);
    for (int i = 0; i < nvars_; ++i) {
      if (a[i] == 0) continue;
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(constant(m, 1));
      while (static_cast<int>(pw.size()) <= a[i]) pw.push_back(pw.back() * subs[i]);
      t = t * pw[a[i]];
    }
    r += t;
  }
  return r;
}

int Polynomial::weighted_order(const Weights& w) const {
  int best = std::numeric_limits<int>::max() / 2;
  for (const auto& [a, c] : terms_) {
    int s = 0;
    for (int i = 0; i < nvars_; ++i) s += a[i] * w[i];
    best = std::min(best, s);
  }
  return best;
}

int Polynomial::weighted_degree(const Weights& w) const {
  int best = -1;
  for (const auto& [a, c] : terms_) {
    int s = 0;
    for (int i = 0; i < nvars_; ++i) s += a[i] * w[i];
    best = std::max(best, s);
  }
  return best;
}

Polynomial Polynomial::weighted_part(const Weights& w, int d) const {
  Polynomial r(nvars_);
  for (const auto& [a, c] : terms_) {
    int s = 0;
    for (int i = 0; i < nvars_; ++i) s += a[i] * w[i];
    if (s == d) r.terms_.emplace(a, c);
  }
  return r;
}

Polynomial Polynomial::weighted_scale(const Weights& w, const Rational& lambda, int shift) const {
  Polynomial r(nvars_);
  for (const auto& [a, c] : terms_) {
    int s = shift;
    for (int i = 0; i < nvars_; ++i) s += a[i] * w[i];
    if (s < 0) throw std::invalid_argument("weighted_scale: negative exponent");
    r.add_term(a, c * srm::pow(lambda, s));
  }
  return r;
}

Polynomial Polynomial::extend(int nvars) const {
  if (nvars < nvars_) throw std::invalid_argument("extend: cannot drop variables");
  Polynomial r(nvars);
  for (const auto& [a, c] : terms_) {
    Exponents e = a;
    e.resize(nvars, 0);
    r.terms_.emplace(std::move(e), c);
  }
  return r;
}

std::string Polynomial::to_string(const std::string& prefix) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // highest total degree first reads more naturally
  std::vector<std::pair<Exponents, Rational>> ordered(terms_.rbegin(), terms_.rend());
  for (const auto& [a, c] : ordered) {
    Rational mag = abs(c);
    bool neg = c < 0;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    bool has_var = false;
    for (int e : a)
      if (e) has_var = true;
    bool wrote_coef = false;
    if (!has_var || mag != 1) {
      os << mag.get_str();
      wrote_coef = true;
    }
    for (int i = 0; i < nvars_; ++i) {
      if (!a[i]) continue;
      if (wrote_coef) os << "*";
      os << prefix << (i + 1);
      if (a[i] > 1) os << "^" << a[i];
      wrote_coef = true;
    }
  }
  return os.str();
}

}  // namespace srm
