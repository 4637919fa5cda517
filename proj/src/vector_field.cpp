#include "srm/vector_field.hpp"

#include <stdexcept>

namespace srm {

VectorField::VectorField(std::vector<Polynomial> components) : components_(std::move(components)) {
  for (const auto& c : components_)
    if (c.nvars() != dim()) throw std::invalid_argument("vector field: component ring mismatch");
}

VectorField VectorField::zero(int dim) { return VectorField(std::vector<Polynomial>(dim, Polynomial(dim))); }

VectorField VectorField::coordinate(int dim, int k) {
  VectorField v = zero(dim);
  v.components_.at(k) = Polynomial::constant(dim, 1);
  return v;
}

bool VectorField::is_zero() const {
  for (const auto& c : components_)
    if (!c.is_zero()) return false;
  return true;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  if (o.dim() != dim()) throw std::invalid_argument("vector field: dimension mismatch");
  for (int k = 0; k < dim(); ++k) components_[k] += o.components_[k];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  if (o.dim() != dim()) throw std::invalid_argument("vector field: dimension mismatch");
  for (int k = 0; k < dim(); ++k) components_[k] -= o.components_[k];
  return *this;
}

VectorField operator*(const Rational& c, VectorField a) {
  for (auto& comp : a.components_) comp *= c;
  return a;
}

VectorField operator*(const Polynomial& f, const VectorField& a) {
  std::vector<Polynomial> out;
  out.reserve(a.components_.size());
  for (const auto& comp : a.components_) out.push_back(f * comp);
  return VectorField(std::move(out));
}

VectorField VectorField::operator-() const {
  VectorField r = *this;
  for (auto& comp : r.components_) comp = -comp;
  return r;
}

Polynomial VectorField::apply(const Polynomial& f) const {
  Polynomial r(dim());
  for (int j = 0; j < dim(); ++j) {
    if (components_[j].is_zero()) continue;
    Polynomial d = f.diff(j);
    if (!d.is_zero()) r += components_[j] * d;
  }
  return r;
}

Eigen::VectorXd VectorField::eval(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd v(dim());
  for (int k = 0; k < dim(); ++k) v[k] = components_[k].eval(x);
  return v;
}

std::vector<Rational> VectorField::eval(std::span<const Rational> x) const {
  std::vector<Rational> v;
  v.reserve(dim());
  for (const auto& c : components_) v.push_back(c.eval(x));
  return v;
}

std::string VectorField::to_string(const std::string& prefix) const {
  std::string s = "(";
  for (int k = 0; k < dim(); ++k) {
    if (k) s += ", ";
    s += components_[k].to_string(prefix);
  }
  return s + ")";
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("lie_bracket: dimension mismatch");
  std::vector<Polynomial> out;
  out.reserve(x.dim());
  for (int k = 0; k < x.dim(); ++k) out.push_back(x.apply(y[k]) - y.apply(x[k]));
  return VectorField(std::move(out));
}

}  // namespace srm
