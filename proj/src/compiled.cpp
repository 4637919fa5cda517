#include "srm/compiled.hpp"

#include <algorithm>

namespace srm {

CompiledPoly::CompiledPoly(const Polynomial& p) : nvars_(p.nvars()) {
  for (const auto& [alpha, c] : p.terms()) {
    coef_.push_back(c.get_d());
    for (int e : alpha) {
      exps_.push_back(e);
      max_exp_ = std::max(max_exp_, e);
    }
  }
}

CompiledFamily::CompiledFamily(const std::vector<VectorField>& fields)
    : n_(fields.empty() ? 0 : fields.front().dim()), m_(static_cast<int>(fields.size())) {
  for (int i = 0; i < m_; ++i)
    for (int k = 0; k < n_; ++k) {
      const Polynomial& c = fields[i][k];
      if (c.is_zero()) continue;
      comp_.push_back({i, k, 0, CompiledPoly(c)});
      max_exp_ = std::max(max_exp_, comp_.back().poly.max_exponent());
      for (int j = 0; j < n_; ++j) {
        Polynomial d = c.diff(j);
        if (!d.is_zero()) grad_.push_back({i, k, j, CompiledPoly(d)});
      }
    }
  powers_.resize(n_, max_exp_ + 1);
}

void CompiledFamily::power_table(const Eigen::Ref<const Eigen::VectorXd>& q) const {
  for (int j = 0; j < n_; ++j) {
    powers_(j, 0) = 1.0;
    for (int e = 1; e <= max_exp_; ++e) powers_(j, e) = powers_(j, e - 1) * q[j];
  }
}

void CompiledFamily::fields(const Eigen::Ref<const Eigen::VectorXd>& q, Eigen::MatrixXd& X) const {
  power_table(q);
  X.setZero(n_, m_);
  for (const auto& c : comp_) X(c.k, c.i) = c.poly.eval(powers_);
}

void CompiledFamily::fields_and_jacobians(const Eigen::Ref<const Eigen::VectorXd>& q, Eigen::MatrixXd& X,
                                          std::vector<Eigen::MatrixXd>& DX) const {
  power_table(q);
  X.setZero(n_, m_);
  DX.resize(m_);
  for (auto& d : DX) d.setZero(n_, n_);
  for (const auto& c : comp_) X(c.k, c.i) = c.poly.eval(powers_);
  for (const auto& g : grad_) DX[g.i](g.k, g.j) = g.poly.eval(powers_);
}

}  // namespace srm
