#include "srm/nilpotent.hpp"

#include <algorithm>
#include <functional>

#include "srm/errors.hpp"
#include "srm/flag.hpp"

namespace srm {

Eigen::VectorXd PrivilegedChart::to_z(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd z(dim());
  for (int j = 0; j < dim(); ++j) z[j] = to_privileged[j].eval(x);
  return z;
}

Eigen::VectorXd PrivilegedChart::to_x(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  Eigen::VectorXd x(dim());
  for (int j = 0; j < dim(); ++j) x[j] = from_privileged[j].eval(z);
  return x;
}

double PrivilegedChart::jacobian() const { return std::abs(exact_det(frame_matrix).get_d()); }

double NilpotentApprox::density_at_origin() const { return density.constant_term().get_d(); }

int weighted_order_at(const std::vector<VectorField>& family, const Polynomial& f, std::span<const Rational> p,
                      int max_order) {
  std::vector<Polynomial> layer{f};
  for (int s = 0; s <= max_order; ++s) {
    for (const auto& g : layer)
      if (g.eval(p) != 0) return s;
    if (s == max_order) break;
    std::vector<Polynomial> next;
    for (const auto& g : layer)
      for (const auto& x : family) {
        Polynomial h = x.apply(g);
        if (h.is_zero()) continue;
        if (std::find(next.begin(), next.end(), h) == next.end()) next.push_back(std::move(h));
      }
    layer = std::move(next);
  }
  return max_order + 1;
}

namespace {

// Multi-indices alpha in N^len with |alpha| = total.
void multi_indices(int len, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == len - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = total; a >= 0; --a) {
    cur.push_back(a);
    multi_indices(len, total - a, cur, out);
    cur.pop_back();
  }
}

Rational factorial(int k) {
  Rational r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

}  // namespace

PrivilegedChart privileged_chart(const SRStructure& s, const std::vector<Rational>& p, const AdaptedFrame& frame) {
  const int n = s.dim;
  if (static_cast<int>(frame.fields.size()) != n)
    throw ChartDegenerate("frame has " + std::to_string(frame.fields.size()) + " vectors in dimension " +
                          std::to_string(n));
  PrivilegedChart c;
  c.base = p;
  c.weights = frame.levels;
  std::vector<std::vector<Rational>> cols;
  for (const auto& y : frame.fields) cols.push_back(y.eval(std::span<const Rational>(p)));
  c.frame_matrix = columns_to_matrix(cols, n);
  auto inv = exact_inverse(c.frame_matrix);
  if (!inv) throw ChartDegenerate("frame vectors are linearly dependent at the base point");

  // linearly adapted coordinates y(x) = A^{-1}(x - p)
  std::vector<Polynomial> y_of_x(n, Polynomial(n));
  for (int j = 0; j < n; ++j) {
    Polynomial yj(n);
    for (int k = 0; k < n; ++k) {
      if ((*inv)(j, k) == 0) continue;
      yj += (*inv)(j, k) * (Polynomial::variable(n, k) - Polynomial::constant(n, p[k]));
    }
    y_of_x[j] = yj;
  }

  // h[j] = sum_k h_{j,k}, as a polynomial in the y variables
  std::vector<Polynomial> h(n, Polynomial(n));
  const auto& w = c.weights;
  for (int j = 0; j < n; ++j) {
    for (int k = 2; k <= w[j] - 1 && j > 0; ++k) {
      Polynomial g = y_of_x[j] - h[j].compose(y_of_x);
      std::vector<std::vector<int>> alphas;
      std::vector<int> cur;
      multi_indices(j, k, cur, alphas);
      Polynomial hk(n);
      for (const auto& alpha : alphas) {
        int wa = 0;
        for (int i = 0; i < j; ++i) wa += alpha[i] * w[i];
        if (wa >= w[j]) continue;
        // Y_1^{a_1} ... Y_{j-1}^{a_{j-1}} g, innermost factor applied first
        Polynomial d = g;
        for (int i = j - 1; i >= 0 && !d.is_zero(); --i)
          for (int r = 0; r < alpha[i]; ++r) d = frame.fields[i].apply(d);
        Rational v = d.eval(std::span<const Rational>(p));
        if (v == 0) continue;
        Rational denom = 1;
        Exponents e(n, 0);
        for (int i = 0; i < j; ++i) {
          denom *= factorial(alpha[i]);
          e[i] = alpha[i];
        }
        hk.add_term(e, v / denom);
      }
      h[j] += hk;
    }
    if (!h[j].is_zero()) c.affine = false;
  }

  c.to_privileged.resize(n);
  for (int j = 0; j < n; ++j) c.to_privileged[j] = y_of_x[j] - h[j].compose(y_of_x);

  // inverse: y_j(z) = z_j + h_j(y_1(z), ..., y_{j-1}(z)); h_j only involves earlier y's
  std::vector<Polynomial> y_of_z(n, Polynomial(n));
  for (int j = 0; j < n; ++j) {
    std::vector<Polynomial> subs = y_of_z;
    for (int i = j; i < n; ++i) subs[i] = Polynomial(n);
    y_of_z[j] = Polynomial::variable(n, j) + h[j].compose(subs);
  }
  c.from_privileged.resize(n);
  for (int k = 0; k < n; ++k) {
    Polynomial xk = Polynomial::constant(n, p[k]);
    for (int j = 0; j < n; ++j)
      if (c.frame_matrix(k, j) != 0) xk += c.frame_matrix(k, j) * y_of_z[j];
    c.from_privileged[k] = xk;
  }

  const int wmax = *std::max_element(w.begin(), w.end());
  for (int j = 0; j < n; ++j) {
    int ord = weighted_order_at(s.fields, c.to_privileged[j], p, wmax);
    if (ord != w[j])
      throw ChartDegenerate("coordinate z" + std::to_string(j + 1) + " has order " + std::to_string(ord) +
                            ", expected weight " + std::to_string(w[j]));
  }
  return c;
}

NilpotentApprox nilpotentize(const SRStructure& s, const PrivilegedChart& chart) {
  const int n = s.dim;
  NilpotentApprox a;
  a.chart = chart;
  const auto& w = chart.weights;
  for (int i = 0; i < s.m(); ++i) {
    std::vector<Polynomial> full, trunc;
    for (int k = 0; k < n; ++k) {
      Polynomial comp = s.fields[i].apply(chart.to_privileged[k]).compose(chart.from_privileged);
      if (!comp.is_zero() && comp.weighted_order(w) < w[k] - 1)
        throw ChartDegenerate("component " + std::to_string(k + 1) + " of field " + std::to_string(i + 1) +
                              " has weighted order " + std::to_string(comp.weighted_order(w)) + " < " +
                              std::to_string(w[k] - 1));
      trunc.push_back(comp.weighted_part(w, w[k] - 1));
      full.push_back(std::move(comp));
    }
    a.full_fields.emplace_back(std::move(full));
    a.fields.emplace_back(std::move(trunc));
  }
  std::vector<int> expected;
  {
    std::vector<int> counts;
    for (int wi : w) {
      if (static_cast<int>(counts.size()) < wi) counts.resize(wi, 0);
      ++counts[wi - 1];
    }
    int acc = 0;
    for (int c : counts) expected.push_back(acc += c);
  }
  FlagData f;
  try {
    f = flag_at(a.fields, Eigen::VectorXd::Zero(n));
  } catch (const NotBracketGenerating& e) {
    throw TruncationNotGenerating(e.what());
  }
  if (f.growth != expected) throw TruncationNotGenerating("truncated family has a different growth vector at 0");
  a.growth = f.growth;
  a.Q = f.Q;
  Rational detA = abs(exact_det(chart.frame_matrix));
  a.density = s.volume.compose(chart.from_privileged) * detA;
  if (a.density.constant_term() < 0) a.density = -a.density;
  return a;
}

AdaptedFrame max_volume_frame(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p) {
  BracketTable table(s.fields);
  FlagData flag = flag_at(table, s.dim, p);
  auto frames = adapted_frames(table, p, flag);
  if (frames.empty()) throw ChartDegenerate("no adapted frame found");
  std::size_t best = 0;
  double best_v = -1;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    double v = frame_volume(s, p, frames[i]);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  return frames[best];
}

NilpotentApprox nilpotent_approximation(const SRStructure& s, const std::vector<Rational>& p) {
  return nilpotentize(s, privileged_chart(s, p, max_volume_frame(s, to_double(p))));
}

bool is_dilation_homogeneous(const std::vector<VectorField>& fields, const Weights& w) {
  if (fields.empty()) return true;
  const int n = fields.front().dim();
  Polynomial lambda = Polynomial::variable(n + 1, n);
  std::vector<Polynomial> subs;
  for (int j = 0; j < n; ++j) subs.push_back(lambda.pow(static_cast<unsigned>(w[j])) * Polynomial::variable(n + 1, j));
  for (const auto& f : fields)
    for (int k = 0; k < n; ++k) {
      const Polynomial& c = f[k];
      if (c.is_zero()) continue;
      if (w[k] - 1 < 0) return false;
      Polynomial lhs = c.compose(subs);
      Polynomial rhs = lambda.pow(static_cast<unsigned>(w[k] - 1)) * c.extend(n + 1);
      if (!(lhs == rhs)) return false;
    }
  return true;
}

namespace {

SRStructure chart_structure(const NilpotentApprox& a, std::vector<VectorField> fields, Polynomial density,
                            double halfwidth, const std::vector<std::string>& names) {
  SRStructure t;
  t.dim = a.dim();
  t.field_names = names;
  t.fields = std::move(fields);
  t.volume = std::move(density);
  Rational h = rational_from_double(halfwidth);
  t.box.lo.assign(t.dim, -h);
  t.box.hi.assign(t.dim, h);
  t.probe.assign(t.dim, Rational(0));
  return t;
}

std::vector<std::string> default_names(int m) {
  std::vector<std::string> v;
  for (int i = 0; i < m; ++i) v.push_back("X" + std::to_string(i + 1));
  return v;
}

}  // namespace

SRStructure nilpotent_structure(const NilpotentApprox& approx, double box_halfwidth) {
  return chart_structure(approx, approx.fields, Polynomial::constant(approx.dim(), approx.density.constant_term()),
                         box_halfwidth, default_names(static_cast<int>(approx.fields.size())));
}

SRStructure blowup_structure(const NilpotentApprox& approx, const Rational& eps, double box_halfwidth) {
  const auto& w = approx.weights();
  std::vector<VectorField> fields;
  for (const auto& f : approx.full_fields) {
    std::vector<Polynomial> comps;
    for (int k = 0; k < approx.dim(); ++k) comps.push_back(f[k].weighted_scale(w, eps, 1 - w[k]));
    fields.emplace_back(std::move(comps));
  }
  auto names = default_names(static_cast<int>(fields.size()));
  return chart_structure(approx, std::move(fields), approx.density.weighted_scale(w, eps, 0), box_halfwidth, names);
}

}  // namespace srm
