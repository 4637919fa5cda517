// Acceptance runner: `srm_acceptance [n...]` evaluates criteria 1..10 (all by
// default) and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "srm/blowup.hpp"
#include "srm/distance.hpp"
#include "srm/errors.hpp"
#include "srm/flag.hpp"
#include "srm/frames.hpp"
#include "srm/measures.hpp"
#include "srm/nilpotent.hpp"
#include "srm/popp.hpp"
#include "srm/structure.hpp"

using namespace srm;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(SRM_DATA_DIR) + "/" + name; }

const SRStructure& heis() {
  static const SRStructure s = load_structure(data("heisenberg.srm"));
  return s;
}
const SRStructure& grushin() {
  static const SRStructure s = load_structure(data("grushin.srm"));
  return s;
}
const SRStructure& martinet() {
  static const SRStructure s = load_structure(data("martinet.srm"));
  return s;
}
// Non-free family: three generators spanning a 2-plane, so several adapted frames compete.
const SRStructure& redundant() {
  static const SRStructure s = parse_structure(
      "dim = 3\nfield X1 = (1, 0, 0)\nfield X2 = (0, 1, x1)\nfield X3 = (1, 1, x1 - x2)\nvolume = 1 + x1^2\n"
      "box = [-1,1] x [-1,1] x [-1,1]\nprobe = (0, 0, 0)\n");
  return s;
}
const SRStructure& plane() {
  static const SRStructure s = parse_structure(
      "dim = 2\nfield X1 = (1, 0)\nfield X2 = (0, 1)\nvolume = 1\nbox = [-1,1] x [-1,1]\nprobe = (0, 0)\n");
  return s;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

Box box(std::initializer_list<std::pair<Rational, Rational>> sides) {
  Box b;
  for (const auto& [lo, hi] : sides) {
    b.lo.push_back(lo);
    b.hi.push_back(hi);
  }
  return b;
}

// Collects sub-check outcomes; the criterion passes iff every check does.
struct Report {
  bool ok = true;
  std::vector<std::string> notes;
  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("FAILED " + what);
    } else {
      notes.push_back(what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream ss;
  ss.precision(prec);
  ss << v;
  return ss.str();
}

std::string list(const std::vector<double>& v, int prec = 3) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i], prec);
  return s + "]";
}

std::string list(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

bool singular_exactly_on_x1_zero(const std::vector<GridPoint>& g) {
  for (const auto& p : g)
    if ((p.cls == PointClass::Singular) != (std::abs(p.point[0]) < 1e-12)) return false;
  return true;
}

// 1. Flags, singular sets, Q and Q_N.
void criterion1(Report& r) {
  auto gr = flag_at(grushin(), vec({1, 0}));
  auto gs = flag_at(grushin(), vec({0, 5}));
  r.check(gr.growth == std::vector<int>{2} && gr.Q == 2, "grushin (1,0) growth " + list(gr.growth) + " Q " + std::to_string(gr.Q));
  r.check(gs.growth == std::vector<int>{1, 2} && gs.Q == 3 && gs.weights == std::vector<int>{1, 2},
          "grushin (0,5) growth " + list(gs.growth) + " Q " + std::to_string(gs.Q));
  auto ms = flag_at(martinet(), vec({0, 1, 1}));
  auto mr = flag_at(martinet(), vec({1, 0, 0}));
  r.check(ms.growth == std::vector<int>{2, 2, 3} && ms.Q == 5 && ms.weights == std::vector<int>{1, 1, 3},
          "martinet (0,1,1) growth " + list(ms.growth) + " Q " + std::to_string(ms.Q));
  r.check(mr.growth == std::vector<int>{2, 3} && mr.Q == 4, "martinet (1,0,0) growth " + list(mr.growth) + " Q " + std::to_string(mr.Q));
  r.check(singular_exactly_on_x1_zero(classify_grid(grushin(), GridSpec{{21, 21}, {}})), "grushin 21x21 singular set = axis");
  r.check(singular_exactly_on_x1_zero(classify_grid(martinet(), GridSpec{{9, 9, 9}, {}})), "martinet 9^3 singular set = plane");
  auto axis = equisingular_check(grushin(), grushin().stratum("axis"));
  auto pl = equisingular_check(martinet(), martinet().stratum("plane"));
  r.check(axis.Q_N == 2, "grushin axis Q_N " + std::to_string(axis.Q_N));
  r.check(pl.Q_N == 4, "martinet plane Q_N " + std::to_string(pl.Q_N));
  bool heis_ok = true;
  for (const auto& p : classify_grid(heis(), GridSpec{{9, 9, 9}, {}}))
    heis_ok = heis_ok && p.cls == PointClass::Regular && p.flag.growth == std::vector<int>{2, 3} && p.flag.Q == 4;
  r.check(heis_ok, "heisenberg 9^3 grid growth (2,3) Q 4");
}

// 2. Popp densities and frame independence.
void criterion2(Report& r) {
  double worst = 0;
  for (auto p : {vec({0, 0, 0}), vec({0.5, -0.25, 0.75}), vec({-1, 1, 0.125})})
    worst = std::max(worst, std::abs(popp_density(heis(), p).value - 1.0));
  r.check(worst < 1e-9, "heisenberg |dP/dmu - 1| max " + fmt(worst));
  double rel = 0;
  for (double t : {1.0, -1.0, 0.5, -0.5, 0.25, -0.25})
    rel = std::max(rel, std::abs(popp_density(grushin(), vec({t, 0.375})).value * std::abs(t) - 1.0));
  r.check(rel < 1e-9, "grushin |dP/dmu |x1| - 1| max " + fmt(rel));
  double spread = 0;
  std::size_t frames = 0;
  const std::vector<std::pair<const SRStructure*, Eigen::VectorXd>> pts{
      {&heis(), vec({0.25, 0.5, -0.5})}, {&grushin(), vec({0.5, 0.5})},       {&grushin(), vec({-0.75, 0})},
      {&martinet(), vec({0.5, 0.25, 0})}, {&martinet(), vec({-0.25, 1, 1})}, {&redundant(), vec({0.5, -0.25, 0})},
      {&redundant(), vec({0, 0, 0})}};
  for (const auto& [s, p] : pts) {
    auto all = popp_density_all_frames(*s, p);
    frames += all.size();
    for (const auto& d : all) spread = std::max(spread, std::abs(d.value - all.front().value) / all.front().value);
  }
  r.check(spread < 1e-9, "frame independence over " + std::to_string(frames) + " frames, spread " + fmt(spread));
}

// 3. Weak equivalence nu * dP/dmu and blow-up toward the singular set.
void criterion3(Report& r) {
  auto g9 = weak_equivalent_check(grushin(), GridSpec{{9, 9}, {}});
  auto g17 = weak_equivalent_check(grushin(), GridSpec{{17, 17}, {}});
  r.check(g9.C <= 2 && g17.C <= 2, "grushin C " + fmt(g9.C) + " / " + fmt(g17.C));
  auto h5 = weak_equivalent_check(heis(), GridSpec{{5, 5, 5}, {}});
  auto h9 = weak_equivalent_check(heis(), GridSpec{{9, 9, 9}, {}});
  r.check(h5.C <= 2 && h9.C <= 2, "heisenberg C " + fmt(h5.C) + " / " + fmt(h9.C));
  auto m5 = weak_equivalent_check(martinet(), GridSpec{{5, 5, 5}, {}});
  auto m9 = weak_equivalent_check(martinet(), GridSpec{{9, 9, 9}, {}});
  r.check(std::isfinite(m9.C) && std::abs(m9.C / m5.C - 1) <= 0.1,
          "martinet C " + fmt(m5.C) + " -> " + fmt(m9.C) + " under refinement");
  r.check(std::abs(g17.C / g9.C - 1) <= 0.1 && std::abs(h9.C / h5.C - 1) <= 0.1, "grushin/heisenberg C stable");
  bool mono = true;
  double prev_nu = 1e300, prev_d = 0;
  for (int k = 2; k <= 64; ++k) {
    Eigen::VectorXd q = vec({1.0 / k, 0});
    const double n = nu(grushin(), q), d = popp_density(grushin(), q).value;
    mono = mono && n < prev_nu && d > prev_d;
    prev_nu = n;
    prev_d = d;
  }
  r.check(mono, "nu(1/k,0) -> " + fmt(prev_nu) + " decreasing, dP/dmu -> " + fmt(prev_d) + " increasing, k=2..64");
}

// 4. Stratified Popp measures on Grushin.
void criterion4(Report& r) {
  Box sq = box({{-1, 1}, {-1, 1}});
  auto m = stratified_measures(grushin(), sq);
  r.check(m.P2_divergent, std::string("P_2 ") + (m.P2_divergent ? "divergent" : fmt(m.P2)));
  double axis = 0, regular = 0;
  for (const auto& s : m.strata) (s.open ? regular : axis) += s.divergent ? INFINITY : s.value;
  r.check(axis > 0 && regular > 0, "axis term " + fmt(axis) + ", regular term " + fmt(regular));
  r.check(!m.P1_divergent && std::isfinite(m.P1),
          std::string("P_1 finite: ") + (m.P1_divergent ? "no, the regular term diverges like the integral of 1/|x1|" : fmt(m.P1)));
  auto inner = stratified_measures(grushin(), box({{Rational(1, 4), 1}, {-1, 1}}));
  r.check(std::abs(inner.P1 - inner.P2) <= inner.P1_stderr + 1e-12,
          "regular region P_1 " + fmt(inner.P1) + " = P_2 " + fmt(inner.P2) + " +- " + fmt(inner.P1_stderr));
}

// 5. Ball volume scaling against the tangent ball.
void criterion5(Report& r) {
  MeasureOptions o;
  o.budget = 1;
  o.samples = 2000;
  const std::vector<double> eps{0.4, 0.2, 0.1};
  struct Case {
    const char* name;
    const SRStructure* s;
    Eigen::VectorXd p;
    double limit;
  };
  const std::vector<Case> cases{{"heisenberg 0", &heis(), vec({0, 0, 0}), 0.10},
                                {"grushin (1,0)", &grushin(), vec({1, 0}), 0.15},
                                {"martinet (1,0,0)", &martinet(), vec({1, 0, 0}), 0.15}};
  for (const auto& c : cases) {
    auto rows = density_consistency(*c.s, c.p, eps, o);
    std::vector<double> gaps, errs;
    for (const auto& row : rows) {
      gaps.push_back(row.gap);
      errs.push_back(row.gap_error);
    }
    r.check(gaps.back() < c.limit && decreasing_within_noise(gaps, errs),
            std::string(c.name) + " gaps " + list(gaps) + " +- " + list(errs, 2));
  }
  for (double t : {1.0, 0.5}) {
    o.samples = 4000;
    auto m = mu_hat_ball(grushin(), vec({t, 0}), o);
    r.check(std::abs(m.mean - M_PI * t) < 3 * m.std_error,
            "grushin mu_hat at (" + fmt(t) + ",0) = " + fmt(m.mean) + " +- " + fmt(m.std_error, 2) + " vs pi t");
  }
}

// 6. Measured Gromov-Hausdorff blow-ups.
void criterion6(Report& r) {
  const std::vector<double> eps{0.4, 0.2, 0.1};
  DistortionOptions o;
  o.measure.budget = 1;
  o.measure.samples = 1000;
  struct Case {
    const char* name;
    const SRStructure* s;
    Eigen::VectorXd p;
    bool exact;  // homogeneous base point
  };
  const std::vector<Case> cases{{"heisenberg 0", &heis(), vec({0, 0, 0}), true},
                                {"grushin (1,0)", &grushin(), vec({1, 0}), false},
                                {"grushin (0,0)", &grushin(), vec({0, 0}), true},
                                {"martinet (1,0,0)", &martinet(), vec({1, 0, 0}), false},
                                {"martinet 0", &martinet(), vec({0, 0, 0}), true}};
  for (const auto& c : cases) {
    auto e = blowup_experiment(*c.s, c.p, 1.0, eps, BlowupMeasure::Smooth, o);
    std::vector<double> dist, derr, smooth, serr, sph, sperr;
    for (const auto& row : e.rows) {
      dist.push_back(row.distortion.value);
      derr.push_back(row.distortion.error);
      smooth.push_back(row.discrepancy.value);
      serr.push_back(row.discrepancy.std_error);
      auto s = measure_discrepancy(*c.s, c.p, 1.0, row.eps, BlowupMeasure::Spherical, o.measure);
      sph.push_back(s.value);
      sperr.push_back(s.std_error);
    }
    bool ok = decreasing_within_noise(dist, derr) && decreasing_within_noise(smooth, serr) &&
              decreasing_within_noise(sph, sperr);
    if (c.exact)
      for (std::size_t i = 0; i < eps.size(); ++i)
        ok = ok && dist[i] <= derr[i] + 1e-9 && smooth[i] <= 3 * serr[i] + 1e-9 && sph[i] <= 3 * sperr[i] + 1e-9;
    r.check(ok, std::string(c.name) + " distortion " + list(dist) + ", smooth " + list(smooth) + ", spherical " + list(sph));
  }
}

// 7. Isodiametric ratios.
void criterion7(Report& r) {
  const auto start = std::chrono::steady_clock::now();
  IsodiametricOptions o;
  o.measure.samples = 10000;
  std::vector<Rational> zero{0, 0, 0};
  auto h = isodiametric_search(nilpotent_approximation(heis(), zero), o);
  r.check(h.candidates.front().name == "ball" && h.candidates.front().ratio == 1.0,
          "heisenberg ball ratio " + fmt(h.candidates.front().ratio, 17));
  double best_caps = 0;
  for (const auto& c : h.candidates) {
    r.note(c.name + " ratio " + fmt(c.ratio) + " certified " + fmt(c.certified));
    if (c.name.find("caps") != std::string::npos) best_caps = std::max(best_caps, c.certified);
  }
  r.check(best_caps >= 1.02, "heisenberg ball+caps certified " + fmt(best_caps) + " >= 1.02");
  auto e = isodiametric_search(plane().fields, Weights{1, 1}, o);
  double worst = 0;
  for (const auto& c : e.candidates) worst = std::max(worst, c.certified);
  r.check(e.candidates.front().ratio == 1.0 && worst <= 1.005, "euclidean plane best certified " + fmt(worst));
  const double minutes = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 60;
  r.check(minutes <= 15, "runtime " + fmt(minutes, 3) + " min");
}

// 8. Covering dimensions.
void criterion8(Report& r) {
  auto axis = covering_dimension(grushin(), stratum_sampler(grushin(), grushin().stratum("axis")),
                                 {0.4, 0.28, 0.2, 0.14, 0.1});
  r.check(std::abs(axis.dimension - 2.0) <= 0.2, "grushin axis slope " + fmt(axis.dimension));
  Box hb = box({{Rational(-1, 2), Rational(1, 2)}, {Rational(-1, 2), Rational(1, 2)}, {0, Rational(1, 4)}});
  Box win = box({{Rational(-1, 4), Rational(1, 4)}, {Rational(-1, 4), Rational(1, 4)}, {Rational(1, 16), Rational(3, 16)}});
  auto hd = covering_dimension(heis(), box_sampler(heis(), hb, {1, 1, 2}, 2.0), {0.16, 0.13, 0.1, 0.08, 0.065}, win);
  r.check(std::abs(hd.dimension - 4.0) <= 0.3, "heisenberg box slope " + fmt(hd.dimension));
  Box seg = box({{Rational(1, 2), Rational(1, 2)}, {Rational(-1, 2), Rational(1, 2)}});
  auto sd = covering_dimension(grushin(), box_sampler(grushin(), seg), {0.2, 0.1, 0.05, 0.025});
  r.check(std::abs(sd.dimension - 1.0) <= 0.1, "segment in the regular region slope " + fmt(sd.dimension));
}

// 9. Calculus and metric property suite.
VectorField random_field(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, 2);
  std::vector<Polynomial> comps;
  for (int k = 0; k < n; ++k) {
    Polynomial p(n);
    for (int t = 0; t < 3; ++t) {
      Exponents a(static_cast<std::size_t>(n));
      for (auto& e : a) e = deg(rng) / (1 + static_cast<int>(rng() % 2));
      p.add_term(a, Rational(coef(rng)));
    }
    comps.push_back(p);
  }
  return VectorField(comps);
}

void criterion9(Report& r) {
  std::mt19937_64 rng(2024);
  int algebra = 0;
  for (int t = 0; t < 50; ++t) {
    VectorField x = random_field(rng, 3), y = random_field(rng, 3), z = random_field(rng, 3);
    const Rational a(3, 7), b(-2);
    const bool ok = (lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) + lie_bracket(z, lie_bracket(x, y))).is_zero() &&
                    lie_bracket(x, y) == -lie_bracket(y, x) && lie_bracket(x, x).is_zero() &&
                    lie_bracket(a * x + b * y, z) == a * lie_bracket(x, z) + b * lie_bracket(y, z);
    algebra += ok;
  }
  r.check(algebra == 50, "jacobi, antisymmetry, bilinearity exact on " + std::to_string(algebra) + "/50");

  std::uniform_real_distribution<double> u(-1, 1);
  double fd_err = 0;
  for (int t = 0; t < 50; ++t) {
    VectorField x = random_field(rng, 3);
    const Polynomial& f = x[0];
    Eigen::VectorXd p(3);
    for (int i = 0; i < 3; ++i) p[i] = u(rng);
    for (int k = 0; k < 3; ++k) {
      Eigen::VectorXd a = p, b = p;
      a[k] += 1e-5;
      b[k] -= 1e-5;
      fd_err = std::max(fd_err, std::abs((f.eval(a) - f.eval(b)) / 2e-5 - f.diff(k).eval(p)));
    }
  }
  r.check(fd_err < 1e-6, "symbolic vs finite difference derivatives, max error " + fmt(fd_err));

  int homog = 0, homog_total = 0;
  std::uniform_int_distribution<int> dy(-8, 8);
  for (const SRStructure* s : {&heis(), &grushin(), &martinet()}) {
    for (int t = 0; t < 10; ++t) {
      std::vector<Rational> p;
      for (int i = 0; i < s->dim; ++i) p.emplace_back(dy(rng), 8);
      auto a = nilpotent_approximation(*s, p);
      homog += is_dilation_homogeneous(a.fields, a.weights());
      ++homog_total;
    }
  }
  r.check(homog == homog_total, "dilation homogeneity exact on " + std::to_string(homog) + "/" + std::to_string(homog_total));

  int tri = 0, tri_total = 0;
  std::uniform_real_distribution<double> half(-0.5, 0.5);
  for (int t = 0; t < 50; ++t) {
    const SRStructure& s = t % 2 ? grushin() : heis();
    auto rnd = [&] {
      Eigen::VectorXd x(s.dim);
      for (int i = 0; i < s.dim; ++i) x[i] = half(rng);
      if (s.dim == 2) x[0] = 0.25 + std::abs(x[0]);  // keep away from the axis for speed
      return x;
    };
    Eigen::VectorXd x = rnd(), y = rnd(), z = rnd();
    auto xy = distance(s, x, y, 1, 1 + t), yz = distance(s, y, z, 1, 2 + t), xz = distance(s, x, z, 1, 3 + t);
    if (!xy.found() || !yz.found() || !xz.found()) continue;
    ++tri_total;
    tri += xz.value <= xy.value + yz.value + xy.error + yz.error + xz.error;
  }
  r.check(tri == 50 && tri_total == 50, "triangle inequality on " + std::to_string(tri) + "/50");

  int hom = 0;
  std::vector<Rational> zero{0, 0};
  auto g0 = nilpotent_approximation(grushin(), zero);
  std::uniform_real_distribution<double> lam(0.5, 2.0);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd x(2), y(2);
    for (int i = 0; i < 2; ++i) {
      x[i] = half(rng);
      y[i] = half(rng);
    }
    const double l = lam(rng);
    auto d = distance(g0.fields, x, y, 1, 10 + t);
    auto dl = distance(g0.fields, dilate(x, l, g0.weights()), dilate(y, l, g0.weights()), 1, 100 + t);
    const bool ok = d.found() && dl.found() && std::abs(dl.value - l * d.value) <= dl.error + l * d.error + 1e-6;
    if (!ok)
      r.note("homogeneity miss: x " + list(std::vector<double>(x.data(), x.data() + 2)) + " y " +
             list(std::vector<double>(y.data(), y.data() + 2)) + " lambda " + fmt(l) + ": " + fmt(d.value, 7) + " (" +
             d.method + ") scaled " + fmt(dl.value / l, 7) + " (" + dl.method + ")");
    hom += ok;
  }
  r.check(hom == 50, "nilpotent distance homogeneity on " + std::to_string(hom) + "/50");
}

// 10. Reproducibility of CLI runs under one manifest.
int shell(const std::string& cmd) {
  const int st = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion10(Report& r) {
  const std::vector<std::pair<std::string, std::string>> runs{
      {"density", "--seed 9 --budget 1 density --structure " + data("grushin.srm") + " --point 1,0 --eps 0.4,0.2 --samples 500"},
      {"blowup csv", "--seed 9 --budget 1 --format csv blowup --structure " + data("grushin.srm") +
                         " --point 1,0 --eps 0.4,0.2 --samples 300"},
      {"dimension", "--seed 9 dimension --structure " + data("grushin.srm") + " --stratum axis --scales 0.4,0.2,0.1"},
      {"popp measures", "--seed 9 popp --structure " + data("grushin.srm") + " --measures --region=0.25:1,-1:1"}};
  int same = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const fs::path a = fs::temp_directory_path() / ("srm_accept_a" + std::to_string(i));
    const fs::path b = fs::temp_directory_path() / ("srm_accept_b" + std::to_string(i));
    fs::remove_all(a);
    fs::remove_all(b);
    const std::string cli = SRM_CLI;
    const auto& [label, args] = runs[i];
    if (shell(cli + " --out " + a.string() + " " + args) != 0 || shell(cli + " --out " + b.string() + " " + args) != 0) {
      r.check(false, label + " exited with an error");
      continue;
    }
    bool equal = true;
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      equal = equal && fs::exists(b / entry.path().filename()) && slurp(entry.path()) == slurp(b / entry.path().filename());
    }
    equal = equal && files >= 2;
    same += equal;
    r.check(equal, label + ": " + std::to_string(files) + " files byte-identical");
  }
  r.check(same == static_cast<int>(runs.size()), std::to_string(same) + "/" + std::to_string(runs.size()) + " manifests reproduced");
}

const std::vector<std::pair<const char*, std::function<void(Report&)>>> criteria{
    {"flag oracle suite", criterion1},       {"popp oracle suite", criterion2},
    {"weak equivalence", criterion3},        {"stratified popp measures", criterion4},
    {"ball volume scaling", criterion5},     {"measured blow-ups", criterion6},
    {"isodiametric evidence", criterion7},   {"covering dimensions", criterion8},
    {"calculus property suite", criterion9}, {"reproducibility", criterion10}};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::stoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= 10; ++i) which.push_back(i);
  int failed = 0;
  for (int n : which) {
    if (n < 1 || n > 10) {
      std::cerr << "unknown criterion " << n << "\n";
      return 2;
    }
    Report rep;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[static_cast<std::size_t>(n - 1)].second(rep);
    } catch (const std::exception& e) {
      rep.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& note : rep.notes) std::cout << "  [" << n << "] " << note << "\n";
    std::cout << "criterion " << n << " (" << criteria[static_cast<std::size_t>(n - 1)].first
              << "): " << (rep.ok ? "PASS" : "FAIL") << " in " << fmt(secs, 3) << " s" << std::endl;
    failed += !rep.ok;
  }
  return failed ? 1 : 0;
}
