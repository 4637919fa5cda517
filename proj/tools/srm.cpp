// srm: command-line front end for the sub-Riemannian measure library.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "srm/blowup.hpp"
#include "srm/distance.hpp"
#include "srm/errors.hpp"
#include "srm/flag.hpp"
#include "srm/frames.hpp"
#include "srm/measures.hpp"
#include "srm/nilpotent.hpp"
#include "srm/popp.hpp"
#include "srm/random.hpp"
#include "srm/structure.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using json = ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

// JSON has no infinities; they are written as strings.
json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

template <typename T>
json vec(const std::vector<T>& v) {
  json a = json::array();
  for (const auto& x : v) {
    if constexpr (std::is_floating_point_v<T>)
      a.push_back(num(x));
    else
      a.push_back(x);
  }
  return a;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw srm::ValidationError("cli.io", "cannot open structure file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

std::vector<srm::Rational> parse_point(const std::string& text, int dim, const std::string& what) {
  std::vector<srm::Rational> p;
  for (const auto& part : split(text, ',')) p.push_back(srm::rational_from_string(part));
  if (dim > 0 && static_cast<int>(p.size()) != dim)
    throw srm::ValidationError("cli.args", what + " needs " + std::to_string(dim) + " coordinates, got " +
                                               std::to_string(p.size()));
  return p;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    try {
      out.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw srm::ValidationError("cli.args", "bad number '" + part + "' in " + what);
    }
  }
  if (out.empty()) throw srm::ValidationError("cli.args", what + " is empty");
  return out;
}

std::vector<int> parse_ints(const std::string& text, const std::string& what) {
  std::vector<int> out;
  for (double v : parse_list(text, what)) out.push_back(static_cast<int>(v));
  return out;
}

// "lo:hi,lo:hi,..."
srm::Box parse_box(const std::string& text, int dim) {
  srm::Box b;
  for (const auto& part : split(text, ',')) {
    auto ends = split(part, ':');
    if (ends.size() != 2) throw srm::ValidationError("cli.args", "box axis '" + part + "' is not lo:hi");
    b.lo.push_back(srm::rational_from_string(ends[0]));
    b.hi.push_back(srm::rational_from_string(ends[1]));
    if (b.hi.back() < b.lo.back()) throw srm::ValidationError("cli.args", "box axis '" + part + "' has hi < lo");
  }
  if (b.dim() != dim) throw srm::ValidationError("cli.args", "box needs " + std::to_string(dim) + " axes");
  return b;
}

json mc(double mean, double se) { return json{{"value", num(mean)}, {"stderr", num(se)}}; }

bool regular_by_probes(const srm::SRStructure& s, const Eigen::VectorXd& p) {
  const auto growth = srm::flag_at(s, p).growth;
  srm::Rng rng(3);
  const double radius = 1e-3 * (1.0 + p.norm());
  for (int j = 0; j < 8; ++j)
    if (srm::flag_at(s, rng.uniform_in_ball(p, radius)).growth != growth) return false;
  return true;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Result {
  json doc = json::object();
  Table table;  // CSV view; empty means key,value pairs of the scalar fields
};

std::string to_csv(const Result& r) {
  std::ostringstream os;
  if (!r.table.header.empty()) {
    for (std::size_t i = 0; i < r.table.header.size(); ++i) os << (i ? "," : "") << r.table.header[i];
    os << "\n";
    for (const auto& row : r.table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << "\n";
    }
    return os.str();
  }
  os << "key,value\n";
  for (const auto& [k, v] : r.doc.items())
    if (v.is_primitive()) os << k << "," << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  return os.str();
}

struct Globals {
  std::uint64_t seed = 1;
  int budget = 2;
  std::string out;
  std::string format = "json";
  std::string structure;
};

srm::MeasureOptions measure_options(const Globals& g) {
  srm::MeasureOptions m;
  m.budget = g.budget;
  m.seed = g.seed;
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intrinsic measures on sub-Riemannian manifolds"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  Globals g;
  app.add_option("--seed", g.seed, "root seed of every random stream")->capture_default_str();
  app.add_option("--budget", g.budget, "effort level 1..4")->check(CLI::Range(1, 4))->capture_default_str();
  app.add_option("--out", g.out, "output directory (results and manifest)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  auto add_structure = [&](CLI::App* sub) {
    sub->add_option("--structure,-s", g.structure, "structure file (.srm)")->required();
  };

  std::string point, to, eps_text = "0.4,0.2,0.1", grid_text, box_text, stratum_name, param_text, region_text,
                          scales_text, exponents_text, window_text, measure_name = "smooth";
  double radius = 1.0, alpha = 0, per_ball = 2.0;
  bool all_frames = false, measures_flag = false, weak_flag = false;
  int samples = 0;

  auto* validate = app.add_subcommand("validate", "parse and check a structure file");
  add_structure(validate);

  auto* flag = app.add_subcommand("flag", "flag, growth vector and weights at a point");
  add_structure(flag);
  flag->add_option("--point,-p", point, "comma separated coordinates")->required();

  auto* scan = app.add_subcommand("scan", "classify a grid of points");
  add_structure(scan);
  scan->add_option("--grid", grid_text, "points per axis, e.g. 9,9 (default 9 each)");

  auto* nilp = app.add_subcommand("nilpotent", "privileged chart and nilpotent approximation");
  add_structure(nilp);
  nilp->add_option("--point,-p", point)->required();

  auto* dist = app.add_subcommand("dist", "sub-Riemannian distance between two points");
  add_structure(dist);
  dist->add_option("--point,-p", point)->required();
  dist->add_option("--to", to)->required();

  auto* popp = app.add_subcommand("popp", "Popp density and stratified Popp measures");
  add_structure(popp);
  popp->add_option("--point,-p", point);
  popp->add_flag("--all-frames", all_frames, "evaluate every adapted frame");
  popp->add_option("--stratum", stratum_name, "equisingular stratum (with --param)");
  popp->add_option("--param", param_text, "stratum parameters");
  popp->add_flag("--measures", measures_flag, "P_1 and P_2 over --region (default: structure box)");
  popp->add_option("--region", region_text, "lo:hi per axis");
  popp->add_flag("--weak-equivalence", weak_flag, "nu * dP/dmu bounds over --grid");
  popp->add_option("--grid", grid_text);
  popp->add_option("--samples", samples, "Monte Carlo samples per window");

  auto* density = app.add_subcommand("density", "spherical density and the ball-volume scaling curve");
  add_structure(density);
  density->add_option("--point,-p", point)->required();
  density->add_option("--eps", eps_text)->capture_default_str();
  density->add_option("--samples", samples);

  auto* iso = app.add_subcommand("isodiametric", "isodiametric ratios on the tangent group");
  add_structure(iso);
  iso->add_option("--point,-p", point)->required();
  iso->add_option("--samples", samples);

  auto* federer = app.add_subcommand("federer", "Federer density lower-bound curve");
  add_structure(federer);
  federer->add_option("--point,-p", point)->required();
  federer->add_option("--eps", eps_text)->capture_default_str();
  federer->add_option("--samples", samples);

  auto* blowup = app.add_subcommand("blowup", "measured Gromov-Hausdorff blow-up audit");
  add_structure(blowup);
  blowup->add_option("--point,-p", point)->required();
  blowup->add_option("--measure", measure_name)->check(CLI::IsMember({"smooth", "spherical"}))->capture_default_str();
  blowup->add_option("--radius", radius)->capture_default_str();
  blowup->add_option("--eps", eps_text)->capture_default_str();
  blowup->add_option("--samples", samples);

  auto add_set = [&](CLI::App* sub) {
    sub->add_option("--box", box_text, "sub-box lo:hi per axis");
    sub->add_option("--stratum", stratum_name, "declared stratum");
    sub->add_option("--scales", scales_text, "radii")->required();
    sub->add_option("--exponents", exponents_text, "grid exponents per axis");
    sub->add_option("--per-ball", per_ball, "grid points per ball radius")->capture_default_str();
  };
  auto* sandwich = app.add_subcommand("sandwich", "ball versus arbitrary-set covering pre-measures");
  add_structure(sandwich);
  add_set(sandwich);
  sandwich->add_option("--alpha", alpha)->required();

  auto* dimension = app.add_subcommand("dimension", "covering dimension of a sub-box or stratum");
  add_structure(dimension);
  add_set(dimension);
  dimension->add_option("--window", window_text, "count only pieces centered in this box");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    const std::string text = read_file(g.structure);
    const srm::SRStructure s = srm::parse_structure(text);
    srm::MeasureOptions mo = measure_options(g);
    if (samples > 0) mo.samples = samples;
    Result r;
    auto get_point = [&]() {
      auto p = parse_point(point, s.dim, "--point");
      return std::pair{p, srm::to_double(p)};
    };
    auto sampler = [&]() -> srm::CloudSampler {
      std::vector<int> ex = exponents_text.empty() ? std::vector<int>{} : parse_ints(exponents_text, "--exponents");
      if (!box_text.empty()) return srm::box_sampler(s, parse_box(box_text, s.dim), ex, per_ball);
      if (!stratum_name.empty()) return srm::stratum_sampler(s, s.stratum(stratum_name), ex, per_ball);
      throw srm::ValidationError("cli.args", "give --box or --stratum");
    };

    if (name == "validate") {
      r.doc["valid"] = true;
      r.doc["dim"] = s.dim;
      r.doc["m"] = s.m();
      json fields = json::array();
      for (int i = 0; i < s.m(); ++i) fields.push_back({{"name", s.field_names[i]}, {"field", s.fields[i].to_string()}});
      r.doc["fields"] = fields;
      r.doc["volume"] = s.volume.to_string();
      r.doc["box"] = s.box.to_string();
      json strata = json::array();
      for (const auto& st : s.strata) strata.push_back({{"name", st.name}, {"k", st.k}});
      r.doc["strata"] = strata;
    } else if (name == "flag") {
      auto [pr, p] = get_point();
      const srm::FlagData f = srm::flag_at(s, p);
      r.doc["point"] = vec(p);
      r.doc["growth"] = f.growth;
      r.doc["Q"] = f.Q;
      r.doc["weights"] = f.weights;
      r.doc["step"] = f.step;
      r.doc["class"] = regular_by_probes(s, p) ? "regular" : "singular";
      json span = json::array();
      for (const auto& level : f.spanning) {
        json words = json::array();
        for (const auto& w : level) words.push_back(w.to_string(s.field_names));
        span.push_back(words);
      }
      r.doc["spanning"] = span;
      r.doc["exact"] = f.exact_rank_agrees;
    } else if (name == "scan") {
      srm::GridSpec spec;
      spec.box = s.box;
      spec.counts = grid_text.empty() ? std::vector<int>(static_cast<std::size_t>(s.dim), 9) : parse_ints(grid_text, "--grid");
      srm::ClassifyOptions co;
      co.seed = g.seed;
      const auto pts = srm::classify_grid(s, spec, co);
      json arr = json::array();
      std::size_t singular = 0;
      r.table.header = {"point", "growth", "Q", "class"};
      for (const auto& gp : pts) {
        singular += gp.cls == srm::PointClass::Singular;
        arr.push_back({{"point", vec(gp.point)}, {"growth", gp.flag.growth}, {"Q", gp.flag.Q}, {"class", srm::to_string(gp.cls)}});
        std::string pt, gr;
        for (Eigen::Index i = 0; i < gp.point.size(); ++i) pt += (i ? " " : "") + fmt(gp.point[i]);
        for (std::size_t i = 0; i < gp.flag.growth.size(); ++i) gr += (i ? " " : "") + std::to_string(gp.flag.growth[i]);
        r.table.rows.push_back({pt, gr, std::to_string(gp.flag.Q), srm::to_string(gp.cls)});
      }
      r.doc["points"] = arr;
      r.doc["singular"] = singular;
      r.doc["total"] = pts.size();
    } else if (name == "nilpotent") {
      auto [pr, p] = get_point();
      const srm::NilpotentApprox a = srm::nilpotent_approximation(s, pr);
      r.doc["point"] = vec(p);
      r.doc["growth"] = a.growth;
      r.doc["weights"] = a.weights();
      r.doc["Q"] = a.Q;
      json z = json::array(), x = json::array(), fields = json::array();
      for (const auto& q : a.chart.to_privileged) z.push_back(q.to_string("x"));
      for (const auto& q : a.chart.from_privileged) x.push_back(q.to_string("z"));
      for (const auto& f : a.fields) fields.push_back(f.to_string("z"));
      r.doc["chart"] = {{"z_of_x", z}, {"x_of_z", x}, {"affine", a.chart.affine}};
      r.doc["fields"] = fields;
      r.doc["density_at_origin"] = num(a.density_at_origin());
      r.doc["homogeneous"] = srm::is_dilation_homogeneous(a.fields, a.weights());
      r.doc["exact"] = true;
    } else if (name == "dist") {
      auto [pr, p] = get_point();
      const Eigen::VectorXd q = srm::to_double(parse_point(to, s.dim, "--to"));
      const srm::DistanceEstimate d = srm::distance(s, p, q, g.budget, g.seed);
      r.doc["from"] = vec(p);
      r.doc["to"] = vec(q);
      r.doc["distance"] = num(d.value);
      r.doc["error"] = num(d.error);
      r.doc["lower"] = num(d.lower);
      r.doc["upper"] = num(d.upper);
      r.doc["method"] = d.method;
    } else if (name == "popp") {
      srm::StratifiedOptions so;
      so.seed = g.seed;
      if (samples > 0) so.samples_per_window = samples;
      if (measures_flag) {
        const srm::Box region = region_text.empty() ? s.box : parse_box(region_text, s.dim);
        const srm::StratifiedMeasures m = srm::stratified_measures(s, region, so);
        r.doc["region"] = region.to_string();
        r.doc["dim_H"] = m.dim_H;
        r.doc["P1"] = mc(m.P1, m.P1_stderr);
        r.doc["P1"]["divergent"] = m.P1_divergent;
        r.doc["P2"] = mc(m.P2, m.P2_stderr);
        r.doc["P2"]["divergent"] = m.P2_divergent;
        json strata = json::array();
        r.table.header = {"stratum", "Q_N", "open", "value", "stderr", "divergent"};
        for (const auto& st : m.strata) {
          strata.push_back({{"stratum", st.stratum}, {"Q_N", st.Q_N}, {"open", st.open}, {"value", num(st.value)},
                            {"stderr", num(st.std_error)}, {"divergent", st.divergent}, {"windows", vec(st.windows)}});
          r.table.rows.push_back({st.stratum, std::to_string(st.Q_N), st.open ? "true" : "false", fmt(st.value),
                                  fmt(st.std_error), st.divergent ? "true" : "false"});
        }
        r.doc["strata"] = strata;
      } else if (weak_flag) {
        srm::GridSpec spec;
        spec.box = region_text.empty() ? s.box : parse_box(region_text, s.dim);
        spec.counts = grid_text.empty() ? std::vector<int>(static_cast<std::size_t>(s.dim), 9) : parse_ints(grid_text, "--grid");
        srm::ClassifyOptions co;
        co.seed = g.seed;
        const srm::WeakEquivalentReport w = srm::weak_equivalent_check(s, spec, co);
        r.doc["C"] = num(w.C);
        r.doc["min_product"] = num(w.min_product);
        r.doc["max_product"] = num(w.max_product);
        r.doc["points"] = w.points;
        r.doc["skipped"] = w.skipped;
        r.doc["exact"] = true;
      } else if (!stratum_name.empty()) {
        const srm::Stratum& st = s.stratum(stratum_name);
        const Eigen::VectorXd t = srm::to_double(parse_point(param_text, st.k, "--param"));
        const srm::StratumPopp sp = srm::popp_on_stratum(s, st, t);
        r.doc["stratum"] = st.name;
        r.doc["param"] = vec(t);
        r.doc["density"] = num(sp.value);
        r.doc["det_G"] = vec(sp.det_G);
        r.doc["growth_N"] = sp.growth_N;
        r.doc["exact"] = true;
      } else {
        if (point.empty()) throw srm::ValidationError("cli.args", "popp needs --point, --stratum, --measures or --weak-equivalence");
        auto [pr, p] = get_point();
        const srm::PoppDensity d = srm::popp_density(s, p);
        r.doc["point"] = vec(p);
        r.doc["density"] = num(d.value);
        r.doc["det_B"] = vec(d.det_B);
        r.doc["omega_frame"] = num(d.omega_frame);
        r.doc["frame"] = d.frame;
        r.doc["experimental"] = d.experimental;
        r.doc["exact"] = true;
        if (all_frames) {
          json frames = json::array();
          r.table.header = {"frame", "density"};
          for (const auto& f : srm::popp_density_all_frames(s, p)) {
            frames.push_back({{"frame", f.frame}, {"density", num(f.value)}});
            r.table.rows.push_back({f.frame, fmt(f.value)});
          }
          r.doc["frames"] = frames;
        }
      }
    } else if (name == "density") {
      auto [pr, p] = get_point();
      const std::vector<double> eps = parse_list(eps_text, "--eps");
      const srm::SphericalDensity sd = srm::spherical_density(s, p, mo);
      r.doc["point"] = vec(p);
      r.doc["Q"] = sd.Q;
      r.doc["spherical_density"] = mc(sd.value, sd.std_error);
      r.doc["spherical_density"]["formal"] = sd.formal;
      r.doc["mu_hat"] = mc(sd.mu_hat.mean, sd.mu_hat.std_error);
      json curve = json::array();
      r.table.header = {"eps", "value", "stderr", "mu_hat", "gap", "gap_stderr"};
      for (const auto& row : srm::density_consistency(s, p, eps, mo)) {
        curve.push_back({{"eps", row.eps}, {"scaled", mc(row.scaled.mean, row.scaled.std_error)},
                         {"gap", mc(row.gap, row.gap_error)}});
        r.table.rows.push_back({fmt(row.eps), fmt(row.scaled.mean), fmt(row.scaled.std_error), fmt(row.mu_hat.mean),
                                fmt(row.gap), fmt(row.gap_error)});
      }
      r.doc["curve"] = curve;
      r.doc["samples"] = mo.sample_count();
    } else if (name == "isodiametric") {
      auto [pr, p] = get_point();
      srm::IsodiametricOptions io;
      io.measure = mo;
      const srm::IsodiametricReport rep = srm::isodiametric_search(srm::nilpotent_approximation(s, pr), io);
      r.doc["point"] = vec(p);
      r.doc["Q"] = rep.Q;
      r.doc["unit_ball_volume"] = num(rep.unit_ball_volume);
      json cands = json::array();
      r.table.header = {"candidate", "volume_ratio", "stderr", "diameter", "diameter_upper", "ratio", "certified"};
      for (const auto& c : rep.candidates) {
        cands.push_back({{"name", c.name}, {"volume_ratio", mc(c.volume_ratio.mean, c.volume_ratio.std_error)},
                         {"diameter", num(c.diameter)}, {"diameter_upper", num(c.diameter_upper)},
                         {"ratio", num(c.ratio)}, {"certified", num(c.certified)}});
        r.table.rows.push_back({c.name, fmt(c.volume_ratio.mean), fmt(c.volume_ratio.std_error), fmt(c.diameter),
                                fmt(c.diameter_upper), fmt(c.ratio), fmt(c.certified)});
      }
      r.doc["candidates"] = cands;
      r.doc["best"] = rep.candidates[rep.best].name;
      r.doc["best_certified"] = num(rep.candidates[rep.best].certified);
    } else if (name == "federer") {
      auto [pr, p] = get_point();
      srm::IsodiametricOptions io;
      io.measure = mo;
      const srm::FedererCurve c = srm::federer_ratio_probe(s, p, parse_list(eps_text, "--eps"), io);
      r.doc["point"] = vec(p);
      r.doc["nilpotent_best"] = num(c.nilpotent_best);
      json curve = json::array();
      r.table.header = {"eps", "ball", "caps", "best", "best_certified"};
      for (const auto& q : c.points) {
        curve.push_back({{"eps", q.eps}, {"ball", num(q.ball)}, {"caps", num(q.caps)}, {"best", num(q.best)},
                         {"best_certified", num(q.best_certified)}});
        r.table.rows.push_back({fmt(q.eps), fmt(q.ball), fmt(q.caps), fmt(q.best), fmt(q.best_certified)});
      }
      r.doc["curve"] = curve;
    } else if (name == "blowup") {
      auto [pr, p] = get_point();
      srm::DistortionOptions dopt;
      dopt.measure = mo;
      const srm::BlowupExperiment ex = srm::blowup_experiment(s, p, radius, parse_list(eps_text, "--eps"),
                                                              srm::blowup_measure_from_string(measure_name), dopt);
      r.doc["point"] = vec(p);
      r.doc["measure"] = measure_name;
      r.doc["radius"] = radius;
      r.doc["Q"] = ex.Q;
      json rows = json::array();
      r.table.header = {"eps", "distortion", "discrepancy", "stderr", "distortion_error", "outside_fraction", "argmax"};
      for (const auto& row : ex.rows) {
        rows.push_back({{"eps", row.eps},
                        {"distortion", {{"value", num(row.distortion.value)}, {"error", num(row.distortion.error)},
                                        {"pairs", row.distortion.pairs}, {"skipped", row.distortion.skipped}}},
                        {"discrepancy", mc(row.discrepancy.value, row.discrepancy.std_error)},
                        {"argmax", row.discrepancy.argmax},
                        {"outside_fraction", num(row.discrepancy.outside_fraction)},
                        {"formal", row.discrepancy.formal}});
        r.table.rows.push_back({fmt(row.eps), fmt(row.distortion.value), fmt(row.discrepancy.value),
                                fmt(row.discrepancy.std_error), fmt(row.distortion.error),
                                fmt(row.discrepancy.outside_fraction), row.discrepancy.argmax});
      }
      r.doc["rows"] = rows;
      r.doc["samples"] = mo.sample_count();
    } else if (name == "sandwich") {
      const srm::SandwichReport rep = srm::sandwich_check(s, sampler(), alpha, parse_list(scales_text, "--scales"));
      r.doc["alpha"] = alpha;
      r.doc["holds"] = rep.holds;
      json rows = json::array();
      r.table.header = {"eps", "spherical", "arbitrary", "holds"};
      for (const auto& row : rep.rows) {
        rows.push_back({{"eps", row.eps}, {"spherical", num(row.spherical)}, {"arbitrary", num(row.arbitrary)},
                        {"holds", row.holds}});
        r.table.rows.push_back({fmt(row.eps), fmt(row.spherical), fmt(row.arbitrary), row.holds ? "true" : "false"});
      }
      r.doc["rows"] = rows;
    } else if (name == "dimension") {
      std::optional<srm::Box> window;
      if (!window_text.empty()) window = parse_box(window_text, s.dim);
      const srm::CoveringReport rep =
          srm::covering_dimension(s, sampler(), parse_list(scales_text, "--scales"), window);
      r.doc["dimension"] = num(rep.dimension);
      r.doc["residual"] = num(rep.residual);
      json rows = json::array();
      r.table.header = {"eps", "count"};
      for (std::size_t i = 0; i < rep.scales.size(); ++i) {
        rows.push_back({{"eps", rep.scales[i]}, {"count", rep.counts[i]}});
        r.table.rows.push_back({fmt(rep.scales[i]), std::to_string(rep.counts[i])});
      }
      r.doc["counts"] = rows;
    }

    const std::string payload = g.format == "json" ? r.doc.dump(2) + "\n" : to_csv(r);
    if (g.out.empty()) {
      std::cout << payload;
      return 0;
    }
    fs::create_directories(g.out);
    const std::string file = name + "." + g.format;
    {
      std::ofstream os(fs::path(g.out) / file, std::ios::binary);
      os << payload;
    }
    json params = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->get_name() == "--help") continue;
      const auto& res = opt->results();
      if (!res.empty())
        params[opt->get_name()] = res.size() == 1 ? json(res.front()) : json(res);
      else if (!opt->get_default_str().empty())
        params[opt->get_name()] = opt->get_default_str();
    }
    json manifest = {{"tool", "srm"},
                     {"version", kVersion},
                     {"subcommand", name},
                     {"structure", {{"path", g.structure}, {"fnv1a64", hex(fnv1a(text))}}},
                     {"params", params},
                     {"seed", g.seed},
                     {"budget", g.budget},
                     {"format", g.format},
                     {"outputs", json::array({{{"file", file}, {"fnv1a64", hex(fnv1a(payload))}}})}};
    std::ofstream ms(fs::path(g.out) / "manifest.json", std::ios::binary);
    ms << manifest.dump(2) << "\n";
    return 0;
  } catch (const srm::Error& e) {
    std::cerr << "srm " << name << ": [" << e.code() << "] " << e.what() << "\n";
    return e.kind() == srm::ErrorKind::Validation ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "srm " << name << ": " << e.what() << "\n";
    return 3;
  }
}
