#include "srm/flag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "srm/errors.hpp"
#include "srm/linalg.hpp"
#include "srm/random.hpp"

namespace srm {

std::string BracketWord::to_string(const std::vector<std::string>& names) const {
  auto name = [&](int i) {
    return i < static_cast<int>(names.size()) ? names[i] : "X" + std::to_string(i + 1);
  };
  if (letters.empty()) return "";
  std::string s = name(letters.back());
  for (int i = length() - 2; i >= 0; --i) s = "[" + name(letters[i]) + "," + s + "]";
  return s;
}

const std::vector<BracketEntry>& BracketTable::up_to(int depth) {
  auto is_duplicate = [&](const VectorField& v) {
    for (const auto& e : entries_)
      if (e.value == v || e.value == -v) return true;
    return false;
  };
  while (depth_ < depth) {
    ++depth_;
    if (depth_ == 1) {
      for (int a = 0; a < static_cast<int>(family_.size()); ++a) {
        const auto& v = family_[a];
        if (v.is_zero() || is_duplicate(v)) continue;
        entries_.push_back({BracketWord{{a}}, v});
      }
      continue;
    }
    std::vector<const BracketEntry*> prev;
    for (const auto& e : entries_)
      if (e.word.length() == depth_ - 1) prev.push_back(&e);
    std::vector<BracketEntry> fresh;
    for (int a = 0; a < static_cast<int>(family_.size()); ++a) {
      for (const BracketEntry* e : prev) {
        VectorField v = lie_bracket(family_[a], e->value);
        if (v.is_zero() || is_duplicate(v)) continue;
        bool dup = false;
        for (const auto& f : fresh)
          if (f.value == v || f.value == -v) dup = true;
        if (dup) continue;
        BracketWord w;
        w.letters.push_back(a);
        w.letters.insert(w.letters.end(), e->word.letters.begin(), e->word.letters.end());
        fresh.push_back({std::move(w), std::move(v)});
      }
    }
    // prev pointers are invalidated by the insertion below, so it happens last
    for (auto& f : fresh) entries_.push_back(std::move(f));
  }
  return entries_;
}

std::vector<const BracketEntry*> BracketTable::of_length(int length) {
  up_to(length);
  std::vector<const BracketEntry*> out;
  for (const auto& e : entries_)
    if (e.word.length() == length) out.push_back(&e);
  return out;
}

const VectorField& BracketTable::value(const BracketWord& w) {
  if (auto it = memo_.find(w); it != memo_.end()) return it->second;
  VectorField v;
  if (w.length() == 1) {
    v = family_.at(w.letters[0]);
  } else {
    BracketWord tail{std::vector<int>(w.letters.begin() + 1, w.letters.end())};
    VectorField t = value(tail);
    v = lie_bracket(family_.at(w.letters[0]), t);
  }
  return memo_.emplace(w, std::move(v)).first->second;
}

std::vector<BracketWord> enumerate_brackets(const std::vector<VectorField>& family, int depth) {
  BracketTable t(family);
  std::vector<BracketWord> out;
  for (const auto& e : t.up_to(depth)) out.push_back(e.word);
  return out;
}

int FlagData::Q_from_weights() const { return std::accumulate(weights.begin(), weights.end(), 0); }

std::vector<int> weights_from_growth(const std::vector<int>& growth) {
  std::vector<int> w;
  int prev = 0;
  for (std::size_t s = 0; s < growth.size(); ++s) {
    for (int i = prev; i < growth[s]; ++i) w.push_back(static_cast<int>(s) + 1);
    prev = growth[s];
  }
  return w;
}

int homogeneous_dimension(const std::vector<int>& growth) {
  int q = 0, prev = 0;
  for (std::size_t i = 0; i < growth.size(); ++i) {
    q += static_cast<int>(i + 1) * (growth[i] - prev);
    prev = growth[i];
  }
  return q;
}

FlagData flag_at(BracketTable& table, int dim, const Eigen::Ref<const Eigen::VectorXd>& p, const FlagOptions& opts) {
  FlagData f;
  f.point = p;
  const std::vector<Rational> pq = to_rational(p);
  Eigen::MatrixXd selected(dim, 0);
  std::vector<Eigen::VectorXd> columns;
  std::vector<std::vector<Rational>> exact_columns;
  int prev_rank = 0;
  for (int level = 1; level <= opts.depth_cap; ++level) {
    std::vector<BracketWord> level_words;
    for (const BracketEntry* e : table.of_length(level)) {
      columns.push_back(e->value.eval(p));
      exact_columns.push_back(e->value.eval(std::span<const Rational>(pq)));
      level_words.push_back(e->word);
    }
    Eigen::MatrixXd all(dim, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) all.col(static_cast<Eigen::Index>(j)) = columns[j];
    int rank = numerical_rank(all, opts.tol);
    int exact = exact_rank(columns_to_matrix(exact_columns, dim));
    if (exact != rank) f.exact_rank_agrees = false;

    // greedy choice of words completing the previous levels to a basis of D^level
    std::vector<BracketWord> chosen;
    const Eigen::Index offset = static_cast<Eigen::Index>(columns.size() - level_words.size());
    for (std::size_t j = 0; j < level_words.size() && static_cast<int>(chosen.size()) < rank - prev_rank; ++j) {
      Eigen::MatrixXd trial(dim, selected.cols() + 1);
      trial << selected, columns[offset + j];
      if (numerical_rank(trial, opts.tol) > selected.cols()) {
        selected = trial;
        chosen.push_back(level_words[j]);
      }
    }
    f.growth.push_back(rank);
    f.spanning.push_back(std::move(chosen));
    prev_rank = rank;
    if (rank == dim) break;
  }
  if (f.growth.empty() || f.growth.back() < dim)
    throw NotBracketGenerating("brackets of length <= " + std::to_string(opts.depth_cap) + " span only " +
                               std::to_string(f.growth.empty() ? 0 : f.growth.back()) + " of " +
                               std::to_string(dim) + " dimensions");
  f.step = static_cast<int>(f.growth.size());
  f.weights = weights_from_growth(f.growth);
  f.Q = homogeneous_dimension(f.growth);
  return f;
}

FlagData flag_at(const std::vector<VectorField>& family, const Eigen::Ref<const Eigen::VectorXd>& p,
                 const FlagOptions& opts) {
  BracketTable t(family);
  return flag_at(t, family.front().dim(), p, opts);
}

FlagData flag_at(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, const FlagOptions& opts) {
  return flag_at(s.fields, p, opts);
}

std::string to_string(PointClass c) { return c == PointClass::Regular ? "regular" : "singular"; }

std::vector<GridPoint> classify_grid(const SRStructure& s, const GridSpec& grid, const ClassifyOptions& opts) {
  const Box box = grid.box.dim() ? grid.box : s.box;
  const int n = s.dim;
  if (static_cast<int>(grid.counts.size()) != n)
    throw ValidationError("flag-analysis.grid", "grid needs one count per dimension");
  Eigen::VectorXd lo = box.lower(), hi = box.upper();
  double min_spacing = std::numeric_limits<double>::infinity();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (grid.counts[i] < 1) throw ValidationError("flag-analysis.grid", "grid counts must be positive");
    total *= static_cast<std::size_t>(grid.counts[i]);
    if (grid.counts[i] > 1) min_spacing = std::min(min_spacing, (hi[i] - lo[i]) / (grid.counts[i] - 1));
  }
  if (!std::isfinite(min_spacing)) min_spacing = (hi - lo).minCoeff();
  const double radius = opts.probe_radius > 0 ? opts.probe_radius : 0.25 * min_spacing;

  BracketTable table(s.fields);
  Rng root(opts.seed);
  std::vector<GridPoint> out;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Eigen::VectorXd x(n);
    std::size_t r = idx;
    for (int i = 0; i < n; ++i) {
      int c = grid.counts[i];
      int k = static_cast<int>(r % static_cast<std::size_t>(c));
      r /= static_cast<std::size_t>(c);
      x[i] = c == 1 ? 0.5 * (lo[i] + hi[i]) : lo[i] + (hi[i] - lo[i]) * k / double(c - 1);
    }
    GridPoint gp{x, flag_at(table, n, x, opts.flag), PointClass::Regular};
    Rng rng = root.split(idx);
    for (int j = 0; j < opts.probe_count; ++j) {
      Eigen::VectorXd q = rng.uniform_in_ball(x, radius);
      if (flag_at(table, n, q, opts.flag).growth != gp.flag.growth) {
        gp.cls = PointClass::Singular;
        break;
      }
    }
    out.push_back(std::move(gp));
  }
  return out;
}

}  // namespace srm
