#include "srm/frames.hpp"

#include <cmath>
#include <numeric>

#include "srm/linalg.hpp"

namespace srm {

int AdaptedFrame::total_length() const { return std::accumulate(levels.begin(), levels.end(), 0); }

std::string AdaptedFrame::to_string(const std::vector<std::string>& names) const {
  std::string s = "(";
  for (std::size_t i = 0; i < words.size(); ++i) s += (i ? ", " : "") + words[i].to_string(names);
  return s + ")";
}

namespace {

struct FrameSearch {
  const std::vector<std::vector<const BracketEntry*>>& candidates;
  const std::vector<int>& growth;
  const Eigen::VectorXd& p;
  const FrameOptions& opts;
  std::vector<AdaptedFrame>& out;
  std::vector<const BracketEntry*> chosen;
  std::vector<int> chosen_levels;

  Eigen::MatrixXd matrix_of(const std::vector<const BracketEntry*>& es) const {
    Eigen::MatrixXd m(p.size(), static_cast<Eigen::Index>(es.size()));
    for (std::size_t j = 0; j < es.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = es[j]->value.eval(p);
    return m;
  }

  void level(std::size_t lvl) {
    if (out.size() >= opts.max_frames) return;
    if (lvl == growth.size()) {
      AdaptedFrame f;
      for (std::size_t j = 0; j < chosen.size(); ++j) {
        f.words.push_back(chosen[j]->word);
        f.fields.push_back(chosen[j]->value);
        f.levels.push_back(chosen_levels[j]);
      }
      f.vectors = matrix_of(chosen);
      out.push_back(std::move(f));
      return;
    }
    const int need = growth[lvl] - (lvl ? growth[lvl - 1] : 0);
    combine(lvl, 0, need);
  }

  // choose `need` more entries of this level starting at index `from`
  void combine(std::size_t lvl, std::size_t from, int need) {
    if (need == 0) {
      level(lvl + 1);
      return;
    }
    const auto& cands = candidates[lvl];
    for (std::size_t j = from; j < cands.size(); ++j) {
      chosen.push_back(cands[j]);
      chosen_levels.push_back(static_cast<int>(lvl) + 1);
      if (numerical_rank(matrix_of(chosen), opts.tol) == static_cast<int>(chosen.size())) combine(lvl, j + 1, need - 1);
      chosen.pop_back();
      chosen_levels.pop_back();
      if (out.size() >= opts.max_frames) return;
    }
  }
};

}  // namespace

std::vector<AdaptedFrame> adapted_frames(BracketTable& table, const Eigen::Ref<const Eigen::VectorXd>& p,
                                         const FlagData& flag, const FrameOptions& opts) {
  std::vector<std::vector<const BracketEntry*>> candidates;
  table.up_to(flag.step);
  for (int lvl = 1; lvl <= flag.step; ++lvl) candidates.push_back(table.of_length(lvl));
  std::vector<AdaptedFrame> out;
  Eigen::VectorXd pp = p;
  FrameSearch search{candidates, flag.growth, pp, opts, out, {}, {}};
  search.level(0);
  return out;
}

std::vector<AdaptedFrame> adapted_frames(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p,
                                         const FlagData& flag, const FrameOptions& opts) {
  BracketTable table(s.fields);
  return adapted_frames(table, p, flag, opts);
}

double frame_volume(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, const AdaptedFrame& frame) {
  const std::vector<Rational> pq = to_rational(p);
  std::vector<std::vector<Rational>> cols;
  for (const auto& f : frame.fields) cols.push_back(f.eval(std::span<const Rational>(pq)));
  Rational det = exact_det(columns_to_matrix(cols, s.dim));
  Rational v = s.volume.eval(std::span<const Rational>(pq)) * det;
  return std::abs(v.get_d());
}

double nu(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, const std::vector<AdaptedFrame>& frames) {
  double best = 0;
  for (const auto& f : frames) best = std::max(best, frame_volume(s, p, f));
  return best;
}

double nu(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p) {
  BracketTable table(s.fields);
  FlagData flag = flag_at(table, s.dim, p);
  return nu(s, p, adapted_frames(table, p, flag));
}

}  // namespace srm
