#include "ttpcd/qd_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ttpcd {

QdGrid::QdGrid(double f_star, double g_star, GridConfig config)
    : f_star_(f_star), g_star_(g_star), config_(config) {
  if (!(f_star > 0.0) || !(g_star > 0.0)) throw std::invalid_argument("grid reference values f* and g* must be positive");
  if (!(config.alpha1 > 0.0) || !(config.alpha2 > 0.0) || config.alpha2 > 1.0) {
    throw std::invalid_argument("grid windows need alpha1 > 0 and 0 < alpha2 <= 1");
  }
  if (config.delta1 < 1 || config.delta2 < 1) throw std::invalid_argument("grid resolution must be at least 1x1");
  cells_.resize(static_cast<std::size_t>(config.delta1) * static_cast<std::size_t>(config.delta2));
}

namespace {

// 1-based bin of `x` in [lo, lo + bins * width], or 0 when outside.
int bin(double x, double lo, double width, int bins) {
  const double hi = lo + bins * width;
  if (x > hi || x < lo) return 0;
  if (x == hi) return bins;
  const int k = static_cast<int>(std::floor((x - lo) / width)) + 1;
  return std::min(std::max(k, 1), bins);
}

}  // namespace

std::optional<CellIndex> QdGrid::cell_index(double f, double g) const {
  const double f_width = config_.alpha1 * f_star_ / config_.delta1;
  const double g_lo = (1.0 - config_.alpha2) * g_star_;
  const double g_width = config_.alpha2 * g_star_ / config_.delta2;
  const int i = bin(std::max(f, f_star_), f_star_, f_width, config_.delta1);
  const int j = bin(g, g_lo, g_width, config_.delta2);
  if (i == 0 || j == 0) return std::nullopt;
  return CellIndex{i, j};
}

InsertOutcome QdGrid::try_insert(const Solution& candidate) {
  const auto cell = cell_index(candidate.f, candidate.g);
  if (!cell) return InsertOutcome::kOutOfWindow;
  const std::size_t s = slot(*cell);
  auto& occupant = cells_[s];

  InsertOutcome outcome = InsertOutcome::kInserted;
  if (!occupant) {
    occupied_.push_back(s);
  } else if (candidate.z > occupant->z) {
    outcome = InsertOutcome::kReplaced;
  } else {
    return InsertOutcome::kRejectedWorse;
  }
  occupant = candidate;
  if (!best_ || candidate.z > cells_[*best_]->z) best_ = s;
  return outcome;
}

const Solution* QdGrid::at(CellIndex cell) const {
  if (cell.i < 1 || cell.i > config_.delta1 || cell.j < 1 || cell.j > config_.delta2) return nullptr;
  const auto& c = cells_[slot(cell)];
  return c ? &*c : nullptr;
}

const Solution* QdGrid::best_solution() const { return best_ ? &*cells_[*best_] : nullptr; }

const Solution& QdGrid::occupant(std::size_t k) const { return *cells_[occupied_.at(k)]; }

std::vector<MapRecord> QdGrid::export_map() const {
  std::vector<MapRecord> out;
  out.reserve(occupied_.size());
  for (std::size_t s = 0; s < cells_.size(); ++s) {
    if (!cells_[s]) continue;
    const Solution& sol = *cells_[s];
    const int i = static_cast<int>(s / static_cast<std::size_t>(config_.delta2)) + 1;
    const int j = static_cast<int>(s % static_cast<std::size_t>(config_.delta2)) + 1;
    out.push_back({i, j, sol.f, sol.g, sol.z});
  }
  return out;
}

}  // namespace ttpcd
