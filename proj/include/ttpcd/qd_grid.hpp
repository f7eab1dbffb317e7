#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ttpcd/instance.hpp"

namespace ttpcd {

struct GridConfig {
  double alpha1 = 0.05;  // tour-length window, fraction of f*
  double alpha2 = 0.20;  // profit window, fraction of g*
  int delta1 = 20;
  int delta2 = 20;
};

/// 1-based cell coordinates: i along tour length, j along profit.
struct CellIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

enum class InsertOutcome { kInserted, kReplaced, kRejectedWorse, kOutOfWindow };

struct MapRecord {
  int i = 0;
  int j = 0;
  double f = 0.0;
  double g = 0.0;
  double z = 0.0;
};

/// MAP-Elites archive over the behaviour space (tour length, profit),
/// restricted to f in [f*, (1 + alpha1) f*] and g in [(1 - alpha2) g*, g*].
/// Each cell keeps the solution with the highest objective offered to it.
class QdGrid {
 public:
  QdGrid(double f_star, double g_star, GridConfig config = {});

  /// Cell intervals are half-open, the last cell on each axis closed.
  /// Tour lengths below f* fall into the first column.
  std::optional<CellIndex> cell_index(double f, double g) const;

  /// Ties on z keep the incumbent.
  InsertOutcome try_insert(const Solution& candidate);

  const Solution* at(CellIndex cell) const;
  const Solution* best_solution() const;

  std::size_t occupancy() const noexcept { return occupied_.size(); }
  bool empty() const noexcept { return occupied_.empty(); }

  /// k-th occupied cell in first-occupation order; used for uniform selection.
  const Solution& occupant(std::size_t k) const;

  /// One record per occupied cell, row-major by (i, j).
  std::vector<MapRecord> export_map() const;

  double f_star() const noexcept { return f_star_; }
  double g_star() const noexcept { return g_star_; }
  const GridConfig& config() const noexcept { return config_; }

 private:
  std::size_t slot(CellIndex c) const {
    return static_cast<std::size_t>(c.i - 1) * static_cast<std::size_t>(config_.delta2) + static_cast<std::size_t>(c.j - 1);
  }

  double f_star_;
  double g_star_;
  GridConfig config_;
  std::vector<std::optional<Solution>> cells_;
  std::vector<std::size_t> occupied_;
  std::optional<std::size_t> best_;
};

}  // namespace ttpcd
