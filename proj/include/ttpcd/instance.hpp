#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttpcd {

/// Random engine used by every stochastic component. All runs are seeded
/// explicitly so that identical seeds give identical results.
using Rng = std::mt19937_64;

/// City order of a tour. Cities are 0-based internally; position 0 always
/// holds city 0. Orientation is significant for the TTP objective.
using Tour = std::vector<int>;

/// One byte per item, 1 = selected.
using Packing = std::vector<std::uint8_t>;

enum class EdgeWeightType { kCeil2D, kEuc2D };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Item {
  double profit = 0.0;
  double weight = 0.0;
  int city = 0;  // 0-based, never 0
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable TTP instance: cities with 2D coordinates, items placed on every
/// city except the first, one knapsack and a speed model.
class TtpInstance {
 public:
  struct Params {
    std::string name;
    std::string knapsack_data_type;
    EdgeWeightType edge_weight_type = EdgeWeightType::kCeil2D;
    double capacity = 0.0;
    double min_speed = 0.1;
    double max_speed = 1.0;
    double renting_ratio = 0.0;
  };

  /// Validates every structural invariant; throws InvalidInstance.
  TtpInstance(Params params, std::vector<Point> coords, std::vector<Item> items);

  const std::string& name() const noexcept { return params_.name; }
  const std::string& knapsack_data_type() const noexcept { return params_.knapsack_data_type; }
  int num_cities() const noexcept { return static_cast<int>(coords_.size()); }
  int num_items() const noexcept { return static_cast<int>(items_.size()); }
  double capacity() const noexcept { return params_.capacity; }
  double min_speed() const noexcept { return params_.min_speed; }
  double max_speed() const noexcept { return params_.max_speed; }
  double renting_ratio() const noexcept { return params_.renting_ratio; }
  EdgeWeightType edge_weight_type() const noexcept { return params_.edge_weight_type; }
  const Params& params() const noexcept { return params_; }

  const std::vector<Point>& coords() const noexcept { return coords_; }
  const std::vector<Item>& items() const noexcept { return items_; }
  const Item& item(int j) const { return items_[static_cast<std::size_t>(j)]; }

  /// Indices of the items located at `city`.
  const std::vector<int>& items_at(int city) const { return items_at_[static_cast<std::size_t>(city)]; }

  /// (max_speed - min_speed) / capacity
  double speed_slope() const noexcept { return (params_.max_speed - params_.min_speed) / params_.capacity; }

  double distance(int u, int v) const;

 private:
  Params params_;
  std::vector<Point> coords_;
  std::vector<Item> items_;
  std::vector<std::vector<int>> items_at_;
};

TtpInstance parse_instance(std::istream& in);
TtpInstance parse_instance_string(const std::string& text);
TtpInstance load_instance(const std::string& path);

/// Writes the benchmark text format (1-based indices); parse_instance reads it back.
void write_instance(std::ostream& out, const TtpInstance& inst);

bool is_valid_tour(const TtpInstance& inst, const Tour& tour);

double tour_length(const TtpInstance& inst, const Tour& tour);

struct ProfitWeight {
  double profit = 0.0;
  double weight = 0.0;
};

ProfitWeight packing_profit_weight(const TtpInstance& inst, const Packing& packing);

bool is_feasible(const TtpInstance& inst, const Packing& packing);

/// Total travel time of the thief (without rent) for a feasible packing.
double travel_time(const TtpInstance& inst, const Tour& tour, const Packing& packing);

/// TTP objective g(y) - R * travel time. Returns nullopt for an infeasible
/// packing instead of a number.
std::optional<double> ttp_objective(const TtpInstance& inst, const Tour& tour, const Packing& packing);

/// A tour plus packing with cached tour length f, profit g and objective z.
struct Solution {
  Tour tour;
  Packing packing;
  double f = 0.0;
  double g = 0.0;
  double z = 0.0;
};

/// Evaluates the pair; throws std::invalid_argument when the packing is infeasible.
Solution make_solution(const TtpInstance& inst, Tour tour, Packing packing);

/// Builds a solution whose objective is already known (f and g are recomputed).
Solution make_solution(const TtpInstance& inst, Tour tour, Packing packing, double z);

}  // namespace ttpcd
