#include "ttpcd/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace ttpcd {

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

TtpInstance::TtpInstance(Params params, std::vector<Point> coords, std::vector<Item> items)
    : params_(std::move(params)), coords_(std::move(coords)), items_(std::move(items)) {
  const int n = num_cities();
  if (n < 3) throw InvalidInstance("instance needs at least 3 cities");
  if (items_.empty()) throw InvalidInstance("instance needs at least 1 item");
  if (!(params_.capacity > 0.0)) throw InvalidInstance("knapsack capacity must be positive");
  if (!(params_.min_speed > 0.0)) throw InvalidInstance("minimal speed must be positive");
  if (!(params_.max_speed > params_.min_speed)) throw InvalidInstance("maximal speed must exceed minimal speed");
  if (!(params_.renting_ratio >= 0.0)) throw InvalidInstance("renting ratio must be non-negative");

  items_at_.assign(static_cast<std::size_t>(n), {});
  for (std::size_t j = 0; j < items_.size(); ++j) {
    const Item& it = items_[j];
    if (it.city < 1 || it.city >= n) {
      throw InvalidInstance(fmt::format("item {} is assigned to city {}, expected 2..{}", j + 1, it.city + 1, n));
    }
    if (!(it.profit >= 0.0) || !(it.weight >= 0.0)) {
      throw InvalidInstance(fmt::format("item {} has a negative profit or weight", j + 1));
    }
    items_at_[static_cast<std::size_t>(it.city)].push_back(static_cast<int>(j));
  }
}

double TtpInstance::distance(int u, int v) const {
  const Point& a = coords_[static_cast<std::size_t>(u)];
  const Point& b = coords_[static_cast<std::size_t>(v)];
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double d = std::sqrt(dx * dx + dy * dy);
  switch (params_.edge_weight_type) {
    case EdgeWeightType::kCeil2D:
      return std::ceil(d);
    case EdgeWeightType::kEuc2D:
      return std::floor(d + 0.5);
  }
  return d;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

double to_double(std::string_view token, int line, std::string_view field) {
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError(line, fmt::format("{} is not a number: '{}'", field, token));
  }
  return value;
}

long to_integer(std::string_view token, int line, std::string_view field) {
  const double v = to_double(token, line, field);
  if (v != std::floor(v)) throw ParseError(line, fmt::format("{} must be an integer: '{}'", field, token));
  return static_cast<long>(v);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

enum class Section { kHeader, kCoords, kItems };

}  // namespace

TtpInstance parse_instance(std::istream& in) {
  TtpInstance::Params params;
  long dimension = -1;
  long item_count = -1;
  bool have_capacity = false;

  std::vector<Point> coords;
  std::vector<char> seen_city;
  std::vector<Item> items;
  std::vector<char> seen_item;
  long coords_read = 0;
  long items_read = 0;
  bool saw_items_section = false;

  Section section = Section::kHeader;
  std::string raw;
  int line_no = 0;

  auto begin_body = [&](int line) {
    if (dimension < 0) throw ParseError(line, "missing DIMENSION header");
    if (item_count < 0) throw ParseError(line, "missing NUMBER OF ITEMS header");
    if (!have_capacity) throw ParseError(line, "missing CAPACITY OF KNAPSACK header");
    if (coords.empty()) {
      coords.resize(static_cast<std::size_t>(dimension));
      seen_city.assign(static_cast<std::size_t>(dimension), 0);
      items.resize(static_cast<std::size_t>(item_count));
      seen_item.assign(static_cast<std::size_t>(item_count), 0);
    }
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const std::string key_upper = upper(line);

    if (starts_with(key_upper, "NODE_COORD_SECTION")) {
      begin_body(line_no);
      section = Section::kCoords;
      continue;
    }
    if (starts_with(key_upper, "ITEMS SECTION")) {
      begin_body(line_no);
      section = Section::kItems;
      saw_items_section = true;
      continue;
    }
    if (key_upper == "EOF") break;

    switch (section) {
      case Section::kHeader: {
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw ParseError(line_no, fmt::format("malformed header line '{}'", line));
        const std::string key = upper(trim(line.substr(0, colon)));
        const std::string_view value = trim(line.substr(colon + 1));
        if (key == "PROBLEM NAME") {
          params.name = std::string(value);
        } else if (key == "KNAPSACK DATA TYPE") {
          params.knapsack_data_type = std::string(value);
        } else if (key == "DIMENSION") {
          dimension = to_integer(value, line_no, "DIMENSION");
          if (dimension < 3) throw ParseError(line_no, "DIMENSION must be at least 3");
        } else if (key == "NUMBER OF ITEMS") {
          item_count = to_integer(value, line_no, "NUMBER OF ITEMS");
          if (item_count < 1) throw ParseError(line_no, "NUMBER OF ITEMS must be at least 1");
        } else if (key == "CAPACITY OF KNAPSACK" || key == "CAPACITY") {
          params.capacity = to_double(value, line_no, "CAPACITY OF KNAPSACK");
          have_capacity = true;
        } else if (key == "MIN SPEED") {
          params.min_speed = to_double(value, line_no, "MIN SPEED");
        } else if (key == "MAX SPEED") {
          params.max_speed = to_double(value, line_no, "MAX SPEED");
        } else if (key == "RENTING RATIO") {
          params.renting_ratio = to_double(value, line_no, "RENTING RATIO");
        } else if (key == "EDGE_WEIGHT_TYPE") {
          const std::string type = upper(value);
          if (type == "CEIL_2D") {
            params.edge_weight_type = EdgeWeightType::kCeil2D;
          } else if (type == "EUC_2D") {
            params.edge_weight_type = EdgeWeightType::kEuc2D;
          } else {
            throw ParseError(line_no, fmt::format("unsupported EDGE_WEIGHT_TYPE '{}'", value));
          }
        }
        // Unknown header keys are ignored.
        break;
      }
      case Section::kCoords: {
        const auto tok = split_ws(line);
        if (tok.size() != 3) throw ParseError(line_no, "expected 'index x y'");
        const long idx = to_integer(tok[0], line_no, "city index");
        if (idx < 1 || idx > dimension) throw ParseError(line_no, fmt::format("city index {} out of range 1..{}", idx, dimension));
        auto& seen = seen_city[static_cast<std::size_t>(idx - 1)];
        if (seen) throw ParseError(line_no, fmt::format("duplicate city index {}", idx));
        seen = 1;
        coords[static_cast<std::size_t>(idx - 1)] = {to_double(tok[1], line_no, "x"), to_double(tok[2], line_no, "y")};
        ++coords_read;
        break;
      }
      case Section::kItems: {
        const auto tok = split_ws(line);
        if (tok.size() != 4) throw ParseError(line_no, "expected 'index profit weight city'");
        const long idx = to_integer(tok[0], line_no, "item index");
        if (idx < 1 || idx > item_count) throw ParseError(line_no, fmt::format("item index {} out of range 1..{}", idx, item_count));
        auto& seen = seen_item[static_cast<std::size_t>(idx - 1)];
        if (seen) throw ParseError(line_no, fmt::format("duplicate item index {}", idx));
        seen = 1;
        const double profit = to_double(tok[1], line_no, "profit");
        const double weight = to_double(tok[2], line_no, "weight");
        const long city = to_integer(tok[3], line_no, "assigned city");
        if (city == 1) throw ParseError(line_no, fmt::format("item {} is assigned to city 1, which holds no items", idx));
        if (city < 2 || city > dimension) throw ParseError(line_no, fmt::format("item {} references city {} out of range 2..{}", idx, city, dimension));
        if (profit < 0.0 || weight < 0.0) throw ParseError(line_no, "profit and weight must be non-negative");
        items[static_cast<std::size_t>(idx - 1)] = {profit, weight, static_cast<int>(city - 1)};
        ++items_read;
        break;
      }
    }
  }

  const int end_line = line_no + 1;
  if (section == Section::kHeader) throw ParseError(end_line, "missing NODE_COORD_SECTION");
  if (coords_read != dimension) throw ParseError(end_line, fmt::format("expected {} city coordinates, read {}", dimension, coords_read));
  if (!saw_items_section) throw ParseError(end_line, "missing ITEMS SECTION");
  if (items_read != item_count) throw ParseError(end_line, fmt::format("expected {} items, read {}", item_count, items_read));

  try {
    return TtpInstance(std::move(params), std::move(coords), std::move(items));
  } catch (const InvalidInstance& e) {
    throw ParseError(end_line, e.what());
  }
}

TtpInstance parse_instance_string(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

TtpInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open instance file '{}'", path));
  return parse_instance(in);
}

void write_instance(std::ostream& out, const TtpInstance& inst) {
  const auto& p = inst.params();
  fmt::print(out, "PROBLEM NAME:\t{}\n", p.name);
  fmt::print(out, "KNAPSACK DATA TYPE:\t{}\n", p.knapsack_data_type.empty() ? "uncorrelated" : p.knapsack_data_type);
  fmt::print(out, "DIMENSION:\t{}\n", inst.num_cities());
  fmt::print(out, "NUMBER OF ITEMS:\t{}\n", inst.num_items());
  fmt::print(out, "CAPACITY OF KNAPSACK:\t{}\n", p.capacity);
  fmt::print(out, "MIN SPEED:\t{}\n", p.min_speed);
  fmt::print(out, "MAX SPEED:\t{}\n", p.max_speed);
  fmt::print(out, "RENTING RATIO:\t{}\n", p.renting_ratio);
  fmt::print(out, "EDGE_WEIGHT_TYPE:\t{}\n", p.edge_weight_type == EdgeWeightType::kCeil2D ? "CEIL_2D" : "EUC_2D");
  fmt::print(out, "NODE_COORD_SECTION\t(INDEX, X, Y):\n");
  for (int i = 0; i < inst.num_cities(); ++i) {
    const Point& c = inst.coords()[static_cast<std::size_t>(i)];
    fmt::print(out, "{}\t{}\t{}\n", i + 1, c.x, c.y);
  }
  fmt::print(out, "ITEMS SECTION\t(INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):\n");
  for (int j = 0; j < inst.num_items(); ++j) {
    const Item& it = inst.item(j);
    fmt::print(out, "{}\t{}\t{}\t{}\n", j + 1, it.profit, it.weight, it.city + 1);
  }
}

bool is_valid_tour(const TtpInstance& inst, const Tour& tour) {
  const int n = inst.num_cities();
  if (static_cast<int>(tour.size()) != n || tour.empty() || tour[0] != 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int c : tour) {
    if (c < 0 || c >= n || seen[static_cast<std::size_t>(c)]) return false;
    seen[static_cast<std::size_t>(c)] = 1;
  }
  return true;
}

double tour_length(const TtpInstance& inst, const Tour& tour) {
  const std::size_t n = tour.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += inst.distance(tour[i], tour[(i + 1) % n]);
  return total;
}

ProfitWeight packing_profit_weight(const TtpInstance& inst, const Packing& packing) {
  ProfitWeight pw;
  for (std::size_t j = 0; j < packing.size(); ++j) {
    if (packing[j]) {
      pw.profit += inst.items()[j].profit;
      pw.weight += inst.items()[j].weight;
    }
  }
  return pw;
}

bool is_feasible(const TtpInstance& inst, const Packing& packing) {
  return static_cast<int>(packing.size()) == inst.num_items() && packing_profit_weight(inst, packing).weight <= inst.capacity();
}

double travel_time(const TtpInstance& inst, const Tour& tour, const Packing& packing) {
  const std::size_t n = tour.size();
  const double slope = inst.speed_slope();
  double carried = 0.0;
  double time = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int city = tour[i];
    for (int j : inst.items_at(city)) {
      if (packing[static_cast<std::size_t>(j)]) carried += inst.item(j).weight;
    }
    time += inst.distance(city, tour[(i + 1) % n]) / (inst.max_speed() - slope * carried);
  }
  return time;
}

std::optional<double> ttp_objective(const TtpInstance& inst, const Tour& tour, const Packing& packing) {
  const ProfitWeight pw = packing_profit_weight(inst, packing);
  if (pw.weight > inst.capacity()) return std::nullopt;
  return pw.profit - inst.renting_ratio() * travel_time(inst, tour, packing);
}

Solution make_solution(const TtpInstance& inst, Tour tour, Packing packing) {
  const auto z = ttp_objective(inst, tour, packing);
  if (!z) throw std::invalid_argument("packing exceeds the knapsack capacity");
  return make_solution(inst, std::move(tour), std::move(packing), *z);
}

Solution make_solution(const TtpInstance& inst, Tour tour, Packing packing, double z) {
  Solution s;
  s.f = tour_length(inst, tour);
  s.g = packing_profit_weight(inst, packing).profit;
  s.z = z;
  s.tour = std::move(tour);
  s.packing = std::move(packing);
  return s;
}

}  // namespace ttpcd
