#include "ttpcd/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ttpcd::stats {

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

// Sum of t^3 - t over tie groups.
double tie_term(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    total += t * t * t - t;
    i = j;
  }
  return total;
}

constexpr double kEps = 1e-15;

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    // Series for P(a, x).
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return std::max(0.0, 1.0 - sum * std::exp(log_prefix));
  }
  // Continued fraction for Q(a, x), modified Lentz.
  const double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::min(1.0, std::exp(log_prefix) * h);
}

double chi_square_sf(double x, double dof) { return gamma_q(0.5 * dof, 0.5 * x); }

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw std::invalid_argument("Kruskal-Wallis needs at least two groups");
  TestResult result;
  result.method = "kruskal-wallis";
  std::vector<double> pooled;
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("Kruskal-Wallis groups must be non-empty");
    result.group_sizes.push_back(g.size());
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const double n = static_cast<double>(pooled.size());
  const double correction = 1.0 - tie_term(pooled) / (n * n * n - n);
  if (!(correction > 0.0)) {
    result.statistic = 0.0;
    result.p_value = 1.0;
    return result;
  }
  const auto ranks = midranks(pooled);
  double sum = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    const double r = std::accumulate(ranks.begin() + static_cast<long>(offset),
                                     ranks.begin() + static_cast<long>(offset + g.size()), 0.0);
    sum += r * r / static_cast<double>(g.size());
    offset += g.size();
  }
  const double h = (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction;
  result.statistic = std::max(0.0, h);
  result.p_value = std::clamp(chi_square_sf(result.statistic, static_cast<double>(groups.size() - 1)), 0.0, 1.0);
  return result;
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, Alternative alternative,
                          MwMethod method) {
  if (a.empty() || b.empty()) throw std::invalid_argument("Mann-Whitney samples must be non-empty");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = midranks(pooled);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double rank_sum = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(a.size()), 0.0);
  const double u = rank_sum - na * (na + 1.0) / 2.0;
  const double center = na * nb / 2.0;

  TestResult result;
  result.statistic = u;
  result.group_sizes = {a.size(), b.size()};

  const std::size_t total = pooled.size();
  if (method == MwMethod::kExact && total > 24) throw std::invalid_argument("exact Mann-Whitney limited to 24 values");
  if (method == MwMethod::kExact || (method == MwMethod::kAuto && total <= 12)) {
    result.method = "mann-whitney-exact";
    const double tol = 1e-9;
    std::size_t count = 0;
    std::size_t hits = 0;
    for (unsigned mask = 0; mask < (1U << total); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != a.size()) continue;
      double r = 0.0;
      for (std::size_t k = 0; k < total; ++k) {
        if (mask & (1U << k)) r += ranks[k];
      }
      const double uu = r - na * (na + 1.0) / 2.0;
      ++count;
      switch (alternative) {
        case Alternative::kLess:
          hits += uu <= u + tol;
          break;
        case Alternative::kGreater:
          hits += uu >= u - tol;
          break;
        case Alternative::kTwoSided:
          hits += std::abs(uu - center) >= std::abs(u - center) - tol;
          break;
      }
    }
    result.p_value = static_cast<double>(hits) / static_cast<double>(count);
    return result;
  }

  result.method = "mann-whitney-normal";
  const double n = na + nb;
  const double variance = na * nb / 12.0 * ((n + 1.0) - tie_term(pooled) / (n * (n - 1.0)));
  if (!(variance > 0.0)) {
    result.p_value = 1.0;
    return result;
  }
  const double sd = std::sqrt(variance);
  switch (alternative) {
    case Alternative::kLess:
      result.p_value = normal_cdf((u - center + 0.5) / sd);
      break;
    case Alternative::kGreater:
      result.p_value = 1.0 - normal_cdf((u - center - 0.5) / sd);
      break;
    case Alternative::kTwoSided: {
      const double zval = std::max(0.0, std::abs(u - center) - 0.5) / sd;
      result.p_value = std::min(1.0, std::erfc(zval / std::sqrt(2.0)));
      break;
    }
  }
  result.p_value = std::clamp(result.p_value, 0.0, 1.0);
  return result;
}

std::vector<bool> bonferroni(std::span<const double> p_values, double alpha) {
  std::vector<bool> flags;
  flags.reserve(p_values.size());
  const double threshold = alpha / static_cast<double>(std::max<std::size_t>(p_values.size(), 1));
  for (double p : p_values) flags.push_back(p < threshold);
  return flags;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace ttpcd::stats
