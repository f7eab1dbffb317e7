#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ttpcd::stats {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::string method;
  std::vector<std::size_t> group_sizes;
};

/// kLess: the first sample tends to be smaller than the second.
enum class Alternative { kTwoSided, kLess, kGreater };

/// kAuto: exact up to a pooled size of 12, normal approximation above.
enum class MwMethod { kAuto, kExact, kNormal };

/// Average (1-based) ranks of the pooled values, ties receiving their mid-rank.
std::vector<double> midranks(std::span<const double> values);

double normal_cdf(double x);

/// Regularised upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_sf(double x, double dof);

/// Tie-corrected H statistic; p-value from chi-square with k-1 degrees of freedom.
TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

/// U of the first sample with mid-ranks. Exact permutation distribution when
/// the pooled size is at most 12, otherwise a normal approximation with tie
/// correction and continuity correction.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          Alternative alternative = Alternative::kTwoSided, MwMethod method = MwMethod::kAuto);

/// p_i < alpha / count
std::vector<bool> bonferroni(std::span<const double> p_values, double alpha);

double median(std::vector<double> values);
double mean(std::span<const double> values);

}  // namespace ttpcd::stats
