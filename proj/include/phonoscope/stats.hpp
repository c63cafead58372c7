#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phonoscope/records.hpp"

namespace phonoscope {

enum class TestMethod { Exact, NormalApproximation };

std::string_view test_method_name(TestMethod method);

struct StatTestResult {
  double u_statistic = 0.0;  // U of the first sample
  double p_value = 1.0;      // two-sided
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  TestMethod method = TestMethod::Exact;
  bool significant = false;  // p < alpha
};

struct MannWhitneyOptions {
  std::size_t exact_threshold = 400;  // exact when n_a*n_b <= threshold and tie-free
  double alpha = 0.05;
};

/// Rank-sum test with midrank tie handling. The exact two-sided p-value is
/// computed by enumerating the rank-sum distribution when cheap and the
/// samples are tie-free; otherwise a tie-corrected normal approximation
/// with continuity correction is used. Two-sided p = 2*min(tails), capped
/// at 1.
StatTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                              const MannWhitneyOptions& options = {});

struct GroupComparison {
  std::string stratum;  // "key=value,key=value" or "all"
  std::string group_a;
  std::string group_b;
  std::optional<StatTestResult> test;  // empty when skipped
  std::string skip_reason;
};

/// One test per stratum, comparing the metric between the two values of
/// group_key present there. Strata missing a group (or with more than two)
/// are reported skipped. Results are ordered by stratum key.
std::vector<GroupComparison> compare_groups(std::span<const EvaluationRecord> records,
                                            std::string_view metric, std::string_view group_key,
                                            const std::vector<std::string>& strata_keys,
                                            const CategoryMap* map = nullptr,
                                            const MannWhitneyOptions& options = {});

}  // namespace phonoscope
