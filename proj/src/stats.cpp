#include "phonoscope/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "phonoscope/error.hpp"

namespace phonoscope {

namespace {

struct Ranked {
  std::vector<double> ranks_a;   // midranks of sample a within the pooled order
  bool has_ties = false;
  double tie_term = 0.0;         // sum of t^3 - t over tie groups
};

Ranked pooled_ranks(std::span<const double> a, std::span<const double> b) {
  struct Item {
    double value;
    bool from_a;
  };
  std::vector<Item> pooled;
  pooled.reserve(a.size() + b.size());
  for (double v : a) pooled.push_back({v, true});
  for (double v : b) pooled.push_back({v, false});
  std::sort(pooled.begin(), pooled.end(),
            [](const Item& x, const Item& y) { return x.value < y.value; });

  Ranked out;
  out.ranks_a.reserve(a.size());
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
    const double t = double(j - i);
    const double midrank = (double(i + 1) + double(j)) / 2.0;  // ranks are 1-based
    if (j - i > 1) {
      out.has_ties = true;
      out.tie_term += t * t * t - t;
    }
    for (std::size_t k = i; k < j; ++k)
      if (pooled[k].from_a) out.ranks_a.push_back(midrank);
    i = j;
  }
  return out;
}

// Exact tail probabilities of the rank-sum statistic via the subset-sum
// count of n_a ranks drawn from 1..N.
double exact_two_sided_p(double u_obs, std::size_t n_a, std::size_t n_b) {
  const std::size_t n = n_a + n_b;
  const std::size_t max_sum = n_a * n + n_a;  // loose upper bound on the rank sum
  // count[k][s]: subsets of size k with rank sum s
  std::vector<std::vector<double>> count(n_a + 1, std::vector<double>(max_sum + 1, 0.0));
  count[0][0] = 1.0;
  for (std::size_t rank = 1; rank <= n; ++rank)
    for (std::size_t k = std::min(rank, n_a); k >= 1; --k)
      for (std::size_t s = max_sum; s >= rank; --s)
        if (count[k - 1][s - rank] != 0.0) count[k][s] += count[k - 1][s - rank];

  const double min_rank_sum = double(n_a * (n_a + 1)) / 2.0;
  double total = 0.0, low = 0.0, high = 0.0;
  for (std::size_t s = 0; s <= max_sum; ++s) {
    const double c = count[n_a][s];
    if (c == 0.0) continue;
    total += c;
    const double u = double(s) - min_rank_sum;
    if (u <= u_obs + 1e-9) low += c;
    if (u >= u_obs - 1e-9) high += c;
  }
  return std::min(1.0, 2.0 * std::min(low, high) / total);
}

double normal_two_sided_p(double u_obs, std::size_t n_a, std::size_t n_b, double tie_term) {
  const double na = double(n_a), nb = double(n_b), n = na + nb;
  const double mean = na * nb / 2.0;
  const double variance = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (variance <= 0.0) return 1.0;  // all values identical
  double z;
  if (u_obs > mean)
    z = (u_obs - mean - 0.5) / std::sqrt(variance);
  else if (u_obs < mean)
    z = (u_obs - mean + 0.5) / std::sqrt(variance);
  else
    z = 0.0;
  return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
}

}  // namespace

std::string_view test_method_name(TestMethod method) {
  return method == TestMethod::Exact ? "exact" : "normal_approximation";
}

StatTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                              const MannWhitneyOptions& options) {
  if (a.empty() || b.empty())
    fail(ErrorKind::InvalidArgument, "Mann-Whitney U requires non-empty samples");
  for (double v : a)
    if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "sample a contains a non-finite value");
  for (double v : b)
    if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "sample b contains a non-finite value");

  const Ranked ranked = pooled_ranks(a, b);
  double rank_sum_a = 0.0;
  for (double r : ranked.ranks_a) rank_sum_a += r;
  const double u_a = rank_sum_a - double(a.size() * (a.size() + 1)) / 2.0;

  StatTestResult result;
  result.u_statistic = u_a;
  result.n_a = a.size();
  result.n_b = b.size();
  if (!ranked.has_ties && a.size() * b.size() <= options.exact_threshold) {
    result.method = TestMethod::Exact;
    result.p_value = exact_two_sided_p(u_a, a.size(), b.size());
  } else {
    result.method = TestMethod::NormalApproximation;
    result.p_value = normal_two_sided_p(u_a, a.size(), b.size(), ranked.tie_term);
  }
  result.significant = result.p_value < options.alpha;
  return result;
}

std::vector<GroupComparison> compare_groups(std::span<const EvaluationRecord> records,
                                            std::string_view metric, std::string_view group_key,
                                            const std::vector<std::string>& strata_keys,
                                            const CategoryMap* map,
                                            const MannWhitneyOptions& options) {
  if (!is_known_metric(metric))
    fail(ErrorKind::NotFound, "unknown metric field '" + std::string(metric) + "'");
  if (!is_known_key(group_key))
    fail(ErrorKind::NotFound, "unknown grouping key '" + std::string(group_key) + "'");
  for (const std::string& key : strata_keys)
    if (!is_known_key(key)) fail(ErrorKind::NotFound, "unknown stratum key '" + key + "'");

  struct Stratum {
    std::map<std::string, std::vector<double>> groups;
  };
  std::map<std::string, Stratum> strata;
  for (const EvaluationRecord& record : records) {
    const std::optional<double> value = metric_value(record, metric);
    if (!value.has_value()) continue;
    std::string stratum_key;
    for (const std::string& key : strata_keys) {
      if (!stratum_key.empty()) stratum_key += ",";
      stratum_key += key + "=" + key_value(record, key, map);
    }
    if (stratum_key.empty()) stratum_key = "all";
    strata[stratum_key].groups[key_value(record, group_key, map)].push_back(*value);
  }

  std::vector<GroupComparison> out;
  for (const auto& [stratum_key, stratum] : strata) {
    GroupComparison cmp;
    cmp.stratum = stratum_key;
    if (stratum.groups.size() != 2) {
      std::string names;
      for (const auto& [g, _] : stratum.groups) {
        if (!names.empty()) names += ", ";
        names += "'" + g + "'";
      }
      cmp.skip_reason = "needs exactly two groups of '" + std::string(group_key) + "', found " +
                        std::to_string(stratum.groups.size()) + " (" + names + ")";
      out.push_back(std::move(cmp));
      continue;
    }
    auto it = stratum.groups.begin();
    const auto& [name_a, values_a] = *it;
    ++it;
    const auto& [name_b, values_b] = *it;
    cmp.group_a = name_a;
    cmp.group_b = name_b;
    cmp.test = mann_whitney_u(values_a, values_b, options);
    out.push_back(std::move(cmp));
  }
  return out;
}

}  // namespace phonoscope
