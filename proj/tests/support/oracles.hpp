#pragma once

// Independent reference computations for the test suites. Everything here
// is deliberately brute force and shares no code with the library paths it
// checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace testsupport {

inline std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(gen);
  return v;
}

inline std::vector<double> naive_convolve(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline std::vector<std::complex<double>> direct_dft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * std::numbers::pi * double(k) * double(j) / double(n);
      acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

struct SineFit {
  double amplitude = 0.0;
  double phase = 0.0;  // of a*sin(w t + phi) fitted at the given frequency
};

inline SineFit fit_sine(std::span<const double> x, double freq_hz, int rate, std::size_t begin,
                        std::size_t end) {
  double ss = 0.0, sc = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double ang = 2.0 * std::numbers::pi * freq_hz * double(i) / rate;
    ss += x[i] * std::sin(ang);
    sc += x[i] * std::cos(ang);
  }
  const double n = double(end - begin);
  const double a = 2.0 * ss / n;  // sin coefficient
  const double b = 2.0 * sc / n;  // cos coefficient
  return {std::hypot(a, b), std::atan2(b, a)};
}

// Exact two-sided Mann-Whitney p by enumerating every assignment of the
// pooled ranks to the first sample. Tie-free inputs only.
inline double brute_force_mwu_p(std::span<const double> a, std::span<const double> b) {
  const std::size_t n_a = a.size(), n = a.size() + b.size();
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());

  double rank_sum_obs = 0.0;
  for (double v : a)
    rank_sum_obs += double(std::lower_bound(pooled.begin(), pooled.end(), v) - pooled.begin()) + 1.0;
  const double u_obs = rank_sum_obs - double(n_a * (n_a + 1)) / 2.0;

  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + std::ptrdiff_t(n_a), true);
  std::sort(pick.begin(), pick.end());  // lowest permutation for next_permutation
  std::size_t total = 0, low = 0, high = 0;
  do {
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) rank_sum += double(i) + 1.0;
    const double u = rank_sum - double(n_a * (n_a + 1)) / 2.0;
    ++total;
    if (u <= u_obs + 1e-9) ++low;
    if (u >= u_obs - 1e-9) ++high;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return std::min(1.0, 2.0 * double(std::min(low, high)) / double(total));
}

// Energy fraction per one-third-octave band (150*2^(k/3) centers), from a
// direct power-spectrum summation.
std::vector<double> third_octave_fractions(std::span<const double> x, int rate);

// speech-like broadband test source: harmonic stack plus pink-ish noise
std::vector<double> speechlike_source(std::mt19937_64& gen, std::size_t n, int rate);

}  // namespace testsupport
