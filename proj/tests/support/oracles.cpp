#include "support/oracles.hpp"

#include "phonoscope/dsp.hpp"

namespace testsupport {

std::vector<double> third_octave_fractions(std::span<const double> x, int rate) {
  const phonoscope::Spectrum spec = phonoscope::rfft(x);
  const double bin_hz = double(rate) / double(x.size());
  double total = 0.0;
  for (const auto& b : spec.bins) total += std::norm(b);
  std::vector<double> fractions;
  for (int k = 0; k < 15; ++k) {
    const double center = 150.0 * std::pow(2.0, double(k) / 3.0);
    const double lo = center * std::pow(2.0, -1.0 / 6.0);
    const double hi = center * std::pow(2.0, 1.0 / 6.0);
    double e = 0.0;
    for (std::size_t j = std::size_t(std::ceil(lo / bin_hz));
         j < spec.bins.size() && double(j) * bin_hz < hi; ++j)
      e += std::norm(spec.bins[j]);
    fractions.push_back(total > 0.0 ? e / total : 0.0);
  }
  return fractions;
}

std::vector<double> speechlike_source(std::mt19937_64& gen, std::size_t n, int rate) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(n, 0.0);
  const double f0 = 110.0 + 140.0 * unit(gen);
  for (int h = 1; h * f0 < 4500.0; ++h) {
    const double amp = 0.2 / (1.0 + 0.35 * h);
    const double phase = 2.0 * std::numbers::pi * unit(gen);
    for (std::size_t i = 0; i < n; ++i)
      x[i] += amp * std::sin(2.0 * std::numbers::pi * h * f0 * double(i) / rate + phase);
  }
  // pink-ish noise floor so every band carries energy
  phonoscope::Spectrum spec;
  spec.origin_length = n;
  spec.bins.assign(n / 2 + 1, {0.0, 0.0});
  const double bin_hz = double(rate) / double(n);
  for (std::size_t k = 1; k + 1 < spec.bins.size(); ++k) {
    const double f = double(k) * bin_hz;
    if (f < 80.0 || f > 7600.0) continue;
    const double mag = 1.0 / std::sqrt(f);
    const double phase = 2.0 * std::numbers::pi * unit(gen);
    spec.bins[k] = std::polar(mag, phase);
  }
  const std::vector<double> noise = phonoscope::irfft(spec);
  const double g = 0.05 / (*std::max_element(noise.begin(), noise.end()) + 1e-12);
  for (std::size_t i = 0; i < n; ++i) x[i] += g * noise[i];
  return x;
}

}  // namespace testsupport
