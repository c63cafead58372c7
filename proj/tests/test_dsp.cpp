#include <doctest.h>

#include <cmath>
#include <random>

#include "phonoscope/dsp.hpp"
#include "phonoscope/error.hpp"
#include "support/oracles.hpp"

using namespace phonoscope;

namespace {

double rel_rms_error(std::span<const double> got, std::span<const double> want) {
  REQUIRE(got.size() == want.size());
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    err += (got[i] - want[i]) * (got[i] - want[i]);
    ref += want[i] * want[i];
  }
  return std::sqrt(err / (ref + 1e-300));
}

}  // namespace

TEST_CASE("dsp: rfft of a unit impulse is flat") {
  const Spectrum s = rfft(std::vector<double>{1.0, 0.0, 0.0, 0.0});
  REQUIRE(s.bins.size() == 3);
  for (const auto& b : s.bins) {
    CHECK(b.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.imag() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("dsp: rfft matches a direct DFT on odd and even lengths") {
  std::mt19937_64 gen(11);
  for (std::size_t n : {4u, 8u, 12u, 31u, 100u}) {
    const auto x = testsupport::random_vector(gen, n);
    const Spectrum s = rfft(x);
    const auto want = testsupport::direct_dft(x);
    REQUIRE(s.bins.size() == want.size());
    for (std::size_t k = 0; k < want.size(); ++k)
      CHECK(std::abs(s.bins[k] - want[k]) < 1e-9 * (1.0 + std::abs(want[k])));
  }
}

TEST_CASE("dsp: rfft/irfft round trip within 1e-9 relative RMS") {
  std::mt19937_64 gen(12);
  for (std::size_t n : {7u, 513u, 1023u, 1024u, 16000u}) {
    const auto x = testsupport::random_vector(gen, n);
    const auto y = irfft(rfft(x));
    CHECK(rel_rms_error(y, x) < 1e-9);
  }
}

TEST_CASE("dsp: Parseval identity against direct summation") {
  std::mt19937_64 gen(13);
  for (std::size_t n : {512u, 511u}) {
    const auto x = testsupport::random_vector(gen, n);
    double time_energy = 0.0;
    for (double v : x) time_energy += v * v;

    const Spectrum s = rfft(x);
    double spec_energy = std::norm(s.bins.front());
    const bool even = n % 2 == 0;
    for (std::size_t k = 1; k + 1 < s.bins.size(); ++k) spec_energy += 2.0 * std::norm(s.bins[k]);
    spec_energy += (even ? 1.0 : 2.0) * std::norm(s.bins.back());
    spec_energy /= double(n);

    CHECK(std::abs(spec_energy - time_energy) < 1e-9 * time_energy);
  }
}

TEST_CASE("dsp: irfft enforces Hermitian-consistent DC and Nyquist bins") {
  Spectrum s = rfft(std::vector<double>{0.5, -0.25, 0.125, 1.0});
  s.bins[0] += std::complex<double>(0.0, 0.5);
  CHECK_THROWS_AS((void)irfft(s), Error);

  Spectrum bad_count = rfft(std::vector<double>{1.0, 2.0, 3.0, 4.0});
  bad_count.bins.pop_back();
  CHECK_THROWS_AS((void)irfft(bad_count), Error);
}

TEST_CASE("dsp: empty inputs are rejected") {
  CHECK_THROWS_AS((void)rfft(std::vector<double>{}), Error);
  CHECK_THROWS_AS((void)convolve(std::vector<double>{}, std::vector<double>{1.0},
                                 ConvolveMode::Full),
                  Error);
  CHECK_THROWS_AS((void)convolve(std::vector<double>{1.0}, std::vector<double>{},
                                 ConvolveMode::Full),
                  Error);
}

TEST_CASE("dsp: convolution identities") {
  const auto shifted =
      convolve(std::vector<double>{1.0, 0.0, 0.0}, std::vector<double>{0.0, 1.0},
               ConvolveMode::Full);
  REQUIRE(shifted.size() == 4);
  CHECK(shifted[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(shifted[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(shifted[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(shifted[3] == doctest::Approx(0.0).epsilon(1e-12));

  std::mt19937_64 gen(14);
  const auto x = testsupport::random_vector(gen, 64);
  const auto same = convolve(x, std::vector<double>{1.0}, ConvolveMode::Full);
  CHECK(rel_rms_error(same, x) < 1e-12);
}

TEST_CASE("dsp: convolution matches the naive oracle") {
  std::mt19937_64 gen(15);
  {
    const auto x = testsupport::random_vector(gen, 256);
    const auto k = testsupport::random_vector(gen, 32);
    const auto got = convolve(x, k, ConvolveMode::Full);
    const auto want = testsupport::naive_convolve(x, k);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i)
      max_diff = std::max(max_diff, std::abs(got[i] - want[i]));
    CHECK(max_diff < 1e-9);
  }
  // randomized property over lengths up to 512
  std::uniform_int_distribution<std::size_t> len(1, 512);
  for (int trial = 0; trial < 25; ++trial) {
    const auto x = testsupport::random_vector(gen, len(gen));
    const auto k = testsupport::random_vector(gen, len(gen) % 64 + 1);
    const auto got = convolve(x, k, ConvolveMode::Full);
    const auto want = testsupport::naive_convolve(x, k);
    REQUIRE(got.size() == x.size() + k.size() - 1);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i)
      max_diff = std::max(max_diff, std::abs(got[i] - want[i]));
    CHECK(max_diff < 1e-9);
  }
}

TEST_CASE("dsp: truncate_to_signal mode keeps the signal length") {
  std::mt19937_64 gen(16);
  const auto x = testsupport::random_vector(gen, 100);
  const auto k = testsupport::random_vector(gen, 17);
  const auto full = convolve(x, k, ConvolveMode::Full);
  const auto cut = convolve(x, k, ConvolveMode::TruncateToSignal);
  REQUIRE(cut.size() == x.size());
  for (std::size_t i = 0; i < cut.size(); ++i) CHECK(cut[i] == full[i]);
}

TEST_CASE("dsp: resample at the same rate is the identity") {
  std::mt19937_64 gen(17);
  Waveform w = Waveform::mono(testsupport::random_vector(gen, 1000), 16000);
  const Waveform out = resample(w, 16000);
  REQUIRE(out.num_frames() == w.num_frames());
  for (std::size_t i = 0; i < out.num_frames(); ++i)
    CHECK(out.channels[0][i] == w.channels[0][i]);
}

TEST_CASE("dsp: a sine survives 16 kHz -> 10 kHz resampling") {
  for (double freq : {1000.0, 3500.0}) {
    const int src = 16000, dst = 10000;
    std::vector<double> x(16000);
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = 0.5 * std::sin(2.0 * std::numbers::pi * freq * double(i) / src);
    const Waveform out = resample(Waveform::mono(x, src), dst);

    // amplitude in the steady-state region, fitted at the nominal frequency
    const auto fit = testsupport::fit_sine(out.channels[0], freq, dst, 1000, 9000);
    const double amp_db = 20.0 * std::log10(fit.amplitude / 0.5);
    CHECK(std::abs(amp_db) < 0.5);

    // frequency error from the phase drift between two fit windows
    const auto fit_a = testsupport::fit_sine(out.channels[0], freq, dst, 1000, 3000);
    const auto fit_b = testsupport::fit_sine(out.channels[0], freq, dst, 6000, 8000);
    double dphi = fit_b.phase - fit_a.phase;
    while (dphi > std::numbers::pi) dphi -= 2.0 * std::numbers::pi;
    while (dphi < -std::numbers::pi) dphi += 2.0 * std::numbers::pi;
    const double dt = 5000.0 / dst;  // window-center spacing in seconds
    CHECK(std::abs(dphi / (2.0 * std::numbers::pi * dt)) < 0.1);
  }
}

TEST_CASE("dsp: resampling preserves DC") {
  const Waveform out = resample(Waveform::mono(std::vector<double>(4000, 0.5), 16000), 10000);
  for (std::size_t i = 100; i + 100 < out.num_frames(); ++i)
    CHECK(std::abs(out.channels[0][i] - 0.5) < 1e-3);
}

TEST_CASE("dsp: slice and energy") {
  std::mt19937_64 gen(18);
  const auto x = testsupport::random_vector(gen, 50);
  const auto full = slice(std::span<const double>(x), 0, x.size());
  CHECK(full == x);
  CHECK_THROWS_AS((void)slice(std::span<const double>(x), 10, 5), Error);
  CHECK_THROWS_AS((void)slice(std::span<const double>(x), 0, 51), Error);
  CHECK(energy(std::vector<double>{3.0, 4.0}) == doctest::Approx(25.0));
  CHECK(energy(std::vector<double>(128, 0.0)) == 0.0);
}

TEST_CASE("dsp: operations leave their inputs unmodified") {
  std::mt19937_64 gen(19);
  const auto x = testsupport::random_vector(gen, 300);
  const auto k = testsupport::random_vector(gen, 31);
  const auto x_copy = x;
  const auto k_copy = k;
  (void)rfft(x);
  (void)convolve(x, k, ConvolveMode::Full);
  (void)energy(x);
  (void)slice(std::span<const double>(x), 5, 200);
  const Waveform w = Waveform::mono(x, 16000);
  (void)resample(w, 10000);
  CHECK(x == x_copy);
  CHECK(k == k_copy);
  CHECK(w.channels[0] == x_copy);
}
