#include "phonoscope/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "phonoscope/error.hpp"

namespace phonoscope {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Iterative radix-2 transform with a per-call twiddle table; the table keeps
// the error of long transforms at the rounding level instead of letting
// recurrence-computed twiddles drift.
void fft_pow2(std::vector<cd>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<cd> twiddle(n / 2);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n / 2; ++k)
    twiddle[k] = std::polar(1.0, sign * 2.0 * kPi * double(k) / double(n));
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cd u = a[i + k];
        const cd v = a[i + k + len / 2] * twiddle[k * stride];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= double(n);
}

// Bluestein chirp transform for arbitrary lengths. j^2 is reduced mod 2n in
// integer arithmetic before the angle is formed, so long signals do not lose
// phase precision.
std::vector<cd> bluestein_forward(const std::vector<cd>& x) {
  const std::size_t n = x.size();
  std::vector<cd> chirp(n);  // chirp[j] = exp(-i*pi*j^2/n)
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint64_t j2 = std::uint64_t((__uint128_t(j) * j) % (2 * n));
    chirp[j] = std::polar(1.0, -kPi * double(j2) / double(n));
  }
  const std::size_t m = next_pow2(2 * n - 1);
  std::vector<cd> a(m), b(m);
  for (std::size_t j = 0; j < n; ++j) a[j] = x[j] * chirp[j];
  b[0] = std::conj(chirp[0]);
  for (std::size_t j = 1; j < n; ++j) b[j] = b[m - j] = std::conj(chirp[j]);
  fft_pow2(a, false);
  fft_pow2(b, false);
  for (std::size_t j = 0; j < m; ++j) a[j] *= b[j];
  fft_pow2(a, true);
  std::vector<cd> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
  return out;
}

std::vector<cd> fft_any(std::vector<cd> x, bool inverse) {
  const std::size_t n = x.size();
  if (n == 0) return x;
  if (is_pow2(n)) {
    fft_pow2(x, inverse);
    return x;
  }
  if (!inverse) return bluestein_forward(x);
  for (auto& v : x) v = std::conj(v);
  std::vector<cd> y = bluestein_forward(x);
  for (auto& v : y) v = std::conj(v) / double(n);
  return y;
}

double kaiser_i0(double x) {
  // modified Bessel I0 by series; converges fast for the beta range used
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / double(k * k);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

}  // namespace

Spectrum rfft(std::span<const double> x) {
  if (x.empty()) fail(ErrorKind::InvalidArgument, "rfft input is empty");
  std::vector<cd> a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = cd(x[i], 0.0);
  a = fft_any(std::move(a), false);
  Spectrum s;
  s.origin_length = x.size();
  s.bins.assign(a.begin(), a.begin() + (x.size() / 2 + 1));
  return s;
}

std::vector<double> irfft(const Spectrum& spectrum) {
  const std::size_t n = spectrum.origin_length;
  if (n == 0) fail(ErrorKind::InvalidArgument, "irfft spectrum has zero origin length");
  if (spectrum.bins.size() != n / 2 + 1)
    fail(ErrorKind::InvalidArgument,
         "irfft expects " + std::to_string(n / 2 + 1) + " bins for origin length " +
             std::to_string(n) + ", got " + std::to_string(spectrum.bins.size()));
  double max_mag = 0.0;
  for (const cd& b : spectrum.bins) max_mag = std::max(max_mag, std::abs(b));
  const double tol = 1e-9 * (1.0 + max_mag);
  if (std::abs(spectrum.bins.front().imag()) > tol)
    fail(ErrorKind::InvalidArgument, "irfft DC bin has a non-real component");
  if (n % 2 == 0 && std::abs(spectrum.bins.back().imag()) > tol)
    fail(ErrorKind::InvalidArgument, "irfft Nyquist bin has a non-real component");

  std::vector<cd> full(n);
  full[0] = cd(spectrum.bins[0].real(), 0.0);
  for (std::size_t k = 1; k < spectrum.bins.size(); ++k) {
    cd v = spectrum.bins[k];
    if (n % 2 == 0 && k == n / 2) v = cd(v.real(), 0.0);
    full[k] = v;
    if (k != n - k) full[n - k] = std::conj(v);
  }
  std::vector<cd> y = fft_any(std::move(full), true);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i].real();
  return out;
}

std::vector<double> convolve(std::span<const double> signal,
                             std::span<const double> kernel,
                             ConvolveMode mode) {
  if (signal.empty()) fail(ErrorKind::InvalidArgument, "convolve signal is empty");
  if (kernel.empty()) fail(ErrorKind::InvalidArgument, "convolve kernel is empty");
  const std::size_t full_len = signal.size() + kernel.size() - 1;
  const std::size_t m = next_pow2(full_len);
  std::vector<cd> a(m), b(m);
  for (std::size_t i = 0; i < signal.size(); ++i) a[i] = cd(signal[i], 0.0);
  for (std::size_t i = 0; i < kernel.size(); ++i) b[i] = cd(kernel[i], 0.0);
  fft_pow2(a, false);
  fft_pow2(b, false);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  fft_pow2(a, true);
  std::vector<double> out(full_len);
  for (std::size_t i = 0; i < full_len; ++i) out[i] = a[i].real();
  if (mode == ConvolveMode::TruncateToSignal) out.resize(signal.size());
  return out;
}

Waveform resample(const Waveform& w, int target_rate) {
  w.validate();
  if (target_rate <= 0)
    fail(ErrorKind::InvalidArgument, "resample target rate must be positive");
  if (target_rate == w.sample_rate) return w;

  const int src = w.sample_rate;
  const int dst = target_rate;
  constexpr int kHalfWidth = 32;  // 64 taps around each output sample
  constexpr double kBeta = 8.6;
  const double cutoff = 0.45 * double(std::min(src, dst)) / double(src);  // cycles per input sample
  const double i0_beta = kaiser_i0(kBeta);
  const std::size_t n_in = w.num_frames();
  const std::size_t n_out =
      std::size_t((__uint128_t(n_in) * std::uint64_t(dst) + src - 1) / src);

  const auto weight = [&](double d) {
    const double t = d / double(kHalfWidth);
    if (t <= -1.0 || t >= 1.0) return 0.0;
    const double window = kaiser_i0(kBeta * std::sqrt(1.0 - t * t)) / i0_beta;
    const double u = 2.0 * cutoff * d;
    const double sinc = (std::abs(u) < 1e-12) ? 1.0 : std::sin(kPi * u) / (kPi * u);
    return 2.0 * cutoff * sinc * window;
  };

  Waveform out;
  out.sample_rate = dst;
  out.channels.resize(w.num_channels());
  for (auto& ch : out.channels) ch.resize(n_out);

  for (std::size_t n = 0; n < n_out; ++n) {
    const std::uint64_t pos_num = std::uint64_t(n) * std::uint64_t(src);
    const std::int64_t base = std::int64_t(pos_num / std::uint64_t(dst));
    const double frac = double(pos_num % std::uint64_t(dst)) / double(dst);
    double wsum = 0.0;
    double acc[16];  // enough for typical channel counts; fall back below otherwise
    const std::size_t nch = w.num_channels();
    std::vector<double> acc_dyn;
    double* accp = acc;
    if (nch > 16) {
      acc_dyn.assign(nch, 0.0);
      accp = acc_dyn.data();
    } else {
      std::fill(acc, acc + nch, 0.0);
    }
    for (std::int64_t k = base - kHalfWidth + 1; k <= base + kHalfWidth; ++k) {
      const double d = (double(base) + frac) - double(k);
      const double h = weight(d);
      wsum += h;
      if (k < 0 || std::size_t(k) >= n_in || h == 0.0) continue;
      for (std::size_t c = 0; c < nch; ++c) accp[c] += w.channels[c][std::size_t(k)] * h;
    }
    for (std::size_t c = 0; c < nch; ++c) out.channels[c][n] = accp[c] / wsum;
  }
  return out;
}

}  // namespace phonoscope
