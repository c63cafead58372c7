#include "phonoscope/rng.hpp"

namespace phonoscope {

namespace {
inline std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return mix(key_ + (counter + 1) * 0x9E3779B97F4A7C15ull);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return double(bits(counter) >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::below(std::uint64_t counter, std::uint64_t bound) const {
  // multiply-shift mapping; bias is negligible for the bounds used here
  return std::uint64_t((__uint128_t(bits(counter)) * bound) >> 64);
}

std::uint64_t CounterRng::derive_key(std::uint64_t stream) const {
  return mix(key_ ^ (0xA0761D6478BD642Full + stream * 0xE7037ED1A0B428DBull));
}

}  // namespace phonoscope
