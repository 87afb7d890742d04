#include "shrinkage/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace shrinkage {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer (Stafford mix 13).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t derive_key(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a + kGolden) ^ mix64(b + 0x8a183895eeac1536ULL));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : key_(derive_key(seed, stream_id)), counter_(0), seed_(seed), stream_id_(stream_id) {}

RngStream::RngStream(std::uint64_t key, std::uint64_t seed, std::uint64_t stream_id)
    : key_(key), counter_(0), seed_(seed), stream_id_(stream_id) {}

RngStream RngStream::split(std::uint64_t index) const {
  return RngStream(derive_key(key_, index), seed_, stream_id_);
}

std::uint64_t RngStream::next_u64() { return mix64(key_ + (counter_++) * kGolden); }

double RngStream::uniform() {
  // 53-bit mantissa, shifted off zero so log() is always finite.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
}

double RngStream::normal() {
  double u1 = uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
  return -std::log(uniform()) / rate;
}

double RngStream::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw std::invalid_argument("gamma: parameters must be positive");
  if (shape < 1.0) {
    // Boost the shape, then scale back: G(a) = G(a+1) * U^{1/a}.
    double g = gamma(shape + 1.0, 1.0);
    double u = uniform();
    return g * std::pow(u, 1.0 / shape) / rate;
  }
  // Marsaglia-Tsang squeeze.
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = uniform();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double RngStream::log_gamma_draw(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("log_gamma_draw: shape must be positive");
  if (shape >= 1.0) return std::log(gamma(shape, 1.0));
  // log(G(a)) = log(G(a+1)) + log(U)/a avoids underflow for tiny shapes.
  return std::log(gamma(shape + 1.0, 1.0)) + std::log(uniform()) / shape;
}

double RngStream::chi_square(double dof) { return gamma(0.5 * dof, 0.5); }

}  // namespace shrinkage
