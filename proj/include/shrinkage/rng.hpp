#pragma once

#include <cstdint>

namespace shrinkage {

// Counter-based pseudo-random stream.  Draw i of a stream is a strong 64-bit
// hash of (key, i) where the key itself hashes (seed, stream_id), so a given
// (seed, stream_id) pair always reproduces the same sequence bit for bit and
// distinct stream ids give statistically independent streams.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  // Key actually driving the output sequence; enough to reproduce the stream.
  std::uint64_t key() const { return key_; }

  // Derives an independent child stream (replicates, MC chunks, per-method
  // substreams).  Deterministic in (parent key, index).
  RngStream split(std::uint64_t index) const;

  std::uint64_t next_u64();

  double uniform();                 // open interval (0,1)
  double normal();                  // standard normal, Box-Muller
  double exponential(double rate);  // mean 1/rate
  double gamma(double shape, double rate);
  double log_gamma_draw(double shape);  // log of a gamma(shape,1) draw; safe for tiny shape
  double chi_square(double dof);

 private:
  RngStream(std::uint64_t key, std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t key_;
  std::uint64_t counter_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

}  // namespace shrinkage
