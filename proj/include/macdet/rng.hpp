#pragma once

#include <cstdint>
#include <random>

namespace macdet {

// Independent random stream keyed by (seed, stream_id).
//
// The engine is std::mt19937_64 seeded through std::seed_seq with the four
// 32-bit halves of the key; both algorithms are fully specified by the
// standard, so a key reproduces the same draws on any conforming library.
// Uniforms take the top 53 bits of one engine output. Gaussians use the
// Box-Muller transform on two uniforms, returning the cosine branch first and
// caching the sine branch for the next call.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  double uniform();       // [0, 1)
  double uniform_pos();   // (0, 1]
  double gaussian();      // N(0, 1)
  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

RngStream rng_stream(std::uint64_t seed, std::uint64_t stream_id);

}  // namespace macdet
