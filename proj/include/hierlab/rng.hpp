#pragma once

#include <complex>
#include <cstdint>

namespace hierlab {

// Splittable generator. Stream (seed, stream_id) starts from
//   state = splitmix(seed ^ splitmix(stream_id + 0x9E3779B97F4A7C15))
// and each draw advances state by 0x9E3779B97F4A7C15 and returns splitmix(state).
// uniform() uses the top 53 bits; normal() is Box-Muller without caching.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::complex<double> complex_normal();
  Rng split(std::uint64_t stream_id) const;

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace hierlab
