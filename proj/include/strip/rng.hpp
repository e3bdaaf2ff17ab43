#pragma once

#include <cstdint>
#include <random>

namespace strip {

// Reproducible random stream keyed by (seed, stream_id).  Draws depend only
// on the key and the number of previous draws, never on thread scheduling.
class RngStream {
 public:
  using result_type = std::mt19937_64::result_type;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform on the open interval (0,1).
  double uniform();
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Deterministic mixing of a master seed with a label, used to give every
// experiment component its own family of streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label);

}  // namespace strip
