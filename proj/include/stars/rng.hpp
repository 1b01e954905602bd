#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace stars {

using Vector = Eigen::VectorXd;

/// Independent substreams derived from the same (seed, stream_id) pair. The
/// noise of an oracle and the search directions of a solver never share state.
enum class Lane : std::uint32_t {
  Noise = 0,
  Directions = 1,
  Estimation = 2,
  EstimationDirections = 3,
};

/// Seeded random stream.
///
/// Engine: std::mt19937_64 seeded through std::seed_seq with the 32-bit words
/// {seed_lo, seed_hi, stream_lo, stream_hi, lane}. Both the engine and
/// std::seed_seq are fully specified by the standard, so a given triple gives
/// the same sequence on every conforming implementation.
///
/// Uniforms take the top 53 bits of one engine output: U = (w >> 11) * 2^-53,
/// so U lies in [0, 1). Normals use the Marsaglia polar method on
/// V = 2U - 1 pairs; the second variate of each accepted pair is cached and
/// returned by the next call.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id, Lane lane = Lane::Noise);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  Lane lane() const { return lane_; }

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();
  double standard_normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  Lane lane_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// n i.i.d. N(0, 1) components drawn in index order.
Vector gaussian_vector(RngStream& rng, int n);

}  // namespace stars
