#include "stars/rng.hpp"

#include <cmath>

#include "stars/errors.hpp"

namespace stars {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id, Lane lane) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id & 0xffffffffu),
                    static_cast<std::uint32_t>(stream_id >> 32),
                    static_cast<std::uint32_t>(lane)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id, Lane lane)
    : seed_(seed), stream_id_(stream_id), lane_(lane), engine_(make_engine(seed, stream_id, lane)) {}

double RngStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::standard_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double v1 = 0.0;
  double v2 = 0.0;
  double s = 0.0;
  do {
    v1 = 2.0 * uniform01() - 1.0;
    v2 = 2.0 * uniform01() - 1.0;
    s = v1 * v1 + v2 * v2;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v2 * scale;
  has_spare_ = true;
  return v1 * scale;
}

Vector gaussian_vector(RngStream& rng, int n) {
  if (n < 1) throw InvalidArgument("gaussian_vector: dimension must be >= 1");
  Vector u(n);
  for (int i = 0; i < n; ++i) u[i] = rng.standard_normal();
  return u;
}

}  // namespace stars
