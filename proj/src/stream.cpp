#include "kinmc/stream.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kinmc {

namespace philox {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                   const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> c = counter;
  std::uint32_t k0 = key[0];
  std::uint32_t k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return c;
}

}  // namespace philox

namespace {

constexpr std::uint64_t kFieldLimit = 1ull << 32;

inline void check_field(std::uint64_t v, const char* name) {
  if (v >= kFieldLimit) {
    throw std::invalid_argument(std::string("stream field out of range: ") + name);
  }
}

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t particle_id,
               std::uint64_t step_index)
    : Stream(StreamKey{seed, particle_id, step_index}) {}

Stream::Stream(const StreamKey& key) : key_(key) {
  check_field(key_.particle_id, "particle_id");
  check_field(key_.step_index, "step_index");
}

std::uint64_t Stream::bits() {
  check_field(ctr_, "draw_counter");
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(ctr_),
      static_cast<std::uint32_t>(key_.particle_id),
      static_cast<std::uint32_t>(key_.step_index),
      0u,
  };
  const std::array<std::uint32_t, 2> k = {
      static_cast<std::uint32_t>(key_.seed),
      static_cast<std::uint32_t>(key_.seed >> 32),
  };
  const auto out = philox::block(ctr, k);
  ++ctr_;
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

double Stream::uniform() {
  // 53 significant bits -> [0, 1) on the 2^-53 grid.
  return static_cast<double>(bits() >> 11) * 0x1.0p-53;
}

double Stream::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  // 1 - u1 lies in (0, 1], keeping the log argument positive.
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

void Stream::skip_to(std::uint64_t slot) {
  if (slot < ctr_) {
    throw std::logic_error("Stream::skip_to would move the cursor backwards");
  }
  ctr_ = slot;
}

Stream derive_stream(std::uint64_t seed, std::uint64_t particle_id,
                     std::uint64_t step_index) {
  return Stream(seed, particle_id, step_index);
}

int sample_bernoulli(Stream& s, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("sample_bernoulli: p must lie in [0,1]");
  }
  return s.uniform() < p ? 1 : 0;
}

PartnerDraw sample_partner(Stream& s, std::int64_t n) {
  if (n < 1) {
    throw std::invalid_argument("sample_partner: n must be >= 1");
  }
  const double alpha = s.uniform() * static_cast<double>(n);
  const auto idx = static_cast<std::int64_t>(std::floor(alpha)) + 1;
  return {alpha, idx};
}

Eigen::Vector3d sample_unit_sphere(Stream& s) {
  const double z = 2.0 * s.uniform() - 1.0;
  const double phi = 2.0 * std::numbers::pi * s.uniform();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

Eigen::VectorXd sample_direction(Stream& s, int dim) {
  if (dim < 1) {
    throw std::invalid_argument("sample_direction: dim must be >= 1");
  }
  Eigen::VectorXd e(dim);
  for (int k = 0; k < dim; ++k) {
    e[k] = s.normal();
  }
  const double norm = e.norm();
  if (norm == 0.0) {  // probability zero; keep the draw budget fixed anyway
    e.setZero();
    e[0] = 1.0;
    return e;
  }
  return e / norm;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over the combined words.
  std::uint64_t x = a + 0x9E3779B97F4A7C15ull * (b + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

}  // namespace kinmc
