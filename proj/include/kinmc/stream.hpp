// Counter-based random streams keyed by (seed, particle, step).
//
// Every draw is a pure function of the key tuple and a monotone draw counter,
// so the value of any draw is independent of evaluation order, thread count,
// and whether other draws in the same block were consumed. Solvers pin each
// logical draw to a fixed counter slot; skipped branches leave their slots
// unused without shifting anything else.
#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Dense>

namespace kinmc {

namespace philox {

// Philox4x32-10 round function (Salmon et al. counter-based generator).
// 128-bit counter, 64-bit key, 10 rounds.
std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                   const std::array<std::uint32_t, 2>& key);

}  // namespace philox

// Identifies one stream of draws. particle_id 0 is reserved for
// ensemble-level draws (e.g. sliced-metric directions); solvers use 1..N.
// step_index kInitPhase is reserved for initial-condition sampling so that
// those draws never collide with step-0 collision draws.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t particle_id = 0;
  std::uint64_t step_index = 0;

  static constexpr std::uint64_t kInitPhase = 0xFFFFFFFFull;
};

// A value-type stream: cheap to copy, safe to hand to workers. The cursor
// counts consumed slots; skip_to() jumps forward to a fixed slot so that
// conditional draws occupy documented positions.
//
// Field widths: particle_id, step_index and the cursor must each fit in
// 32 bits (checked on construction / draw).
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t particle_id, std::uint64_t step_index);
  explicit Stream(const StreamKey& key);

  // 64 uniform random bits; consumes one slot.
  std::uint64_t bits();

  // U[0,1) with 53-bit resolution; consumes one slot.
  double uniform();

  // Standard normal via the cosine branch of Box-Muller; consumes exactly
  // two slots.
  double normal();

  // Advance the cursor to `slot` without consuming values. Requires
  // slot >= cursor().
  void skip_to(std::uint64_t slot);

  std::uint64_t cursor() const { return ctr_; }
  const StreamKey& key() const { return key_; }

 private:
  StreamKey key_;
  std::uint64_t ctr_ = 0;
};

Stream derive_stream(std::uint64_t seed, std::uint64_t particle_id,
                     std::uint64_t step_index);

// Bernoulli(p) as 0/1; consumes one slot. Throws std::invalid_argument for
// p outside [0,1]. p == 0 never fires, p == 1 always fires.
int sample_bernoulli(Stream& s, double p);

// Uniform alpha on [0, n) plus the 1-based partner index floor(alpha) + 1.
// Consumes one slot. Self-selection is the caller's concern (it is allowed
// by the solvers).
struct PartnerDraw {
  double alpha = 0;
  std::int64_t index = 0;  // 1-based
};
PartnerDraw sample_partner(Stream& s, std::int64_t n);

// Uniform direction on the unit sphere in R^3; consumes exactly two slots.
Eigen::Vector3d sample_unit_sphere(Stream& s);

// Uniform direction on the unit sphere in R^dim (dim >= 1): dim normals,
// normalized. Consumes 2*dim slots.
Eigen::VectorXd sample_direction(Stream& s, int dim);

// Deterministic 64-bit mixing for derived seeds (harness cells, references).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace kinmc
