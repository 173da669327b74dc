#pragma once

#include <cstdint>

#include "pdd/types.hpp"

namespace pdd {

/// Stream derivation phases. All randomness in a run flows from one master
/// seed through (phase, node, batch, trajectory) substreams, so results do
/// not depend on thread count or execution order.
namespace rng_phase {
constexpr std::uint64_t kFit = 1;        // fitting clouds (both passes reuse it)
constexpr std::uint64_t kKappa = 2;
constexpr std::uint64_t kNsr = 3;
constexpr std::uint64_t kOmegaDraws = 4; // stochastic-BC draws for w-tilde
constexpr std::uint64_t kSolveBase = 16; // + level index
constexpr std::uint64_t kTest = 9000;
}  // namespace rng_phase

std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256++ with SplitMix64-derived substreams. Normal deviates come in
/// Box-Muller pairs, matching the 2-D Wiener increments of the integrator.
class Rng {
 public:
  Rng() : Rng(0x853c49e6748fea9bULL, 0, 0, 0, 0) {}
  Rng(std::uint64_t master_seed, std::uint64_t phase, std::uint64_t node, std::uint64_t batch,
      std::uint64_t trajectory);

  std::uint64_t next_u64();
  /// Uniform on (0, 1]; never returns 0, so log() is safe.
  double next_uniform();
  Vec2 next_normal_pair();
  double next_normal() { return next_normal_pair()[0]; }

 private:
  std::uint64_t s_[4];
};

}  // namespace pdd
