#pragma once

#include <array>
#include <cstdint>

#include "dgmv/math.hpp"

namespace dgmv::rng {

/// One Philox4x32-10 block: 128 random bits from (key, counter).
/// Stateless, so any draw is addressable by its global index.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint64_t counter);

/// Uniform draw in the open interval (0,1) at the given global index.
double uniform_at(std::uint64_t seed, std::uint64_t index);

/// Standard normal draw at the given global index (inverse-CDF of uniform_at).
double normal_at(std::uint64_t seed, std::uint64_t index);

/// Random-access normal stream memoizing the Philox block that two
/// consecutive draws share. Cheap to construct, one per worker thread.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : seed_(seed) {}

  double at(std::uint64_t index);

 private:
  std::uint64_t seed_;
  std::uint64_t cached_block_ = ~std::uint64_t{0};
  std::array<std::uint32_t, 4> block_{};
};

}  // namespace dgmv::rng
