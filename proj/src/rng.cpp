#include "dgmv/rng.hpp"

namespace dgmv::rng {

namespace {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

inline void philox_round(std::array<std::uint32_t, 4>& ctr, const std::uint32_t key[2]) {
  std::uint32_t lo0, hi0, lo1, hi1;
  mul_hi_lo(kPhiloxM4x32A, ctr[0], lo0, hi0);
  mul_hi_lo(kPhiloxM4x32B, ctr[2], lo1, hi1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

inline double to_unit_open(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  // 53 significant bits, offset by half an ulp so 0 and 1 are unreachable
  return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint64_t counter) {
  std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(counter),
                                      static_cast<std::uint32_t>(counter >> 32), 0, 0};
  std::uint32_t k[2] = {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  for (int round = 0; round < 10; ++round) {
    if (round != 0) {
      k[0] += kPhiloxW32A;
      k[1] += kPhiloxW32B;
    }
    philox_round(ctr, k);
  }
  return ctr;
}

double uniform_at(std::uint64_t seed, std::uint64_t index) {
  // two 64-bit uniforms per block; lane = low bit of the index
  const auto block = philox4x32(seed, index >> 1);
  const unsigned lane = static_cast<unsigned>(index & 1);
  return to_unit_open(block[2 * lane], block[2 * lane + 1]);
}

double normal_at(std::uint64_t seed, std::uint64_t index) {
  return inverse_norm_cdf(uniform_at(seed, index));
}

double NormalStream::at(std::uint64_t index) {
  const std::uint64_t block_index = index >> 1;
  if (block_index != cached_block_) {
    block_ = philox4x32(seed_, block_index);
    cached_block_ = block_index;
  }
  const unsigned lane = static_cast<unsigned>(index & 1);
  return inverse_norm_cdf(to_unit_open(block_[2 * lane], block_[2 * lane + 1]));
}

}  // namespace dgmv::rng
