#pragma once

#include <array>
#include <cstdint>

namespace jitterpovm {

/// One Philox4x32-10 block (Salmon et al., SC'11 "Parallel random numbers:
/// as easy as 1, 2, 3"). Exposed so known-answer tests can pin the kernel.
std::array<std::uint32_t, 4> philox4x32_10(const std::array<std::uint32_t, 4>& counter,
                                           const std::array<std::uint32_t, 2>& key);

/// Counter-based random stream: key = seed, counter = (block, substream).
///
/// Streams with the same seed but different substream ids are independent,
/// so per-trial substreams make parallel and serial Monte Carlo runs produce
/// bit-identical results.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t substream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, substream_(substream) {}

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform double strictly inside (0, 1), 53 significant bits.
  double next_double();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t substream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

}  // namespace jitterpovm
