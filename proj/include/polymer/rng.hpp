#pragma once
#include <array>
#include <cstdint>

namespace polymer {

// Philox4x32-10 counter-based generator. The 64-bit seed is the key; the
// 64-bit stream id fills the upper half of the 128-bit counter, so every
// (seed, stream_id) pair owns 2^64 blocks of output.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on the open interval (0,1) with 53 random bits.
  double uniform();
  // Standard normal (Marsaglia polar; second variate cached).
  double normal();

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stream id layout used by experiments: tag in the top 24 bits, replica below.
inline std::uint64_t stream_id_for(std::uint64_t tag, std::uint64_t replica) {
  return (tag << 40) ^ replica;
}

// SplitMix64 finalizer, used to derive retry seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace polymer
