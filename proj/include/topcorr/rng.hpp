#pragma once

#include <array>
#include <cstdint>

namespace topcorr {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
class Philox4x32
{
public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr const char* name = "philox4x32-10";

  static constexpr Counter block(Counter ctr, Key key)
  {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }
};

/// Stream of uniform doubles addressed by (seed, index, tag).
///
/// Draw j of the stream uses counter (j, index_lo, index_hi, tag) under key = seed, so
/// every (index, tag) pair owns an independent sequence and work can be split freely.
class RandomStream
{
public:
  RandomStream(std::uint64_t seed, std::uint64_t index, std::uint32_t tag = 0)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      index_lo_(static_cast<std::uint32_t>(index)), index_hi_(static_cast<std::uint32_t>(index >> 32)), tag_(tag)
  {
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform()
  {
    if (pos_ == 2) {
      buf_ = Philox4x32::block({draw_++, index_lo_, index_hi_, tag_}, key_);
      pos_ = 0;
    }
    const std::uint64_t bits = (std::uint64_t{buf_[2 * pos_]} << 32) | buf_[2 * pos_ + 1];
    ++pos_;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

private:
  Philox4x32::Key key_;
  std::uint32_t index_lo_;
  std::uint32_t index_hi_;
  std::uint32_t tag_;
  std::uint32_t draw_ = 0;
  Philox4x32::Counter buf_{};
  int pos_ = 2;
};

} // namespace topcorr
