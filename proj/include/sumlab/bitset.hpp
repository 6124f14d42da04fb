#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace sumlab {

// Fixed-length bitmap over 64-bit words. Bits at or beyond size() are always zero.
class Bitset {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Bitset() = default;
  explicit Bitset(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::size_t size() const { return nbits_; }
  std::size_t word_count() const { return words_.size(); }
  const std::vector<std::uint64_t>& words() const { return words_; }

  bool test(std::size_t i) const { return i < nbits_ && ((words_[i >> 6] >> (i & 63)) & 1U); }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void set_all();
  void clear();

  std::size_t count() const;
  bool none() const;
  bool intersects(const Bitset& other) const;

  std::size_t find_next(std::size_t pos) const;
  std::size_t find_next_clear(std::size_t pos) const;
  std::size_t highest() const;

  // this |= this << k, truncated to size(). Only words up to top_bit are touched.
  void shift_or(std::size_t k, std::size_t top_bit = npos);
  // this |= src << k, truncated to size().
  void or_shifted(const Bitset& src, std::size_t k);
  // Cyclic left rotation by k over size() bits.
  Bitset rotated(std::size_t k) const;
  Bitset shifted_right(std::size_t k) const;

  Bitset& operator|=(const Bitset& other);
  Bitset& operator&=(const Bitset& other);
  bool operator==(const Bitset& other) const = default;

  std::vector<std::size_t> to_indices() const;

  // Byte k of the encoding holds bits 8k..8k+7, least significant first.
  std::string to_hex() const;
  static Bitset from_hex(const std::string& hex, std::size_t nbits);

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t cur = words_[w];
      while (cur != 0) {
        fn(w * 64 + static_cast<std::size_t>(std::countr_zero(cur)));
        cur &= cur - 1;
      }
    }
  }

 private:
  void trim();

  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace sumlab
