#include "sumlab/bitset.hpp"

#include <algorithm>
#include <stdexcept>

namespace sumlab {

void Bitset::trim() {
  const std::size_t tail = nbits_ & 63;
  if (tail != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << tail) - 1;
}

void Bitset::set_all() {
  std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
  trim();
}

void Bitset::clear() { std::fill(words_.begin(), words_.end(), 0); }

std::size_t Bitset::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool Bitset::none() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool Bitset::intersects(const Bitset& other) const {
  const std::size_t n = std::min(words_.size(), other.words_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (words_[i] & other.words_[i]) return true;
  return false;
}

std::size_t Bitset::find_next(std::size_t pos) const {
  if (pos >= nbits_) return npos;
  std::size_t w = pos >> 6;
  std::uint64_t cur = words_[w] & (~std::uint64_t{0} << (pos & 63));
  while (true) {
    if (cur != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(cur));
    if (++w == words_.size()) return npos;
    cur = words_[w];
  }
}

std::size_t Bitset::find_next_clear(std::size_t pos) const {
  if (pos >= nbits_) return npos;
  std::size_t w = pos >> 6;
  std::uint64_t cur = ~words_[w] & (~std::uint64_t{0} << (pos & 63));
  while (true) {
    if (cur != 0) {
      const std::size_t i = w * 64 + static_cast<std::size_t>(std::countr_zero(cur));
      return i < nbits_ ? i : npos;
    }
    if (++w == words_.size()) return npos;
    cur = ~words_[w];
  }
}

std::size_t Bitset::highest() const {
  for (std::size_t w = words_.size(); w-- > 0;)
    if (words_[w] != 0) return w * 64 + 63 - static_cast<std::size_t>(std::countl_zero(words_[w]));
  return npos;
}

void Bitset::shift_or(std::size_t k, std::size_t top_bit) {
  if (k >= nbits_) return;
  if (k == 0) return;
  const std::size_t ws = k >> 6;
  const unsigned bs = static_cast<unsigned>(k & 63);
  std::size_t top = words_.size() - 1;
  if (top_bit != npos && top_bit < nbits_) top = top_bit >> 6;
  // Descending so that every source word is read before it is modified.
  if (bs == 0) {
    for (std::size_t i = top; i >= ws; --i) {
      words_[i] |= words_[i - ws];
      if (i == ws) break;
    }
  } else {
    for (std::size_t i = top; i > ws; --i)
      words_[i] |= (words_[i - ws] << bs) | (words_[i - ws - 1] >> (64 - bs));
    if (ws <= top) words_[ws] |= words_[0] << bs;
  }
  trim();
}

void Bitset::or_shifted(const Bitset& src, std::size_t k) {
  if (k >= nbits_) return;
  const std::size_t ws = k >> 6;
  const unsigned bs = static_cast<unsigned>(k & 63);
  const std::size_t n = words_.size();
  const std::size_t sn = src.words_.size();
  for (std::size_t i = ws; i < n; ++i) {
    const std::size_t j = i - ws;
    std::uint64_t v = j < sn ? src.words_[j] << bs : 0;
    if (bs != 0 && j >= 1 && j - 1 < sn) v |= src.words_[j - 1] >> (64 - bs);
    words_[i] |= v;
  }
  trim();
}

Bitset Bitset::shifted_right(std::size_t k) const {
  Bitset out(nbits_);
  if (k >= nbits_) return out;
  const std::size_t ws = k >> 6;
  const unsigned bs = static_cast<unsigned>(k & 63);
  const std::size_t n = words_.size();
  for (std::size_t i = 0; i + ws < n; ++i) {
    std::uint64_t v = words_[i + ws] >> bs;
    if (bs != 0 && i + ws + 1 < n) v |= words_[i + ws + 1] << (64 - bs);
    out.words_[i] = v;
  }
  return out;
}

Bitset Bitset::rotated(std::size_t k) const {
  if (nbits_ == 0) return *this;
  k %= nbits_;
  if (k == 0) return *this;
  Bitset out(nbits_);
  out.or_shifted(*this, k);
  out |= shifted_right(nbits_ - k);
  return out;
}

Bitset& Bitset::operator|=(const Bitset& other) {
  const std::size_t n = std::min(words_.size(), other.words_.size());
  for (std::size_t i = 0; i < n; ++i) words_[i] |= other.words_[i];
  trim();
  return *this;
}

Bitset& Bitset::operator&=(const Bitset& other) {
  for (std::size_t i = 0; i < words_.size(); ++i)
    words_[i] &= i < other.words_.size() ? other.words_[i] : 0;
  return *this;
}

std::vector<std::size_t> Bitset::to_indices() const {
  std::vector<std::size_t> out;
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

std::string Bitset::to_hex() const {
  static const char* digits = "0123456789abcdef";
  const std::size_t nbytes = (nbits_ + 7) / 8;
  std::string out;
  out.reserve(nbytes * 2);
  for (std::size_t b = 0; b < nbytes; ++b) {
    const auto byte = static_cast<unsigned>((words_[b / 8] >> ((b % 8) * 8)) & 0xff);
    out.push_back(digits[byte >> 4]);
    out.push_back(digits[byte & 15]);
  }
  return out;
}

Bitset Bitset::from_hex(const std::string& hex, std::size_t nbits) {
  if (hex.size() != 2 * ((nbits + 7) / 8)) throw std::invalid_argument("hex length does not match bit count");
  auto nibble = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    throw std::invalid_argument("bad hex digit");
  };
  Bitset out(nbits);
  for (std::size_t b = 0; b * 2 < hex.size(); ++b) {
    const std::uint64_t byte = (nibble(hex[2 * b]) << 4) | nibble(hex[2 * b + 1]);
    out.words_[b / 8] |= byte << ((b % 8) * 8);
  }
  const std::size_t before = out.count();
  out.trim();
  if (out.count() != before) throw std::invalid_argument("hex sets bits beyond the declared length");
  return out;
}

}  // namespace sumlab
