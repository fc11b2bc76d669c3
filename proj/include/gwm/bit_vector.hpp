#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gwm {

/// Fixed-length bit string. Ordering is lexicographic with bit 0 first and 0 < 1,
/// i.e. the order of the equivalent '0'/'1' strings.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  static BitVector from_string(std::string_view s) {
    BitVector b(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1')
        b.set(i);
      else if (s[i] != '0')
        throw std::invalid_argument("bit string may only contain '0' and '1'");
    }
    return b;
  }

  std::size_t size() const { return size_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i, bool value = true) {
    const auto mask = std::uint64_t{1} << (i % 64);
    if (value)
      words_[i / 64] |= mask;
    else
      words_[i / 64] &= ~mask;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
      if (test(i)) s[i] = '1';
    return s;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

  friend std::strong_ordering operator<=>(const BitVector& a, const BitVector& b) {
    const std::size_t common = std::min(a.words_.size(), b.words_.size());
    for (std::size_t w = 0; w < common; ++w) {
      const auto diff = a.words_[w] ^ b.words_[w];
      if (diff != 0) {
        const auto bit = std::countr_zero(diff);
        return ((a.words_[w] >> bit) & 1U) ? std::strong_ordering::greater
                                           : std::strong_ordering::less;
      }
    }
    return a.size_ <=> b.size_;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Number of differing positions; sizes must match.
inline std::size_t hamming(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("hamming: length mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  std::size_t d = 0;
  for (std::size_t w = 0; w < a.words().size(); ++w)
    d += static_cast<std::size_t>(std::popcount(a.words()[w] ^ b.words()[w]));
  return d;
}

struct BitVectorHash {
  std::size_t operator()(const BitVector& b) const {
    std::size_t h = b.size();
    for (auto w : b.words()) h = h * 0x9e3779b97f4a7c15ULL ^ std::hash<std::uint64_t>{}(w);
    return h;
  }
};

}  // namespace gwm
