#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace indepmix {

// Lexicographic k-combinations of {0, ..., n-1} with positional random access.
// seek(pos) jumps to the pos-th combination via binomial unranking, so a range
// [start, start + count) can be walked independently of the rest; that is what
// makes contiguous parallel chunking deterministic.
class Combinations {
 public:
  Combinations(std::uint64_t n, std::uint64_t k) : n_(n), k_(k) {
    if (k == 0 || k > n) throw std::invalid_argument("combinations: need 0 < k <= n");
    if (n > 0xffffffffull) throw std::invalid_argument("combinations: n too large");
    total_ = count(n, k);
    cur_.resize(k);
    seek(0);
  }

  // C(n, k); throws std::overflow_error when the result exceeds 64 bits.
  static std::uint64_t count(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
      // r * (n - k + i) is always divisible by i here.
      unsigned __int128 t = static_cast<unsigned __int128>(r) * (n - k + i);
      t /= i;
      if (t > ~std::uint64_t{0}) throw std::overflow_error("combinations: count overflows");
      r = static_cast<std::uint64_t>(t);
    }
    return r;
  }

  std::uint64_t size() const { return total_; }

  // Jump to the pos-th combination (0-based, lexicographic order).
  void seek(std::uint64_t pos) {
    if (pos >= total_) throw std::out_of_range("combinations: seek past end");
    std::uint64_t v = 0;
    for (std::uint64_t i = 0; i + 1 < k_; ++i) {
      for (;;) {
        std::uint64_t block = count(n_ - v - 1, k_ - i - 1);
        if (pos < block) break;
        pos -= block;
        ++v;
      }
      cur_[i] = static_cast<std::uint32_t>(v);
      ++v;
    }
    cur_[k_ - 1] = static_cast<std::uint32_t>(v + pos);
  }

  // Advance to the successor; false (and unchanged state) at the last one.
  bool next() {
    std::uint64_t i = k_;
    while (i-- > 0) {
      if (cur_[i] < n_ - k_ + i) {
        ++cur_[i];
        for (std::uint64_t j = i + 1; j < k_; ++j) cur_[j] = cur_[j - 1] + 1;
        return true;
      }
    }
    return false;
  }

  std::span<const std::uint32_t> current() const { return cur_; }

 private:
  std::uint64_t n_, k_, total_;
  std::vector<std::uint32_t> cur_;
};

}  // namespace indepmix
