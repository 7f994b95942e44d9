#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fsc {

// Dense bit-packed binary matrix, one row per std::vector of 64-bit words.
class BitMatrix {
 public:
  BitMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool get(std::size_t r, std::size_t c) const noexcept { return (row(r)[c >> 6] >> (c & 63)) & 1U; }
  void flip(std::size_t r, std::size_t c) noexcept { row(r)[c >> 6] ^= std::uint64_t{1} << (c & 63); }
  void set(std::size_t r, std::size_t c) noexcept { row(r)[c >> 6] |= std::uint64_t{1} << (c & 63); }

  std::uint64_t* row(std::size_t r) noexcept { return data_.data() + r * words_; }
  const std::uint64_t* row(std::size_t r) const noexcept { return data_.data() + r * words_; }
  std::size_t words() const noexcept { return words_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t words_;
  std::vector<std::uint64_t> data_;
};

// Rank over GF(2) by Gaussian elimination; consumes its argument.
std::size_t gf2_rank(BitMatrix m);

// Rank of a sparse matrix given as rows of column indices.
std::size_t gf2_rank(const std::vector<std::vector<int>>& rows, std::size_t cols);

}  // namespace fsc
