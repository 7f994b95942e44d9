#include "fsc/gf2.hpp"

#include <utility>

namespace fsc {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_(rows * ((cols + 63) / 64), 0) {}

std::size_t gf2_rank(BitMatrix m) {
  std::size_t rank = 0;
  const std::size_t words = m.words();
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    const std::size_t w = col >> 6;
    const std::uint64_t bit = std::uint64_t{1} << (col & 63);
    std::size_t pivot = rank;
    while (pivot < m.rows() && !(m.row(pivot)[w] & bit)) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != rank) {
      std::uint64_t* a = m.row(pivot);
      std::uint64_t* b = m.row(rank);
      for (std::size_t k = w; k < words; ++k) std::swap(a[k], b[k]);
    }
    const std::uint64_t* p = m.row(rank);
    for (std::size_t r = rank + 1; r < m.rows(); ++r) {
      std::uint64_t* target = m.row(r);
      if (!(target[w] & bit)) continue;
      for (std::size_t k = w; k < words; ++k) target[k] ^= p[k];
    }
    ++rank;
  }
  return rank;
}

std::size_t gf2_rank(const std::vector<std::vector<int>>& rows, std::size_t cols) {
  BitMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c : rows[r]) m.flip(r, static_cast<std::size_t>(c));
  }
  return gf2_rank(std::move(m));
}

}  // namespace fsc
