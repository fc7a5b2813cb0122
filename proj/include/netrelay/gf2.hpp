#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace netrelay {

// Fixed-length bit sequence packed into 64-bit words, LSB-first within each
// word. The logical bit order is the only observable order; unused tail bits
// are kept zero so word-level comparisons and popcounts are exact.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t length)
      : length_(length), words_((length + 63) / 64, 0) {}

  // Parses "1011"-style strings; anything but '0'/'1' is rejected.
  static BitVector from_string(std::string_view bits);

  std::size_t size() const { return length_; }
  bool empty() const { return length_ == 0; }

  bool get(std::size_t i) const;
  void set(std::size_t i, bool value);
  void flip(std::size_t i);

  std::size_t popcount() const;
  bool all_zero() const { return popcount() == 0; }

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) {
    a ^= b;
    return a;
  }
  bool operator==(const BitVector&) const = default;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  std::string to_string() const;

 private:
  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

// Sparse binary matrix held as sorted column lists per row. Duplicate
// insertions are rejected rather than XOR-cancelled; silent cancellation
// hides construction bugs.
class SparseGf2Matrix {
 public:
  SparseGf2Matrix() = default;
  SparseGf2Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), row_cols_(rows) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return nnz_; }

  void insert(std::size_t r, std::size_t c);
  bool contains(std::size_t r, std::size_t c) const;

  const std::vector<std::uint32_t>& row(std::size_t r) const {
    return row_cols_[r];
  }

  std::vector<std::vector<std::uint32_t>> column_supports() const;
  std::vector<std::size_t> row_weights() const;
  std::vector<std::size_t> column_weights() const;

  bool operator==(const SparseGf2Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<std::uint32_t>> row_cols_;
  std::size_t nnz_ = 0;
};

// result[r] = parity of v over row r's support.
BitVector mat_vec_mul(const SparseGf2Matrix& m, const BitVector& v);

// Entrywise XOR of two equal-shape matrices.
SparseGf2Matrix symmetric_difference(const SparseGf2Matrix& a,
                                     const SparseGf2Matrix& b);

struct GaussJordanResult {
  SparseGf2Matrix reduced;  // reduced row-echelon form, zero rows kept
  std::size_t rank = 0;
  std::vector<std::uint32_t> pivot_cols;
};

GaussJordanResult gauss_jordan(const SparseGf2Matrix& m);

std::size_t rank_2(const SparseGf2Matrix& m);

struct GeneratorResult {
  SparseGf2Matrix generator;  // k x n, rows independent, G H^T = 0
  // Codeword position of message bit j. Encoding places message bits at
  // these columns and solves the pivot columns from the reduced rows, so
  // generated words satisfy the original H with no column permutation
  // applied to the transmitted order.
  std::vector<std::uint32_t> message_cols;
  std::vector<std::uint32_t> pivot_cols;
};

// Derives a generator for the null space of H. Throws DegenerateCodeError
// when H has full column rank (k = 0).
GeneratorResult derive_generator(const SparseGf2Matrix& h);

}  // namespace netrelay
