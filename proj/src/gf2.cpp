#include "netrelay/gf2.hpp"

#include <algorithm>
#include <stdexcept>

#include "netrelay/errors.hpp"
#include "netrelay/kernels.hpp"

namespace netrelay {

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      v.set(i, true);
    else if (bits[i] != '0')
      throw ParameterError("bit string may contain only '0' and '1'");
  }
  return v;
}

bool BitVector::get(std::size_t i) const {
  if (i >= length_) throw std::out_of_range("BitVector index out of range");
  return (words_[i >> 6] >> (i & 63)) & 1ULL;
}

void BitVector::set(std::size_t i, bool value) {
  if (i >= length_) throw std::out_of_range("BitVector index out of range");
  std::uint64_t mask = 1ULL << (i & 63);
  if (value)
    words_[i >> 6] |= mask;
  else
    words_[i >> 6] &= ~mask;
}

void BitVector::flip(std::size_t i) {
  if (i >= length_) throw std::out_of_range("BitVector index out of range");
  words_[i >> 6] ^= 1ULL << (i & 63);
}

std::size_t BitVector::popcount() const {
  return kernels::active().popcount_words(words_.data(), words_.size());
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (length_ != other.length_)
    throw DimensionError("xor requires equal bit-vector lengths");
  kernels::active().xor_words(words_.data(), other.words_.data(),
                              words_.data(), words_.size());
  return *this;
}

std::string BitVector::to_string() const {
  std::string s(length_, '0');
  for (std::size_t i = 0; i < length_; ++i)
    if ((words_[i >> 6] >> (i & 63)) & 1ULL) s[i] = '1';
  return s;
}

void SparseGf2Matrix::insert(std::size_t r, std::size_t c) {
  if (r >= rows_ || c >= cols_)
    throw DimensionError("matrix entry out of bounds");
  auto& row = row_cols_[r];
  auto it = std::lower_bound(row.begin(), row.end(), static_cast<std::uint32_t>(c));
  if (it != row.end() && *it == c)
    throw DuplicateEntryError("duplicate matrix entry");
  row.insert(it, static_cast<std::uint32_t>(c));
  ++nnz_;
}

bool SparseGf2Matrix::contains(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) return false;
  const auto& row = row_cols_[r];
  return std::binary_search(row.begin(), row.end(),
                            static_cast<std::uint32_t>(c));
}

std::vector<std::vector<std::uint32_t>> SparseGf2Matrix::column_supports()
    const {
  std::vector<std::vector<std::uint32_t>> cols(cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::uint32_t c : row_cols_[r])
      cols[c].push_back(static_cast<std::uint32_t>(r));
  return cols;  // row-major scan keeps each column list sorted
}

std::vector<std::size_t> SparseGf2Matrix::row_weights() const {
  std::vector<std::size_t> w(rows_);
  for (std::size_t r = 0; r < rows_; ++r) w[r] = row_cols_[r].size();
  return w;
}

std::vector<std::size_t> SparseGf2Matrix::column_weights() const {
  std::vector<std::size_t> w(cols_, 0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::uint32_t c : row_cols_[r]) ++w[c];
  return w;
}

BitVector mat_vec_mul(const SparseGf2Matrix& m, const BitVector& v) {
  if (m.cols() != v.size())
    throw DimensionError("matrix-vector dimension mismatch");
  BitVector out(m.rows());
  auto words = v.words();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    unsigned parity = 0;
    for (std::uint32_t c : m.row(r))
      parity ^= static_cast<unsigned>((words[c >> 6] >> (c & 63)) & 1ULL);
    if (parity) out.set(r, true);
  }
  return out;
}

SparseGf2Matrix symmetric_difference(const SparseGf2Matrix& a,
                                     const SparseGf2Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("symmetric_difference requires equal shapes");
  SparseGf2Matrix out(a.rows(), a.cols());
  std::vector<std::uint32_t> merged;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    merged.clear();
    std::set_symmetric_difference(a.row(r).begin(), a.row(r).end(),
                                  b.row(r).begin(), b.row(r).end(),
                                  std::back_inserter(merged));
    for (std::uint32_t c : merged) out.insert(r, c);
  }
  return out;
}

namespace {

std::vector<BitVector> to_packed_rows(const SparseGf2Matrix& m) {
  std::vector<BitVector> rows(m.rows(), BitVector(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::uint32_t c : m.row(r)) rows[r].set(c, true);
  return rows;
}

SparseGf2Matrix from_packed_rows(const std::vector<BitVector>& rows,
                                 std::size_t cols) {
  SparseGf2Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (rows[r].get(c)) m.insert(r, c);
  return m;
}

}  // namespace

GaussJordanResult gauss_jordan(const SparseGf2Matrix& m) {
  auto rows = to_packed_rows(m);
  const std::size_t nrows = m.rows(), ncols = m.cols();
  GaussJordanResult result;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < ncols && rank < nrows; ++col) {
    std::size_t pivot = rank;
    while (pivot < nrows && !rows[pivot].get(col)) ++pivot;
    if (pivot == nrows) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < nrows; ++r)
      if (r != rank && rows[r].get(col)) rows[r] ^= rows[rank];
    result.pivot_cols.push_back(static_cast<std::uint32_t>(col));
    ++rank;
  }
  result.rank = rank;
  result.reduced = from_packed_rows(rows, ncols);
  return result;
}

std::size_t rank_2(const SparseGf2Matrix& m) { return gauss_jordan(m).rank; }

GeneratorResult derive_generator(const SparseGf2Matrix& h) {
  auto gj = gauss_jordan(h);
  const std::size_t n = h.cols();
  if (gj.rank >= n)
    throw DegenerateCodeError("parity-check matrix has full column rank");

  GeneratorResult result;
  result.pivot_cols = gj.pivot_cols;
  std::vector<bool> is_pivot(n, false);
  for (std::uint32_t c : gj.pivot_cols) is_pivot[c] = true;
  for (std::uint32_t c = 0; c < n; ++c)
    if (!is_pivot[c]) result.message_cols.push_back(c);

  const std::size_t k = result.message_cols.size();
  SparseGf2Matrix g(k, n);
  for (std::size_t j = 0; j < k; ++j) {
    std::uint32_t free_col = result.message_cols[j];
    g.insert(j, free_col);
    // Pivot bit i is the parity of the message bits appearing in reduced
    // row i, so codewords satisfy every row of the original H.
    for (std::size_t i = 0; i < gj.rank; ++i)
      if (gj.reduced.contains(i, free_col)) g.insert(j, gj.pivot_cols[i]);
  }
  result.generator = std::move(g);
  return result;
}

}  // namespace netrelay
