#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "netrelay/alist.hpp"
#include "netrelay/errors.hpp"
#include "netrelay/gf2.hpp"
#include "netrelay/rng.hpp"
#include "oracles.hpp"

using namespace netrelay;

namespace {

SparseGf2Matrix from_rows(std::size_t cols,
                          const std::vector<std::string>& rows) {
  SparseGf2Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (rows[r][c] == '1') m.insert(r, c);
  return m;
}

SparseGf2Matrix random_matrix(StreamRng& rng, std::size_t rows,
                              std::size_t cols, double density) {
  SparseGf2Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (rng.next_unit() < density) m.insert(r, c);
  return m;
}

}  // namespace

TEST_CASE("bitwise xor on packed vectors") {
  auto a = BitVector::from_string("1011");
  CHECK((a ^ BitVector::from_string("0000")).to_string() == "1011");
  CHECK((a ^ a).to_string() == "0000");
  CHECK((BitVector::from_string("1010") ^ BitVector::from_string("0110"))
            .to_string() == "1100");
  CHECK_THROWS_AS(a ^ BitVector(5), DimensionError);
}

TEST_CASE("xor is associative and commutative") {
  StreamRng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng.next_below(200);
    BitVector v[3] = {BitVector(n), BitVector(n), BitVector(n)};
    for (auto& x : v)
      for (std::size_t i = 0; i < n; ++i)
        if (rng.bernoulli(0.5)) x.set(i, true);
    CHECK((v[0] ^ v[1]) == (v[1] ^ v[0]));
    CHECK(((v[0] ^ v[1]) ^ v[2]) == (v[0] ^ (v[1] ^ v[2])));
  }
}

TEST_CASE("popcount matches a per-bit count across word boundaries") {
  StreamRng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 1 + rng.next_below(300);
    BitVector v(n);
    std::size_t expected = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.bernoulli(0.3)) {
        v.set(i, true);
        ++expected;
      }
    CHECK(v.popcount() == expected);
  }
}

TEST_CASE("bounds checking and tail invariants") {
  BitVector v(65);
  CHECK_THROWS_AS(v.get(65), std::out_of_range);
  CHECK_THROWS_AS(v.set(100, true), std::out_of_range);
  v.set(64, true);
  CHECK(v.words()[1] == 1);
  CHECK_THROWS_AS(BitVector::from_string("10x1"), ParameterError);
}

TEST_CASE("mat_vec_mul") {
  SparseGf2Matrix eye(3, 3);
  for (int i = 0; i < 3; ++i) eye.insert(i, i);
  CHECK(mat_vec_mul(eye, BitVector::from_string("101")).to_string() == "101");

  SparseGf2Matrix zero(3, 3);
  CHECK(mat_vec_mul(zero, BitVector::from_string("111")).to_string() == "000");

  auto m = from_rows(3, {"110", "011"});
  CHECK(mat_vec_mul(m, BitVector::from_string("111")).to_string() == "00");

  CHECK_THROWS_AS(mat_vec_mul(eye, BitVector(2)), DimensionError);
}

TEST_CASE("sparse matrix rejects duplicates and bad positions") {
  SparseGf2Matrix m(2, 2);
  m.insert(0, 1);
  CHECK_THROWS_AS(m.insert(0, 1), DuplicateEntryError);
  CHECK_THROWS_AS(m.insert(2, 0), DimensionError);
  CHECK(m.nnz() == 1);
  CHECK(m.contains(0, 1));
  CHECK_FALSE(m.contains(1, 1));
}

TEST_CASE("symmetric difference of matrices") {
  auto a = from_rows(3, {"110", "001"});
  auto b = from_rows(3, {"011", "001"});
  auto d = symmetric_difference(a, b);
  CHECK(d.contains(0, 0));
  CHECK_FALSE(d.contains(0, 1));
  CHECK(d.contains(0, 2));
  CHECK(d.nnz() == 2);
  CHECK_THROWS_AS(symmetric_difference(a, SparseGf2Matrix(2, 4)),
                  DimensionError);
}

TEST_CASE("gauss_jordan on identity and dependent rows") {
  SparseGf2Matrix eye(4, 4);
  for (int i = 0; i < 4; ++i) eye.insert(i, i);
  auto gj = gauss_jordan(eye);
  CHECK(gj.rank == 4);
  CHECK(gj.pivot_cols == std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(gj.reduced == eye);

  CHECK(gauss_jordan(from_rows(3, {"110", "110"})).rank == 1);

  auto dep = from_rows(3, {"111", "101", "010"});
  CHECK(gauss_jordan(dep).rank == 2);
  CHECK(oracles::brute_force_rank(dep) == 2);
}

TEST_CASE("gauss_jordan is idempotent and matches brute-force rank") {
  StreamRng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t rows = 1 + rng.next_below(6);
    std::size_t cols = 1 + rng.next_below(8);
    auto m = random_matrix(rng, rows, cols, 0.4);
    auto gj = gauss_jordan(m);
    CHECK(gj.rank == oracles::brute_force_rank(m));
    auto again = gauss_jordan(gj.reduced);
    CHECK(again.reduced == gj.reduced);
    CHECK(again.rank == gj.rank);
    CHECK(again.pivot_cols == gj.pivot_cols);
  }
}

TEST_CASE("derive_generator on the repetition code") {
  auto h = from_rows(2, {"11"});
  auto gen = derive_generator(h);
  CHECK(gen.generator.rows() == 1);
  CHECK(gen.generator.contains(0, 0));
  CHECK(gen.generator.contains(0, 1));
  BitVector row = BitVector::from_string("11");
  CHECK(mat_vec_mul(h, row).all_zero());
}

TEST_CASE("derive_generator spans the Hamming code") {
  auto h = oracles::hamming74();
  auto gen = derive_generator(h);
  CHECK(gen.generator.rows() == 4);
  std::set<std::string> codewords;
  for (std::uint64_t msg = 0; msg < 16; ++msg) {
    BitVector c(7);
    for (std::size_t j = 0; j < 4; ++j)
      if ((msg >> j) & 1)
        for (std::uint32_t col : gen.generator.row(j)) c.flip(col);
    CHECK(mat_vec_mul(h, c).all_zero());
    codewords.insert(c.to_string());
  }
  CHECK(codewords.size() == 16);
}

TEST_CASE("redundant rows reduce k through the rank, not the row count") {
  // Last row duplicates the first, so rank is 2 and k = 4 - 2 = 2, not 1.
  auto h = from_rows(4, {"1100", "0110", "1100"});
  auto gen = derive_generator(h);
  CHECK(gen.generator.rows() == 2);
  CHECK(gen.message_cols.size() == 2);
}

TEST_CASE("full column rank has no generator") {
  SparseGf2Matrix h(2, 2);
  h.insert(0, 0);
  h.insert(1, 1);
  CHECK_THROWS_AS(derive_generator(h), DegenerateCodeError);
}

TEST_CASE("generator rows always annihilate H") {
  StreamRng rng(4);
  int derived = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t rows = 1 + rng.next_below(6);
    std::size_t cols = 2 + rng.next_below(10);
    auto h = random_matrix(rng, rows, cols, 0.35);
    GeneratorResult gen;
    try {
      gen = derive_generator(h);
    } catch (const DegenerateCodeError&) {
      CHECK(gauss_jordan(h).rank == cols);
      continue;
    }
    ++derived;
    CHECK(gen.message_cols.size() == cols - gauss_jordan(h).rank);
    for (std::size_t j = 0; j < gen.generator.rows(); ++j) {
      BitVector row(cols);
      for (std::uint32_t c : gen.generator.row(j)) row.set(c, true);
      CHECK(mat_vec_mul(h, row).all_zero());
    }
  }
  CHECK(derived > 50);
}

TEST_CASE("alist round-trips regular and irregular matrices") {
  StreamRng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t rows = 1 + rng.next_below(12);
    std::size_t cols = 1 + rng.next_below(16);
    auto m = random_matrix(rng, rows, cols, 0.3);
    std::ostringstream buf;
    write_alist(m, buf);
    std::istringstream in(buf.str());
    CHECK(read_alist(in) == m);
  }
}

TEST_CASE("alist layout is the published one") {
  auto m = from_rows(4, {"1010", "0110"});
  std::ostringstream buf;
  write_alist(m, buf);
  CHECK(buf.str() ==
        "4 2\n"
        "2 2\n"
        "1 1 2 0\n"
        "2 2\n"
        "1 0\n"
        "2 0\n"
        "1 2\n"
        "0 0\n"
        "1 3\n"
        "2 3\n");
  // Unpadded index lists parse to the same matrix.
  std::istringstream unpadded("4 2\n2 2\n1 1 2 0\n2 2\n1\n2\n1 2\n1 3\n2 3\n");
  CHECK(read_alist(unpadded) == m);
}

TEST_CASE("alist reader rejects inconsistent files") {
  std::istringstream bad_counts("2 1\n1 2\n1 1\n2\n1\n1 2 9\n");
  CHECK_THROWS_AS(read_alist(bad_counts), ConfigError);
  std::istringstream truncated("4 2\n1 2\n1 1 1 0\n2 2\n1\n");
  CHECK_THROWS_AS(read_alist(truncated), ConfigError);
}
