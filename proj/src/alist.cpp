#include "netrelay/alist.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "netrelay/errors.hpp"

namespace netrelay {

void write_alist(const SparseGf2Matrix& m, std::ostream& out) {
  const std::size_t n = m.cols(), rows = m.rows();
  auto col_supports = m.column_supports();
  auto row_w = m.row_weights();
  std::size_t max_col = 0, max_row = 0;
  for (const auto& s : col_supports) max_col = std::max(max_col, s.size());
  for (std::size_t w : row_w) max_row = std::max(max_row, w);

  out << n << " " << rows << "\n";
  out << max_col << " " << max_row << "\n";
  for (std::size_t c = 0; c < n; ++c)
    out << col_supports[c].size() << (c + 1 < n ? " " : "\n");
  if (n == 0) out << "\n";
  for (std::size_t r = 0; r < rows; ++r)
    out << row_w[r] << (r + 1 < rows ? " " : "\n");
  if (rows == 0) out << "\n";
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t j = 0; j < max_col; ++j) {
      if (j) out << " ";
      out << (j < col_supports[c].size() ? col_supports[c][j] + 1 : 0u);
    }
    out << "\n";
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = m.row(r);
    for (std::size_t j = 0; j < max_row; ++j) {
      if (j) out << " ";
      out << (j < row.size() ? row[j] + 1 : 0u);
    }
    out << "\n";
  }
}

SparseGf2Matrix read_alist(std::istream& in) {
  std::vector<long long> tokens;
  long long v;
  while (in >> v) tokens.push_back(v);
  std::size_t pos = 0;
  auto next = [&]() -> long long {
    if (pos >= tokens.size()) throw ConfigError("alist: truncated file");
    return tokens[pos++];
  };

  long long n = next(), rows = next();
  if (n < 0 || rows < 0) throw ConfigError("alist: negative dimensions");
  long long max_col = next(), max_row = next();
  std::vector<std::size_t> col_deg(n), row_deg(rows);
  std::size_t total_col = 0, total_row = 0;
  for (auto& d : col_deg) {
    long long x = next();
    if (x < 0 || x > max_col) throw ConfigError("alist: bad column degree");
    d = static_cast<std::size_t>(x);
    total_col += d;
  }
  for (auto& d : row_deg) {
    long long x = next();
    if (x < 0 || x > max_row) throw ConfigError("alist: bad row degree");
    d = static_cast<std::size_t>(x);
    total_row += d;
  }
  if (total_col != total_row) throw ConfigError("alist: degree sums disagree");

  std::size_t remaining = tokens.size() - pos;
  std::size_t padded = static_cast<std::size_t>(n) * max_col +
                       static_cast<std::size_t>(rows) * max_row;
  std::size_t unpadded = total_col + total_row;
  bool is_padded;
  if (remaining == padded)
    is_padded = true;
  else if (remaining == unpadded)
    is_padded = false;
  else
    throw ConfigError("alist: token count matches neither padded nor unpadded layout");

  SparseGf2Matrix m(static_cast<std::size_t>(rows),
                    static_cast<std::size_t>(n));
  for (long long c = 0; c < n; ++c) {
    std::size_t entries = is_padded ? static_cast<std::size_t>(max_col)
                                    : col_deg[static_cast<std::size_t>(c)];
    std::size_t seen = 0;
    for (std::size_t j = 0; j < entries; ++j) {
      long long r = next();
      if (r == 0) continue;  // padding
      if (r < 1 || r > rows) throw ConfigError("alist: row index out of range");
      m.insert(static_cast<std::size_t>(r - 1), static_cast<std::size_t>(c));
      ++seen;
    }
    if (seen != col_deg[static_cast<std::size_t>(c)])
      throw ConfigError("alist: column entries disagree with stated degree");
  }
  // The row section repeats the same entries; validate instead of inserting.
  for (long long r = 0; r < rows; ++r) {
    std::size_t entries = is_padded ? static_cast<std::size_t>(max_row)
                                    : row_deg[static_cast<std::size_t>(r)];
    std::size_t seen = 0;
    for (std::size_t j = 0; j < entries; ++j) {
      long long c = next();
      if (c == 0) continue;
      if (c < 1 || c > n) throw ConfigError("alist: column index out of range");
      if (!m.contains(static_cast<std::size_t>(r),
                      static_cast<std::size_t>(c - 1)))
        throw ConfigError("alist: row section disagrees with column section");
      ++seen;
    }
    if (seen != row_deg[static_cast<std::size_t>(r)])
      throw ConfigError("alist: row entries disagree with stated degree");
  }
  return m;
}

void write_alist_file(const SparseGf2Matrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out) throw ConfigError("cannot open for writing: " + path);
  write_alist(m, out);
  if (!out) throw ConfigError("write failed: " + path);
}

SparseGf2Matrix read_alist_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open for reading: " + path);
  return read_alist(in);
}

}  // namespace netrelay
