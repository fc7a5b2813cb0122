#pragma once

#include <iosfwd>
#include <string>

#include "netrelay/gf2.hpp"

namespace netrelay {

// alist text format: "n m", "max_col_deg max_row_deg", column and row degree
// lists, then 1-based row indices per column and column indices per row,
// zero-padded to the maximum degree. LF line endings. The reader also
// accepts the unpadded variant found in the wild.
void write_alist(const SparseGf2Matrix& m, std::ostream& out);
SparseGf2Matrix read_alist(std::istream& in);

void write_alist_file(const SparseGf2Matrix& m, const std::string& path);
SparseGf2Matrix read_alist_file(const std::string& path);

}  // namespace netrelay
