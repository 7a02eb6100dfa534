#pragma once

#include <string>

#include "gdrc/dataset.hpp"

namespace gdrc {

// RFC-4180-style CSV with a mandatory header row. label_column is the header
// name of the label; positive_label_value is the raw label value mapped to
// +1, everything else maps to -1. Rows containing missing cells (empty or
// "?") are dropped and counted in Dataset::dropped_rows. Any other
// non-numeric feature cell raises ParseError with 1-based row/col.
Dataset parse_csv(const std::string& path, const std::string& label_column,
                  const std::string& positive_label_value);

// svmlight / libsvm text: `<label> idx:val ...` with 1-based strictly
// ascending indices per line; absent indices are zero. Labels must map to
// +1/-1 ({+1,1,-1} or {0,1} or {1,2} are accepted label alphabets).
Dataset parse_svmlight(const std::string& path);

// Writes in svmlight format (all entries, including zeros, are written so a
// re-parse reproduces features exactly).
void write_svmlight(const Dataset& d, const std::string& path);

}  // namespace gdrc
