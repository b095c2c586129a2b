#pragma once

#include <string>

#include "betarma/model.hpp"

namespace barma {

/// Read a series from a CSV/text file: one numeric column, optional header
/// line, optional leading date column (ignored with a notice on stderr).
/// With percent = true every value is divided by 100 first. Values outside
/// (0,1) after transformation are rejected with their row numbers.
BoundedSeries ingest_csv(const std::string& path, bool percent = false);

/// Write content to path atomically (temp file in the same directory, then
/// rename), so partial outputs are never observable.
void write_text_atomic(const std::string& path, const std::string& content);

/// One value per line, full round-trip precision.
std::string series_to_csv(const BoundedSeries& y);

}  // namespace barma
