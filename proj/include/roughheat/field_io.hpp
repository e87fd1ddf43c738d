#pragma once

#include <string>

#include "roughheat/grid.hpp"

namespace roughheat::io {

/// CSV, one row per x2 slice, '.' decimal, ',' separator, LF line endings.
void write_csv(const grid::Field& f, const std::string& path);
grid::Field read_csv(const std::string& path, const grid::GridSpec& g);

/// Binary dump: 8-byte header (n1, n2 as little-endian int32) followed by the
/// values in column-major order (x1 fastest).
void write_binary(const grid::Field& f, const std::string& path);
grid::Field read_binary(const std::string& path, grid::GridSpec g);

std::string format_double(double x);

}  // namespace roughheat::io
