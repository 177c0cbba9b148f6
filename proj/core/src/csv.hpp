#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace irtcat::csv {

/// Thrown by read_record when input ends inside a quoted field.
struct UnterminatedField {
  std::size_t line;
};

/// Reads one RFC 4180 record. Quoted fields may contain commas, doubled
/// quotes and newlines. `line` counts physical lines consumed. Returns false
/// at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line);

std::string quote_field(const std::string& field);

/// Shortest representation that round-trips.
std::string format_number(double value);

}  // namespace irtcat::csv
