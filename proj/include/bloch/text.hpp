#pragma once

// Helpers shared by the line-oriented file formats.

#include <iosfwd>
#include <string>
#include <vector>

#include "bloch/arith/number_field.hpp"

namespace bloch {

struct Line {
  int number = 0;  // 1-based line number in the source
  std::vector<std::string> tokens;
};

// Non-empty lines with '#' comments stripped, split on whitespace.
std::vector<Line> read_lines(std::istream& in);

[[noreturn]] void syntax_error(const Line& line, const std::string& message);

Integer parse_integer_token(const Line& line, const std::string& token);
long parse_long_token(const Line& line, const std::string& token);
Rational parse_rational_token(const Line& line, const std::string& token);
Real parse_real_token(const Line& line, const std::string& token, long bits);

// "field <d> <c0> ... <cd>"
FieldPtr parse_field_line(const Line& line);
std::string field_line(const NumberField& field);

}  // namespace bloch
