#include "bloch/text.hpp"

#include <istream>
#include <sstream>

#include "bloch/error.hpp"

namespace bloch {

std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    Line line{number, {}};
    std::string tok;
    while (ss >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

void syntax_error(const Line& line, const std::string& message) {
  fail(Errc::SyntaxError, "line " + std::to_string(line.number) + ": " + message);
}

Integer parse_integer_token(const Line& line, const std::string& token) {
  Integer v;
  std::string t = token;
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  if (t.empty() || v.set_str(t, 10) != 0) syntax_error(line, "expected an integer, got '" + token + "'");
  return v;
}

long parse_long_token(const Line& line, const std::string& token) {
  Integer v = parse_integer_token(line, token);
  if (!v.fits_slong_p()) syntax_error(line, "integer out of range: '" + token + "'");
  return v.get_si();
}

Rational parse_rational_token(const Line& line, const std::string& token) {
  try {
    return parse_rational(token);
  } catch (const Error&) {
    syntax_error(line, "expected a rational p/q, got '" + token + "'");
  }
}

Real parse_real_token(const Line& line, const std::string& token, long bits) {
  try {
    return Real::parse(token, bits);
  } catch (const Error&) {
    syntax_error(line, "expected a decimal number, got '" + token + "'");
  }
}

FieldPtr parse_field_line(const Line& line) {
  if (line.tokens.size() < 2) syntax_error(line, "field needs a degree");
  long d = parse_long_token(line, line.tokens[1]);
  if (d < 1) syntax_error(line, "field degree must be positive");
  if (line.tokens.size() != static_cast<std::size_t>(d) + 3) {
    fail(Errc::DimensionMismatch,
         "line " + std::to_string(line.number) + ": field of degree " + std::to_string(d) + " needs " +
             std::to_string(d + 1) + " coefficients");
  }
  std::vector<Integer> coeffs;
  for (std::size_t i = 2; i < line.tokens.size(); ++i) coeffs.push_back(parse_integer_token(line, line.tokens[i]));
  return NumberField::make(std::move(coeffs));
}

std::string field_line(const NumberField& field) {
  std::string out = "field " + std::to_string(field.degree());
  for (const auto& c : field.min_poly()) out += " " + c.get_str();
  return out;
}

}  // namespace bloch
