#include "magloop/literals.hpp"

#include <cctype>
#include <charconv>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace magloop {

namespace {

[[noreturn]] void fail(std::string_view text, const std::string& why) {
  throw std::invalid_argument("bad expression \"" + std::string(text) + "\": " + why);
}

struct ExprScanner {
  std::string_view text;
  std::size_t pos = 0;
  const double* t = nullptr;

  void skip_spaces() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool starts_with(std::string_view token) const {
    return text.substr(pos, token.size()) == token;
  }

  double parse_number() {
    double value = 0.0;
    const char* first = text.data() + pos;
    const char* last = text.data() + text.size();
    auto [end, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || end == first) fail(text, "expected a number");
    pos += static_cast<std::size_t>(end - first);
    return value;
  }

  double parse_factor() {
    skip_spaces();
    if (pos >= text.size()) fail(text, "expected a factor");
    const char c = text[pos];
    if (starts_with("pi")) {
      pos += 2;
      return std::numbers::pi;
    }
    if (c == 't') {
      if (t == nullptr) fail(text, "'t' is not bound here");
      ++pos;
      return *t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = parse_number();
      if (starts_with("pi")) {
        pos += 2;
        value *= std::numbers::pi;
      }
      return value;
    }
    fail(text, std::string("unexpected character '") + c + "'");
  }

  double parse() {
    skip_spaces();
    double sign = 1.0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') sign = -1.0;
      ++pos;
    }
    double value = sign * parse_factor();
    for (;;) {
      skip_spaces();
      if (pos >= text.size()) return value;
      const char op = text[pos];
      if (op != '*' && op != '/') fail(text, std::string("unexpected character '") + op + "'");
      ++pos;
      const double rhs = parse_factor();
      if (op == '*') {
        value *= rhs;
      } else {
        if (rhs == 0.0) fail(text, "division by zero");
        value /= rhs;
      }
    }
  }
};

double evaluate(std::string_view text, const double* t) {
  ExprScanner scanner{text, 0, t};
  return scanner.parse();
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

std::vector<std::string_view> split_top_level(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || (text[i] == sep && depth == 0)) {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    } else if (text[i] == '(') {
      ++depth;
    } else if (text[i] == ')') {
      --depth;
      if (depth < 0) throw std::invalid_argument("unbalanced ')' in \"" + std::string(text) + "\"");
    }
  }
  if (depth != 0) throw std::invalid_argument("unbalanced '(' in \"" + std::string(text) + "\"");
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Literal {
  std::string_view head;
  std::string_view body;
};

Literal split_literal(std::string_view literal) {
  const std::size_t colon = literal.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("literal \"" + std::string(literal) +
                                "\" is missing the 'kind:' prefix");
  }
  return {trim(literal.substr(0, colon)), trim(literal.substr(colon + 1))};
}

std::vector<double> parse_list(std::string_view body, std::size_t expected,
                               std::string_view what) {
  const auto parts = split(body, ',');
  if (expected != 0 && parts.size() != expected) {
    throw std::invalid_argument(std::string(what) + " literal needs " +
                                std::to_string(expected) + " values, got " +
                                std::to_string(parts.size()));
  }
  std::vector<double> values;
  values.reserve(parts.size());
  for (const auto part : parts) values.push_back(evaluate(trim(part), nullptr));
  return values;
}

PiecewiseField parse_piecewise(std::string_view body) {
  PiecewiseField field;
  for (const auto segment : split(body, ';')) {
    const auto trimmed = trim(segment);
    if (trimmed.empty()) continue;
    const auto halves = split(trimmed, '*');
    if (halves.size() != 2) {
      throw std::invalid_argument("piecewise segment \"" + std::string(trimmed) +
                                  "\" must be BETA*DT with a single '*'");
    }
    const double beta = evaluate(trim(halves[0]), nullptr);
    const double dt = evaluate(trim(halves[1]), nullptr);
    field.segments.push_back({beta, dt});
  }
  if (field.segments.empty()) {
    throw std::invalid_argument("piecewise literal has no segments");
  }
  return field;
}

WordPrimitive parse_primitive(std::string_view token, double t_value) {
  if (token == "parity") return Parity{};
  const std::size_t open = token.find('(');
  if (open == std::string_view::npos || token.back() != ')') {
    throw std::invalid_argument("word primitive \"" + std::string(token) +
                                "\" must be parity, free(EXPR), or kick(EXPR)");
  }
  const auto name = trim(token.substr(0, open));
  const auto arg = trim(token.substr(open + 1, token.size() - open - 2));
  const double value = evaluate(arg, &t_value);
  if (name == "free") return Free{value};
  if (name == "kick") return Kick{value};
  throw std::invalid_argument("unknown word primitive \"" + std::string(name) + "\"");
}

}  // namespace

double parse_expression(std::string_view text) { return evaluate(text, nullptr); }

double parse_expression(std::string_view text, double t_value) {
  return evaluate(text, &t_value);
}

FieldProfile parse_profile(std::string_view literal) {
  const auto [head, body] = split_literal(literal);
  if (head == "constant") {
    return ConstantField{parse_list(body, 1, head)[0]};
  }
  if (head == "harmonic") {
    const auto values = parse_list(body, 2, head);
    return HarmonicField{values[0], values[1]};
  }
  if (head == "biharmonic") {
    const auto values = parse_list(body, 2, head);
    return BiharmonicField{values[0], values[1]};
  }
  if (head == "piecewise") {
    return parse_piecewise(body);
  }
  if (head == "landau") {
    return PulseSequence(parse_list(body, 0, head)).to_field_profile();
  }
  throw std::invalid_argument("unknown profile kind \"" + std::string(head) + "\"");
}

PulseSequence parse_pulse_sequence(std::string_view literal) {
  const auto [head, body] = split_literal(literal);
  if (head != "landau") {
    throw std::invalid_argument("pulse-sequence literal must start with 'landau:'");
  }
  return PulseSequence(parse_list(body, 0, head));
}

KickFreeWord parse_word(std::string_view literal, double t_value) {
  const auto [head, body] = split_literal(literal);
  if (head != "word") {
    throw std::invalid_argument("word literal must start with 'word:'");
  }
  KickFreeWord word;
  for (const auto token : split_top_level(body, '*')) {
    const auto trimmed = trim(token);
    if (trimmed.empty()) {
      throw std::invalid_argument("empty primitive in word literal");
    }
    word.push_back(parse_primitive(trimmed, t_value));
  }
  if (word.empty()) throw std::invalid_argument("word literal has no primitives");
  return word;
}

}  // namespace magloop
