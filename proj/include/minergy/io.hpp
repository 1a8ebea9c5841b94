#pragma once

// Instance file format, line oriented:
//   # comment lines start with '#'
//   N
//   x_1 Q_1
//   ...
//   x_N Q_N
// or the single-line shorthand "regular N Q" (Q optional, default 1) for
// the unit-spaced chain. Positions must be ascending and positive, data
// volumes positive. Serialization uses enough digits for exact round trips.

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"

namespace minergy {

namespace detail {

/// Enough digits that parse(format(v)) == v for every finite double.
inline std::string num_exact(double v) { return fmt("%.17g", v); }

inline bool parse_double(const std::string& token, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(token, &used);
    return used == token.size();
  } catch (const std::exception&) {
    return false;
  }
}

inline bool parse_int(const std::string& token, int& out) {
  try {
    std::size_t used = 0;
    out = std::stoi(token, &used);
    return used == token.size();
  } catch (const std::exception&) {
    return false;
  }
}

inline std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

}  // namespace detail

inline NetworkInstance parse_instance(std::istream& in) {
  struct Line {
    int number;
    std::vector<std::string> tokens;
  };
  std::vector<Line> lines;
  std::string raw;
  for (int number = 1; std::getline(in, raw); ++number) {
    const auto tokens = detail::split_tokens(raw);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    lines.push_back({number, tokens});
  }
  if (lines.empty()) throw ParseError("instance file has no content");

  const auto fail = [](int number, const std::string& what) -> ParseError {
    return ParseError("line " + std::to_string(number) + ": " + what);
  };

  const Line& head = lines.front();
  if (head.tokens.front() == "regular") {
    if (head.tokens.size() < 2 || head.tokens.size() > 3)
      throw fail(head.number, "expected 'regular N [Q]'");
    int n = 0;
    if (!detail::parse_int(head.tokens[1], n) || n < 1)
      throw fail(head.number, "'" + head.tokens[1] + "' is not a valid sensor count");
    double q = 1.0;
    if (head.tokens.size() == 3 && (!detail::parse_double(head.tokens[2], q) || !(q > 0.0)))
      throw fail(head.number, "'" + head.tokens[2] + "' is not a positive data volume");
    if (lines.size() > 1)
      throw fail(lines[1].number, "unexpected content after the regular shorthand");
    if (n > 1000000) throw fail(head.number, "sensor count too large");
    return NetworkInstance::regular(n, q);
  }

  if (head.tokens.size() != 1)
    throw fail(head.number, "expected the sensor count alone on the first line");
  int n = 0;
  if (!detail::parse_int(head.tokens.front(), n) || n < 1)
    throw fail(head.number, "'" + head.tokens.front() + "' is not a valid sensor count");
  if (n > 1000000) throw fail(head.number, "sensor count too large");
  if (static_cast<int>(lines.size()) - 1 < n)
    throw ParseError("expected " + std::to_string(n) + " sensor lines, found " +
                     std::to_string(lines.size() - 1));
  if (static_cast<int>(lines.size()) - 1 > n)
    throw fail(lines[static_cast<std::size_t>(n) + 1].number,
               "unexpected extra line (instance declares " + std::to_string(n) + " sensors)");

  std::vector<double> xs, qs;
  xs.reserve(static_cast<std::size_t>(n));
  qs.reserve(static_cast<std::size_t>(n));
  double prev = 0.0;
  for (int i = 1; i <= n; ++i) {
    const Line& line = lines[static_cast<std::size_t>(i)];
    if (line.tokens.size() != 2)
      throw fail(line.number, "expected 'x q', found " + std::to_string(line.tokens.size()) +
                                  " fields");
    double x = 0.0, q = 0.0;
    if (!detail::parse_double(line.tokens[0], x) || !std::isfinite(x))
      throw fail(line.number, "'" + line.tokens[0] + "' is not a valid position");
    if (!detail::parse_double(line.tokens[1], q) || !std::isfinite(q))
      throw fail(line.number, "'" + line.tokens[1] + "' is not a valid data volume");
    if (x <= prev)
      throw fail(line.number, "positions must be positive and strictly increasing (x=" +
                                  detail::num(x) + " after " + detail::num(prev) + ")");
    if (q <= 0.0) throw fail(line.number, "data volumes must be positive (got " +
                                              detail::num(q) + ")");
    xs.push_back(x);
    qs.push_back(q);
    prev = x;
  }
  try {
    return NetworkInstance(std::move(xs), std::move(qs));
  } catch (const std::exception& e) {
    throw ParseError(std::string("instance invalid: ") + e.what());
  }
}

inline NetworkInstance parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline NetworkInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  return parse_instance(in);
}

/// Text form that parses back to an equal instance (exact doubles).
inline std::string serialize_instance(const NetworkInstance& inst) {
  std::string out = std::to_string(inst.size()) + "\n";
  for (int i = 1; i <= inst.size(); ++i)
    out += detail::num_exact(inst.x(i)) + " " + detail::num_exact(inst.q(i)) + "\n";
  return out;
}

}  // namespace minergy
