#include "shadowlp/instance_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <vector>
#include <ostream>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "shadowlp/errors.hpp"

namespace shadowlp {

namespace {

struct LineReader {
  std::istream& in;
  int line_no = 0;

  // Next content line split into tokens; false at end of input.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      tokens.clear();
      std::size_t pos = 0;
      while (pos < line.size()) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos >= line.size()) break;
        std::size_t end = pos;
        while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
        tokens.push_back(line.substr(pos, end - pos));
        pos = end;
      }
      if (tokens.empty() || tokens.front().front() == '#') continue;
      return true;
    }
    return false;
  }
};

double to_double(const std::string& token, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw ParseError(fmt::format("'{}' is not a finite number", token), line);
  }
  return v;
}

int to_count(const std::string& token, int line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || v <= 0) {
    throw ParseError(fmt::format("'{}' is not a positive integer", token), line);
  }
  return v;
}

}  // namespace

LpInstance parse_instance(std::istream& in) {
  LineReader reader{in};
  std::vector<std::string> tok;
  if (!reader.next(tok)) throw ParseError("empty instance file", reader.line_no);
  if (tok.size() != 2) throw ParseError(fmt::format("header needs 2 fields 'n d', got {}", tok.size()), reader.line_no);
  const int n = to_count(tok[0], reader.line_no);
  const int d = to_count(tok[1], reader.line_no);

  LpInstance lp;
  lp.A.resize(n, d);
  lp.b.resize(n);
  lp.c.resize(d);
  for (int i = 0; i < n; ++i) {
    if (!reader.next(tok)) throw ParseError(fmt::format("expected constraint row {} of {}", i + 1, n), reader.line_no + 1);
    if (static_cast<int>(tok.size()) != d + 1) {
      throw ParseError(fmt::format("constraint row needs {} fields, got {}", d + 1, tok.size()), reader.line_no);
    }
    for (int j = 0; j < d; ++j) lp.A(i, j) = to_double(tok[static_cast<std::size_t>(j)], reader.line_no);
    lp.b(i) = to_double(tok[static_cast<std::size_t>(d)], reader.line_no);
  }
  if (!reader.next(tok)) throw ParseError("expected objective row", reader.line_no + 1);
  if (static_cast<int>(tok.size()) != d) {
    throw ParseError(fmt::format("objective row needs {} fields, got {}", d, tok.size()), reader.line_no);
  }
  for (int j = 0; j < d; ++j) lp.c(j) = to_double(tok[static_cast<std::size_t>(j)], reader.line_no);
  if (reader.next(tok)) throw ParseError("unexpected content after objective row", reader.line_no);
  return lp;
}

LpInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path), 0);
  return parse_instance(in);
}

void write_instance(std::ostream& out, const LpInstance& lp) {
  fmt::print(out, "{} {}\n", lp.rows(), lp.dim());
  for (int i = 0; i < lp.rows(); ++i) {
    for (int j = 0; j < lp.dim(); ++j) fmt::print(out, "{} ", lp.A(i, j));
    fmt::print(out, "{}\n", lp.b(i));
  }
  for (int j = 0; j < lp.dim(); ++j) fmt::print(out, j + 1 < lp.dim() ? "{} " : "{}\n", lp.c(j));
}

}  // namespace shadowlp
