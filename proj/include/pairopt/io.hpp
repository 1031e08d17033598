#ifndef PAIROPT_IO_HPP
#define PAIROPT_IO_HPP

// Text formats. All element numbers in files are 1-based.
//
// Matrix file:   "n=<int>[ kind=<tag>]" then n lines of n comma-separated values.
// Pairing file:  one "i-j" line per pair, i<j, ascending by i.
// Query log:     CSV "query_index,pairing,total", pairing as "i-j;k-l;...".

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "pairopt/obsphase.hpp"
#include "pairopt/pairmat.hpp"

namespace pairopt {

/// Shortest decimal that parses back to exactly `value`.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || token.empty()) {
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": bad number '" +
                                      std::string(token) + "'");
  }
  return v;
}

inline std::size_t parse_size(std::string_view token, std::size_t line) {
  token = trim(token);
  std::size_t v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || token.empty()) {
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": bad integer '" +
                                      std::string(token) + "'");
  }
  return v;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
  return out;
}

inline void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(Errc::IoError, "failed writing '" + path + "'");
}

}  // namespace detail

struct MatrixFile {
  CompatibilityMatrix matrix;
  std::string kind;  // empty for plain matrices
};

inline void write_matrix(std::ostream& out, const CompatibilityMatrix& matrix,
                         std::string_view kind = {}) {
  const std::size_t n = matrix.size();
  out << "n=" << n;
  if (!kind.empty()) out << " kind=" << kind;
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out << ',';
      out << format_double(matrix(i, j));
    }
    out << '\n';
  }
}

inline MatrixFile read_matrix(std::istream& in, double tol = kAbsTol) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "empty matrix file");
  std::string_view header = detail::trim(line);
  std::string kind;
  if (const auto sp = header.find(' '); sp != std::string_view::npos) {
    std::string_view rest = detail::trim(header.substr(sp + 1));
    header = header.substr(0, sp);
    if (!rest.starts_with("kind=")) {
      throw Error(Errc::ParseError, "line 1: unexpected '" + std::string(rest) + "'");
    }
    kind = std::string(rest.substr(5));
  }
  if (!header.starts_with("n=")) throw Error(Errc::ParseError, "line 1: expected 'n=<integer>'");
  const std::size_t n = detail::parse_size(header.substr(2), 1);
  check_element_count(n);

  std::vector<double> dense;
  dense.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t lineno = r + 2;
    if (!std::getline(in, line)) {
      throw Error(Errc::ParseError, "expected " + std::to_string(n) + " rows, got " + std::to_string(r));
    }
    std::string_view rest = line;
    std::size_t count = 0;
    while (true) {
      const auto comma = rest.find(',');
      dense.push_back(detail::parse_double(rest.substr(0, comma), lineno));
      ++count;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (count != n) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected " +
                                        std::to_string(n) + " values, got " + std::to_string(count));
    }
  }
  while (std::getline(in, line)) {
    if (!detail::trim(line).empty()) throw Error(Errc::ParseError, "trailing data after matrix rows");
  }
  return {CompatibilityMatrix::from_dense(n, dense, tol), std::move(kind)};
}

inline void write_matrix_file(const std::string& path, const CompatibilityMatrix& matrix,
                              std::string_view kind = {}) {
  auto out = detail::open_out(path);
  write_matrix(out, matrix, kind);
  detail::finish(out, path);
}

inline MatrixFile read_matrix_file(const std::string& path) {
  auto in = detail::open_in(path);
  return read_matrix(in);
}

inline std::string pair_token(std::size_t i, std::size_t j) {
  return std::to_string(i + 1) + "-" + std::to_string(j + 1);
}

inline void write_pairing(std::ostream& out, const Pairing& pairing) {
  for (auto [i, j] : pairing.pairs()) out << pair_token(i, j) << '\n';
}

inline Pairing parse_pairing_tokens(std::size_t n, const std::vector<std::string>& tokens) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const std::string_view t = detail::trim(tokens[k]);
    const auto dash = t.find('-');
    if (dash == std::string_view::npos) {
      throw Error(Errc::ParseError, "pair token '" + std::string(t) + "' is not 'i-j'");
    }
    const std::size_t a = detail::parse_size(t.substr(0, dash), k + 1);
    const std::size_t b = detail::parse_size(t.substr(dash + 1), k + 1);
    if (a == 0 || b == 0) throw Error(Errc::ParseError, "element numbers start at 1");
    pairs.emplace_back(a - 1, b - 1);
  }
  return Pairing::from_pairs(n, pairs);
}

/// Reads a pairing file; n is inferred as twice the number of pairs.
inline Pairing read_pairing(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!detail::trim(line).empty()) tokens.push_back(line);
  }
  return parse_pairing_tokens(tokens.size() * 2, tokens);
}

inline void write_pairing_file(const std::string& path, const Pairing& pairing) {
  auto out = detail::open_out(path);
  write_pairing(out, pairing);
  detail::finish(out, path);
}

inline Pairing read_pairing_file(const std::string& path) {
  auto in = detail::open_in(path);
  return read_pairing(in);
}

inline void write_query_log(std::ostream& out, const std::vector<QueryRecord>& log) {
  out << "query_index,pairing,total\n";
  for (std::size_t q = 0; q < log.size(); ++q) {
    out << q + 1 << ',';
    bool first = true;
    for (auto [i, j] : log[q].pairing.pairs()) {
      if (!first) out << ';';
      out << pair_token(i, j);
      first = false;
    }
    out << ',' << format_double(log[q].total) << '\n';
  }
}

inline std::vector<QueryRecord> read_query_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "query_index,pairing,total") {
    throw Error(Errc::ParseError, "missing query log header");
  }
  std::vector<QueryRecord> log;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected 3 columns");
    }
    std::vector<std::string> tokens;
    std::stringstream pairs(line.substr(c1 + 1, c2 - c1 - 1));
    for (std::string tok; std::getline(pairs, tok, ';');) tokens.push_back(tok);
    log.push_back({parse_pairing_tokens(tokens.size() * 2, tokens),
                   detail::parse_double(std::string_view(line).substr(c2 + 1), lineno)});
  }
  return log;
}

}  // namespace pairopt

#endif  // PAIROPT_IO_HPP
