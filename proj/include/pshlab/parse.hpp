/// Text grammars for measures, fixtures, and numeric grids: small
/// whitespace-token languages shared by the command-line driver and its
/// config files. Every parse error throws std::invalid_argument naming the
/// offending 1-based column in the source string.
#pragma once

#include <cctype>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pshlab/functions.hpp"
#include "pshlab/measures.hpp"

namespace pshlab {

namespace pdetail {

struct Token {
  std::string text;
  std::size_t column = 0;
};

[[noreturn]] inline void spec_fail(const std::string& what,
                                   std::size_t column) {
  throw std::invalid_argument(what + " at column " + std::to_string(column));
}

inline std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])))
      ++j;
    out.push_back({s.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

/// Groups separated by a standalone operator token; empty groups (leading,
/// trailing, or doubled operators) are rejected.
inline std::vector<std::vector<Token>> split_on(const std::vector<Token>& toks,
                                                const std::string& op) {
  std::vector<std::vector<Token>> groups(1);
  for (const auto& t : toks) {
    if (t.text == op) {
      if (groups.back().empty())
        spec_fail("dangling '" + op + "'", t.column);
      groups.emplace_back();
    } else {
      groups.back().push_back(t);
    }
  }
  if (groups.back().empty() && !toks.empty())
    spec_fail("dangling '" + op + "'", toks.back().column);
  return groups;
}

inline double parse_real(const Token& t, const std::string& what) {
  const char* begin = t.text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + t.text.size() || t.text.empty())
    spec_fail(what + ": expected a number, got '" + t.text + "'", t.column);
  return v;
}

/// Complex literals: "1.5", "-0.4i", "1+0.5i", "0.3-4e-2i", "i", "-i".
inline Complex parse_complex(const Token& t, const std::string& what) {
  const std::string& s = t.text;
  auto fail = [&]() -> Complex {
    spec_fail(what + ": expected a complex literal, got '" + s + "'",
              t.column);
  };
  if (s == "i" || s == "+i") return Complex(0.0, 1.0);
  if (s == "-i") return Complex(0.0, -1.0);
  const char* begin = s.c_str();
  char* end = nullptr;
  const double first = std::strtod(begin, &end);
  if (end == begin) return fail();
  std::size_t pos = std::size_t(end - begin);
  if (pos == s.size()) return Complex(first, 0.0);
  if (s[pos] == 'i' && pos + 1 == s.size()) return Complex(0.0, first);
  if (s[pos] != '+' && s[pos] != '-') return fail();
  if (s.compare(pos, std::string::npos, "+i") == 0)
    return Complex(first, 1.0);
  if (s.compare(pos, std::string::npos, "-i") == 0)
    return Complex(first, -1.0);
  const char* b2 = begin + pos;
  char* e2 = nullptr;
  const double second = std::strtod(b2, &e2);
  if (e2 == b2) return fail();
  const std::size_t p2 = std::size_t(e2 - begin);
  if (p2 + 1 != s.size() || s[p2] != 'i') return fail();
  return Complex(first, second);
}

}  // namespace pdetail

/// Measure grammar: components joined by standalone '+', each either
///   atom RE IM MASS
///   radial BETA [KAPPA [S_MAX]]
/// e.g. "atom 0.3 0 1 + atom 0 -0.4 1" or "radial 0.5".
inline RieszMeasure parse_weight(const std::string& text) {
  const auto toks = pdetail::tokenize(text);
  if (toks.empty()) throw std::invalid_argument("weight spec: empty");
  std::optional<RieszMeasure> total;
  for (const auto& group : pdetail::split_on(toks, "+")) {
    const pdetail::Token& head = group.front();
    std::optional<RieszMeasure> part;
    try {
      if (head.text == "atom") {
        if (group.size() != 4)
          pdetail::spec_fail("weight spec: atom takes re im mass",
                             head.column);
        part = RieszMeasure::atom(
            Complex(pdetail::parse_real(group[1], "weight spec"),
                    pdetail::parse_real(group[2], "weight spec")),
            pdetail::parse_real(group[3], "weight spec"));
      } else if (head.text == "radial") {
        if (group.size() < 2 || group.size() > 4)
          pdetail::spec_fail("weight spec: radial takes beta [kappa [s_max]]",
                             head.column);
        const double beta = pdetail::parse_real(group[1], "weight spec");
        const double kappa =
            group.size() > 2 ? pdetail::parse_real(group[2], "weight spec")
                             : 1.0;
        const double s_max =
            group.size() > 3 ? pdetail::parse_real(group[3], "weight spec")
                             : 1.0;
        part = RieszMeasure::radial(beta, kappa, s_max);
      } else {
        pdetail::spec_fail(
            "weight spec: unknown component '" + head.text + "'", head.column);
      }
    } catch (const std::domain_error& e) {
      pdetail::spec_fail(std::string("weight spec: ") + e.what(), head.column);
    }
    total = total ? *total + *part : *part;
  }
  return *total;
}

namespace pdetail {

inline AnalyticFunction parse_factor(const std::vector<Token>& group) {
  const Token& head = group.front();
  try {
    if (head.text == "z") {
      if (group.size() != 1)
        spec_fail("function spec: z takes no arguments", head.column);
      return identity();
    }
    if (head.text == "one") {
      if (group.size() != 1)
        spec_fail("function spec: one takes no arguments", head.column);
      return constant(Complex(1.0));
    }
    if (head.text == "const") {
      if (group.size() != 2)
        spec_fail("function spec: const takes one complex value", head.column);
      return constant(parse_complex(group[1], "function spec"));
    }
    if (head.text == "affine") {
      if (group.size() != 3)
        spec_fail("function spec: affine takes c0 c1", head.column);
      return affine(parse_complex(group[1], "function spec"),
                    parse_complex(group[2], "function spec"));
    }
    if (head.text == "poly") {
      if (group.size() < 2)
        spec_fail("function spec: poly takes coefficients c0 c1 ...",
                  head.column);
      std::vector<Complex> coeffs;
      for (std::size_t k = 1; k < group.size(); ++k)
        coeffs.push_back(parse_complex(group[k], "function spec"));
      return polynomial(std::move(coeffs));
    }
    if (head.text == "pow") {
      if (group.size() != 2)
        spec_fail("function spec: pow takes one exponent", head.column);
      return branch_power(parse_real(group[1], "function spec"));
    }
    if (head.text == "blaschke") {
      if (group.size() < 2)
        spec_fail("function spec: blaschke takes zeros z1 [z2 ...]",
                  head.column);
      std::vector<Complex> zeros;
      for (std::size_t k = 1; k < group.size(); ++k)
        zeros.push_back(parse_complex(group[k], "function spec"));
      return blaschke(std::move(zeros));
    }
  } catch (const std::domain_error& e) {
    spec_fail(std::string("function spec: ") + e.what(), head.column);
  }
  spec_fail("function spec: unknown factor '" + head.text + "'", head.column);
}

}  // namespace pdetail

/// Fixture grammar: terms joined by standalone '+', factors inside a term
/// joined by standalone '*'. Factors:
///   z | one | const C | affine C0 C1 | poly C0 C1 ... | pow A | blaschke Z...
/// with complex literals C and a real branch exponent A. Products of affine
/// factors keep their zero structure (deflation-ready); sums do not.
inline AnalyticFunction parse_function(const std::string& text) {
  const auto toks = pdetail::tokenize(text);
  if (toks.empty()) throw std::invalid_argument("function spec: empty");
  std::optional<AnalyticFunction> sum;
  for (const auto& term : pdetail::split_on(toks, "+")) {
    std::optional<AnalyticFunction> prod;
    for (const auto& group : pdetail::split_on(term, "*"))
      prod = prod ? *prod * pdetail::parse_factor(group)
                  : pdetail::parse_factor(group);
    sum = sum ? *sum + *prod : *prod;
  }
  return *sum;
}

/// Comma-separated real list, e.g. "0.9,0.99,0.999"; entries may carry
/// surrounding spaces, empty entries are rejected.
inline std::vector<double> parse_grid(const std::string& text,
                                      const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    std::size_t lo = pos;
    std::size_t hi = comma == std::string::npos ? text.size() : comma;
    while (lo < hi && std::isspace(static_cast<unsigned char>(text[lo])))
      ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(text[hi - 1])))
      --hi;
    if (lo == hi)
      pdetail::spec_fail(what + ": empty entry", pos + 1);
    out.push_back(
        pdetail::parse_real({text.substr(lo, hi - lo), lo + 1}, what));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace pshlab
