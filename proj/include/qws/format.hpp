#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "qws/defs.hpp"

namespace qws {

/// Fixed float formatting for all machine-readable output:
/// 17 significant digits, lowercase 'e'.
inline std::string fmt_double(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// JSON fragment [re,im].
inline std::string fmt_cplx(cplx z) {
  return "[" + fmt_double(z.real()) + "," + fmt_double(z.imag()) + "]";
}

/// Human-readable a+bi / a-bi.
inline std::string fmt_cplx_human(cplx z) {
  std::string s = fmt_double(z.real());
  s += (z.imag() < 0 || std::signbit(z.imag())) ? "-" : "+";
  s += fmt_double(std::abs(z.imag()));
  s += "i";
  return s;
}

/// Parse "a+bi" / "a-bi" / "a" / "bi" / "i" / "-i".
inline cplx parse_cplx(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw io_error("empty complex literal");
  if (s == "i") return {0, 1};
  if (s == "-i") return {0, -1};
  if (s == "+i") return {0, 1};

  auto read_num = [&](std::size_t pos, double& out) -> std::size_t {
    char* end = nullptr;
    out = std::strtod(s.c_str() + pos, &end);
    return end - s.c_str();
  };

  double first = 0;
  std::size_t p = read_num(0, first);
  if (p == 0) throw io_error("bad complex literal: " + text);
  if (p == s.size()) return {first, 0};
  if (s[p] == 'i' && p + 1 == s.size()) return {0, first};
  if (s[p] != '+' && s[p] != '-') throw io_error("bad complex literal: " + text);

  if ((s[p] == '+' || s[p] == '-') && p + 2 == s.size() && s[p + 1] == 'i')
    return {first, s[p] == '+' ? 1.0 : -1.0};

  double second = 0;
  std::size_t q = read_num(p, second);
  if (q != s.size() - 1 || s[q] != 'i') throw io_error("bad complex literal: " + text);
  return {first, second};
}

}  // namespace qws
