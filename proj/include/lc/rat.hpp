#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace lc {

using Rat = mpq_class;

// Accepts "a/b", integers, and exact decimal strings ("0.7" -> 7/10).
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rat q(s);
    q.canonicalize();
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    return q;
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    Rat q(s);
    q.canonicalize();
    return q;
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  size_t frac_len = s.size() - dot - 1;
  if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("bad rational: " + s);
  mpz_class num(digits);
  mpz_class den(1);
  for (size_t i = 0; i < frac_len; ++i) den *= 10;
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }  // "num/den" or "num"

inline Rat rat(long num, long den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace lc
