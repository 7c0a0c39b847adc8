#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace bdcluster {

// Exact scalars. Every numeric value in the library is one of these; there is
// no floating point anywhere.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

// "p" when integral, otherwise "p/q" in lowest terms with q > 0.
inline std::string rat_to_string(const Rat& q) {
  Int n = rat_num(q);
  Int d = rat_den(q);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

inline Rat rat_from_string(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = s.find('/');
  try {
    if (slash == std::string_view::npos) return Rat(Int(std::string(s)));
    Int n(std::string(s.substr(0, slash)));
    Int d(std::string(s.substr(slash + 1)));
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rat(n, d);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("bad rational literal: " + std::string(s));
  }
}

}  // namespace bdcluster
