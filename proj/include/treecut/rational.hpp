#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace treecut {

// Exact arithmetic for all distributional identities; floating point is
// never used where a claim is "TV distance exactly 0".
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace treecut
