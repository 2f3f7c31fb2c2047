#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace atm {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }
inline double to_double(const Int& n) { return n.convert_to<double>(); }

}  // namespace atm
