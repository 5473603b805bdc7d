#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <stdexcept>

namespace knotcs {

using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) { return r.str(); }

// Parses "p/q" or "p". Throws std::invalid_argument on malformed input.
inline Rational parse_rational(const std::string& s) {
    try {
        return Rational(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

inline double to_double(const Rational& r) { return static_cast<double>(r); }

}  // namespace knotcs
