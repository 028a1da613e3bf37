#pragma once

#include <complex>

namespace qclab {

using Complex = std::complex<double>;

// Closed interval [lo, hi] on the real line.
struct Window {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

inline constexpr double pi = 3.1415926535897932384626433832795;
inline constexpr double two_pi = 6.283185307179586476925286766559;

}  // namespace qclab
