#pragma once

#include <cmath>
#include <vector>

#include "qclab/exponential_sum.hpp"
#include "qclab/tolerances.hpp"
#include "qclab/types.hpp"
#include "qclab/zero_finder.hpp"

namespace qclab::testing {

inline ToleranceConfig default_cfg() { return ToleranceConfig{}; }

// Q(z) = e^{2*pi*i*z} - 1, vanishing exactly on the integers.
inline ExponentialSum comb(const ToleranceConfig& cfg = {}) {
    return ExponentialSum::normalized({{0.0, Complex(-1.0, 0.0)}, {1.0, Complex(1.0, 0.0)}}, cfg);
}

// Q(z) = e^{2*pi*i*(z-beta)} - 1, vanishing exactly on beta + Z.
inline ExponentialSum shifted_comb(double beta, const ToleranceConfig& cfg = {}) {
    Complex rot = std::exp(Complex(0.0, -two_pi * beta));
    return ExponentialSum::normalized({{0.0, Complex(-1.0, 0.0)}, {1.0, rot}}, cfg);
}

// Q(z) = e^{2*pi*i*alpha*z} - 1, vanishing exactly on (1/alpha) Z.
inline ExponentialSum scaled_comb(double alpha, const ToleranceConfig& cfg = {}) {
    return ExponentialSum::normalized({{0.0, Complex(-1.0, 0.0)}, {alpha, Complex(1.0, 0.0)}},
                                      cfg);
}

// Product vanishing on Z union sqrt(2) Z; frequencies {0, 1/sqrt2, 1, 1+1/sqrt2}.
inline ExponentialSum product_comb(const ToleranceConfig& cfg = {}) {
    return mul(comb(cfg), scaled_comb(1.0 / std::sqrt(2.0), cfg), cfg);
}

inline bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

// All multiples of spacing inside the window, each with the given multiplicity.
inline ZeroSet lattice_zeros(double spacing, Window w, int multiplicity = 1) {
    std::vector<ZeroEntry> entries;
    long long k = static_cast<long long>(std::ceil(w.lo / spacing - 1e-12));
    for (; k * spacing <= w.hi + 1e-12; ++k) {
        double pos = static_cast<double>(k) * spacing;
        if (pos >= w.lo && pos <= w.hi) entries.push_back({pos, multiplicity});
    }
    return ZeroSet::create(std::move(entries), w);
}

}  // namespace qclab::testing
