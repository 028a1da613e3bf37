#pragma once

#include "qclab/atomic_measure.hpp"
#include "qclab/test_function.hpp"
#include "qclab/types.hpp"

namespace qclab {

struct PoissonIdentity {
    Complex lhs;            // sum of mass * phi(position) over the point measure
    Complex rhs;            // sum of mass * phi_hat(position) over its transform
    double residual = 0.0;  // |lhs - rhs|
};

// Tests the summation identity pairing a measure against a probe and the
// measure's transform against the probe's transform.  Both effective supports
// must sit inside the respective windows, otherwise atoms that matter to the
// identity are missing and the residual would be meaningless.
PoissonIdentity verify_poisson(const AtomicMeasure& mu, const AtomicMeasure& mu_hat,
                               const TestFunction& f);

}  // namespace qclab
