#pragma once

#include <cmath>
#include <cstddef>

#include "qclab/errors.hpp"
#include "qclab/types.hpp"

namespace qclab {

// Shared numeric knobs.  Every truncation performed under a ToleranceConfig is
// accompanied by a bound on the discarded mass, so results degrade loudly
// (via TruncationBudgetExceeded / TooManyTerms), never silently.
struct ToleranceConfig {
    // Frequencies closer than this are merged into one term.
    double freq_merge_tol = 1e-9;
    // Coefficients below this magnitude may be dropped after each operation.
    double prune_threshold = 1e-12;
    // Target bound on the series tail discarded by exp/log truncation.
    double series_tail_target = 1e-12;
    // Absolute accuracy demanded of located zeros.
    double root_tol = 1e-10;
    // Base step for contour quadrature and real-axis scans.
    double quadrature_step = 1e-2;
    // Hard cap on the number of stored terms in any series.
    std::size_t max_terms = 100000;

    void validate() const {
        if (!(freq_merge_tol > 0) || !(prune_threshold > 0) || !(series_tail_target > 0) ||
            !(root_tol > 0) || !(quadrature_step > 0)) {
            fail(errc::invalid_argument, "tolerances must be positive");
        }
        if (max_terms == 0) fail(errc::invalid_argument, "max_terms must be positive");
    }
};

// Tolerances for spectrum extraction at height `s` with frequencies up to
// `gamma_max`.  Coefficients of the logarithmic line series are amplified by
// up to e^{2*pi*gamma*s} when atoms are read off, so the tail target shrinks
// by the same factor to keep the delivered atoms accurate to prune_threshold.
inline ToleranceConfig spectrum_tolerances(const ToleranceConfig& cfg, double gamma_max,
                                           double height) {
    cfg.validate();
    if (!(gamma_max >= 0) || !(height > 0)) {
        fail(errc::invalid_argument, "spectrum_tolerances needs gamma_max >= 0 and height > 0");
    }
    ToleranceConfig out = cfg;
    double log_target = std::log(cfg.prune_threshold / 2.0) - two_pi * gamma_max * height;
    // Clamp above the subnormal range; smaller targets are indistinguishable
    // from zero coefficients at double precision anyway.
    out.series_tail_target = std::exp(std::max(log_target, std::log(1e-290)));
    return out;
}

}  // namespace qclab
