#pragma once

#include <cstddef>

#include "qclab/atomic_measure.hpp"
#include "qclab/exponential_sum.hpp"
#include "qclab/tolerances.hpp"
#include "qclab/types.hpp"
#include "qclab/zero_finder.hpp"

namespace qclab {

struct SeriesValue {
    Complex value;
    // Scale of the truncation: first-order continuation of the empirical zero
    // density past the last included pair.  An indicator, not a bound.
    double tail_estimate = 0.0;
};

// Product over zeros paired outward from the origin by signed index:
//   (1 - z/a_0) prod_{n=1..pair_count} (1 - z/a_n)(1 - z/a_{-n}).
// The asymmetric pairing converges for zero sets of bounded density even
// though neither half-product does alone.  Errors: ZeroAtOrigin when some
// zero is exactly 0, InsufficientZeros when fewer pairs exist than asked.
SeriesValue canonical_product_eval(const ZeroSet& zs, Complex z, std::size_t pair_count);

// Partial fraction sum 1/(z - a_0) + sum_n [1/(z - a_n) + 1/(z - a_{-n})],
// clamped to the pairs the zero set actually has.  Errors: EvaluationAtZero
// when z coincides with a zero exactly.
SeriesValue log_derivative_partial_fractions(const ZeroSet& zs, Complex z,
                                             std::size_t pair_count);

// Same quantity computed from the spectrum instead of the zeros:
//   -2 pi i sum_{gamma > 0} b_gamma e^{2 pi i gamma z} - pi i density.
// Converges only above the real axis.
Complex log_derivative_from_spectrum(const AtomicMeasure& m_hat, double density, Complex z);

// 1/a_0 + sum_n (1/a_n + 1/a_{-n}): bounded exactly when the zero set has the
// near-symmetry the canonical product needs.  Diagnostic only.
SeriesValue reciprocal_sum_diagnostic(const ZeroSet& zs, std::size_t pair_count);

struct Reconstruction {
    // Series on the line Im z = height, normalized to value 1 when the
    // spectrum carries no positive atoms.
    ExponentialSum line_series;
    // Series in frequencies [-density/2, density/2] whose real zeros
    // approximate the zero set the spectrum came from.
    ExponentialSum remapped;
    double height = 0.0;
    double density = 0.0;
    // |density - mass of the spectrum at 0|: the two should agree, the
    // reconstruction trusts the caller and reports the gap.
    double density_disagreement = 0.0;
    // Coefficient mass outside [0, density] discarded by the remap;
    // frequency-window truncation parks its error there by construction.
    double dropped_mass = 0.0;
    // check_int_condition value when the window covers (0, 1), else 0.
    double int_condition = 0.0;
    // Wiener norm of the undamped log-series, the budget the exponential
    // series was certified against.
    double log_series_norm = 0.0;
};

// Builds the exponential sum with the prescribed zero spectrum: the log-series
// G has coefficient -b_gamma / gamma at each positive atom, the line series is
// exp(G) damped to the height, and the remap continues it back down to the
// real axis.  All series arithmetic runs on undamped coefficients so no
// intermediate is amplified.  Requires height >= twice the observed growth
// slope of the spectrum (HeightTooLow) and a finite low-frequency sum
// (IntConditionDiverging above int_condition_cap).
Reconstruction reconstruct_series(const AtomicMeasure& m_hat, double density, double height,
                                  const ToleranceConfig& cfg, double int_condition_cap = 1e6);

struct RoundTripReport {
    ZeroSet original;
    ZeroSet recovered;
    Reconstruction reconstruction;
    double spectrum_height = 0.0;
    std::size_t matched_pairs = 0;
    // Max |original - recovered| over zeros aligned by signed index.
    double max_displacement = 0.0;
    // Slope of log(Q / remapped) along the imaginary axis: the exponential
    // factor relating the input to its canonical reconstruction.  The real
    // part should vanish for real zero sets.
    Complex ratio_log_slope;
    // Deviation of that log-ratio from linearity across three heights.
    double slope_residual = 0.0;
};

// Zeros -> spectrum -> reconstruction -> zeros, with the recovered exponential
// factor.  height <= 0 selects max(1, 2 * max growth slope).  The log-ratio
// slope is read off at quarter-unit steps above the reconstruction height,
// which keeps the phase drift per step under pi for |slope| < 4 pi.
RoundTripReport round_trip_report(const ExponentialSum& q, Window window,
                                  const ToleranceConfig& cfg, double gamma_max = 6.0,
                                  double height = 0.0);

}  // namespace qclab
