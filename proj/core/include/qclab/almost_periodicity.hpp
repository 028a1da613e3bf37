#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "qclab/exponential_sum.hpp"
#include "qclab/types.hpp"
#include "qclab/zero_finder.hpp"

namespace qclab {

// Uniform complex samples of a function on start + step * {0, ..., size-1}.
// Between samples the function is treated as piecewise linear.
struct SampledFunction {
    double start = 0.0;
    double step = 1.0;
    std::vector<Complex> values;

    std::size_t size() const { return values.size(); }
    double span() const { return step * static_cast<double>(values.size() - 1); }
    double abscissa(std::size_t i) const { return start + step * static_cast<double>(i); }

    // Fails InvalidArgument unless the step is positive and finite, every
    // sample is finite, and there are at least two samples.
    static SampledFunction create(double start, double step, std::vector<Complex> values);
};

// Tabulates f on the window at the given step.  The last sample sits at or
// one partial step beyond window.hi so the whole window is covered.
SampledFunction sample(const std::function<Complex(double)>& f, Window w, double step);

// Tabulates q.evaluate on the window, same grid convention as sample().
SampledFunction sample_sum(const ExponentialSum& q, Window w, double step);

struct MeanEstimate {
    double window = 0.0;  // averaging length T
    Complex value;
};

struct BohrMean {
    std::vector<MeanEstimate> estimates;  // one per requested T, in input order
    Complex mean;                         // the last (largest-window) estimate
    double spread = 0.0;                  // max distance of any estimate from mean
};

// Averages (1/T) * integral of g over a window of each length T centered at
// the middle of the grid.  For a function with a mean value the estimates
// settle at rate O(1/T); the spread across T_list is the empirical error bar.
// Fails GridTooShort when some T exceeds the sampled span.
BohrMean bohr_mean(const SampledFunction& g, const std::vector<double>& t_list);

// Mean of g(x) e^{-2 pi i omega x}: the Fourier coefficient of g at omega.
// Sampling an absolutely convergent sum and reading a stored frequency
// recovers its coefficient within O(norm / T).
Complex fourier_coefficient(const SampledFunction& g, double omega,
                            const std::vector<double>& t_list);

struct AlmostPeriods {
    std::vector<double> periods;
    // Largest stretch of the search window without a period, counting the
    // stretches before the first and after the last; infinity when none
    // were found.
    double max_gap = 0.0;
};

// Finds every shift tau = j * stride inside the search window with
// sup_x |g(x + tau) - g(x)| < eps, the sup running over the sampled overlap
// of g and its translate.  The stride is snapped to the nearest positive
// multiple of the grid step so translates compare sample against sample.
// Fails GridTooShort when the search window reaches beyond the grid span.
AlmostPeriods almost_periods(const SampledFunction& g, double eps, Window search, double stride);

struct DisplacementSample {
    std::ptrdiff_t index = 0;
    double value = 0.0;
};

struct ApDisplacement {
    std::vector<DisplacementSample> phi;  // phi(n) = a_n - n / density
    double sup_abs = 0.0;
    // max_gap of the integer almost-period search on phi at eps equal to a
    // fifth of sup_abs; infinity when the set is too small to test shifts.
    double ap_score = 0.0;
};

// Splits the signed-indexed zeros a_n into the progression n / density plus
// the displacement phi(n), and scores how close phi comes to periodicity.
// A set of the exact density has bounded phi; a lattice has phi identically
// zero.  Fails EmptyZeroSet on an empty set.
ApDisplacement ap_displacement(const ZeroSet& zeros, double density);

}  // namespace qclab
