#include "qclab/almost_periodicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qclab/errors.hpp"
#include "qclab/logging.hpp"

namespace qclab {
namespace {

constexpr double infinity = std::numeric_limits<double>::infinity();

// Integral of the piecewise-linear interpolant of g over [a, b], exact per
// cell.  a and b must lie within the grid.
Complex integrate_linear(const SampledFunction& g, double a, double b) {
    double ua = (a - g.start) / g.step;
    double ub = (b - g.start) / g.step;
    double top = static_cast<double>(g.size() - 1);
    ua = std::clamp(ua, 0.0, top);
    ub = std::clamp(ub, 0.0, top);
    if (!(ub > ua)) return Complex{};

    auto lerp = [&](std::size_t cell, double frac) {
        return g.values[cell] * (1.0 - frac) + g.values[cell + 1] * frac;
    };
    auto first = static_cast<std::size_t>(std::floor(ua));
    auto last = static_cast<std::size_t>(std::min(std::ceil(ub), top));
    Complex sum{};
    for (std::size_t cell = first; cell + 1 <= last; ++cell) {
        double lo = std::max(ua, static_cast<double>(cell));
        double hi = std::min(ub, static_cast<double>(cell + 1));
        if (!(hi > lo)) continue;
        Complex vl = lerp(cell, lo - static_cast<double>(cell));
        Complex vh = lerp(cell, hi - static_cast<double>(cell));
        sum += (vl + vh) * (0.5 * (hi - lo));
    }
    return sum * g.step;
}

void require_usable_grid(const SampledFunction& g) {
    if (g.size() < 2) fail(errc::grid_too_short, "need at least two samples");
    if (!(g.step > 0) || !std::isfinite(g.step)) {
        fail(errc::invalid_argument, "sample step must be positive and finite");
    }
}

}  // namespace

SampledFunction SampledFunction::create(double start, double step, std::vector<Complex> values) {
    if (!std::isfinite(start) || !(step > 0) || !std::isfinite(step)) {
        fail(errc::invalid_argument, "grid start and step must be finite, step positive");
    }
    if (values.size() < 2) fail(errc::invalid_argument, "need at least two samples");
    for (const Complex& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            fail(errc::invalid_argument, "samples must be finite");
        }
    }
    SampledFunction g;
    g.start = start;
    g.step = step;
    g.values = std::move(values);
    return g;
}

SampledFunction sample(const std::function<Complex(double)>& f, Window w, double step) {
    if (!(w.hi > w.lo)) fail(errc::invalid_argument, "sampling window is empty");
    if (!(step > 0) || !std::isfinite(step)) {
        fail(errc::invalid_argument, "sample step must be positive and finite");
    }
    auto n = static_cast<std::size_t>(std::ceil(w.length() / step - 1e-9));
    std::vector<Complex> values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) values[i] = f(w.lo + step * static_cast<double>(i));
    return SampledFunction::create(w.lo, step, std::move(values));
}

SampledFunction sample_sum(const ExponentialSum& q, Window w, double step) {
    return sample([&](double x) { return q.evaluate(Complex(x, 0.0)); }, w, step);
}

BohrMean bohr_mean(const SampledFunction& g, const std::vector<double>& t_list) {
    require_usable_grid(g);
    if (t_list.empty()) fail(errc::invalid_argument, "need at least one averaging length");
    double span = g.span();
    double center = g.start + 0.5 * span;

    BohrMean out;
    for (double t : t_list) {
        if (!(t > 0) || !std::isfinite(t)) {
            fail(errc::invalid_argument, "averaging length must be positive and finite");
        }
        if (t > span * (1.0 + 1e-12)) {
            fail(errc::grid_too_short, "averaging length " + std::to_string(t) +
                                           " exceeds the sampled span " + std::to_string(span));
        }
        Complex integral = integrate_linear(g, center - 0.5 * t, center + 0.5 * t);
        out.estimates.push_back({t, integral / t});
    }
    out.mean = out.estimates.back().value;
    for (const MeanEstimate& e : out.estimates) {
        out.spread = std::max(out.spread, std::abs(e.value - out.mean));
    }
    return out;
}

Complex fourier_coefficient(const SampledFunction& g, double omega,
                            const std::vector<double>& t_list) {
    require_usable_grid(g);
    if (!std::isfinite(omega)) fail(errc::invalid_argument, "frequency must be finite");
    SampledFunction mod = g;
    for (std::size_t i = 0; i < mod.values.size(); ++i) {
        mod.values[i] *= std::polar(1.0, -two_pi * omega * mod.abscissa(i));
    }
    return bohr_mean(mod, t_list).mean;
}

AlmostPeriods almost_periods(const SampledFunction& g, double eps, Window search, double stride) {
    require_usable_grid(g);
    if (!(eps > 0) || !std::isfinite(eps)) {
        fail(errc::invalid_argument, "tolerance must be positive and finite");
    }
    if (!(search.hi >= search.lo) || !(search.lo >= 0)) {
        fail(errc::invalid_argument, "search window must be nonnegative and ordered");
    }
    if (!(stride > 0) || !std::isfinite(stride)) {
        fail(errc::invalid_argument, "stride must be positive and finite");
    }
    if (stride < g.step * (1.0 - 1e-9)) {
        fail(errc::invalid_argument, "stride below the sample step");
    }
    double span = g.span();
    if (search.hi > span * (1.0 + 1e-12)) {
        fail(errc::grid_too_short, "search window reaches " + std::to_string(search.hi) +
                                       " but the grid spans " + std::to_string(span));
    }

    // Candidate shifts are multiples of the snapped stride, anchored at zero,
    // so every candidate is a whole number of grid steps.
    auto k = std::max<long long>(1, std::llround(stride / g.step));
    double snapped = static_cast<double>(k) * g.step;
    double slack = 1e-9 * std::max(1.0, snapped);
    auto n = static_cast<long long>(g.size());

    AlmostPeriods out;
    for (auto j = static_cast<long long>(std::ceil((search.lo - slack) / snapped));; ++j) {
        if (j < 0) continue;
        double tau = static_cast<double>(j) * snapped;
        if (tau > search.hi + slack) break;
        long long shift = j * k;
        if (shift >= n) break;
        bool period = true;
        for (long long i = 0; i + shift < n; ++i) {
            if (std::abs(g.values[i + shift] - g.values[i]) >= eps) {
                period = false;
                break;
            }
        }
        if (period) out.periods.push_back(tau);
    }

    if (out.periods.empty()) {
        out.max_gap = infinity;
        return out;
    }
    out.max_gap = std::max(out.periods.front() - search.lo, search.hi - out.periods.back());
    for (std::size_t i = 1; i < out.periods.size(); ++i) {
        out.max_gap = std::max(out.max_gap, out.periods[i] - out.periods[i - 1]);
    }
    return out;
}

ApDisplacement ap_displacement(const ZeroSet& zeros, double density) {
    if (!(density > 0) || !std::isfinite(density)) {
        fail(errc::invalid_argument, "density must be positive and finite");
    }
    SignedIndexing idx = signed_indexing(zeros);

    ApDisplacement out;
    std::vector<Complex> phi_values;
    phi_values.reserve(idx.positions.size());
    for (std::ptrdiff_t index = idx.min_index(); index <= idx.max_index(); ++index) {
        double value = idx.at(index) - static_cast<double>(index) / density;
        out.phi.push_back({index, value});
        out.sup_abs = std::max(out.sup_abs, std::abs(value));
        phi_values.push_back(Complex(value, 0.0));
    }

    // Score the displacement by the density of its integer almost-periods.
    // The tiny floor keeps an exact progression (phi identically zero) from
    // demanding sup < 0.
    auto half = static_cast<double>((phi_values.size() - 1) / 2);
    if (half < 1.0) {
        out.ap_score = infinity;
        QCLAB_INFO("too few zeros to test displacement shifts");
        return out;
    }
    double eps = std::max(0.2 * out.sup_abs, 1e-12);
    auto f = SampledFunction::create(static_cast<double>(idx.min_index()), 1.0,
                                     std::move(phi_values));
    out.ap_score = almost_periods(f, eps, {1.0, half}, 1.0).max_gap;
    return out;
}

}  // namespace qclab
