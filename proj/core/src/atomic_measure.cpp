#include "qclab/atomic_measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "qclab/errors.hpp"

namespace qclab {

namespace {

// First index whose position is strictly greater than x.
std::size_t index_above(const std::vector<Atom>& atoms, double x) {
    return std::upper_bound(atoms.begin(), atoms.end(), x,
                            [](double v, const Atom& a) { return v < a.position; }) -
           atoms.begin();
}

// First index whose position is >= x.
std::size_t index_at_or_above(const std::vector<Atom>& atoms, double x) {
    return std::lower_bound(atoms.begin(), atoms.end(), x,
                            [](const Atom& a, double v) { return a.position < v; }) -
           atoms.begin();
}

}  // namespace

AtomicMeasure AtomicMeasure::create(std::vector<Atom> atoms, Window window,
                                    const ToleranceConfig& cfg) {
    cfg.validate();
    if (!(window.lo < window.hi) || !std::isfinite(window.lo) || !std::isfinite(window.hi)) {
        fail(errc::invalid_argument, "measure window must be a finite interval");
    }
    for (const Atom& a : atoms) {
        if (!std::isfinite(a.position) || !std::isfinite(a.mass.real()) ||
            !std::isfinite(a.mass.imag())) {
            fail(errc::invalid_argument, "measure atoms must be finite");
        }
        if (!window.contains(a.position)) {
            fail(errc::invalid_argument, "atom outside the measure window");
        }
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.position < b.position; });

    std::vector<Atom> merged;
    merged.reserve(atoms.size());
    std::size_t i = 0;
    while (i < atoms.size()) {
        std::size_t j = i + 1;
        while (j < atoms.size() && atoms[j].position - atoms[j - 1].position <= cfg.freq_merge_tol)
            ++j;
        Complex sum{};
        double weighted = 0.0;
        double weight = 0.0;
        for (std::size_t k = i; k < j; ++k) {
            sum += atoms[k].mass;
            double w = std::abs(atoms[k].mass);
            weighted += w * atoms[k].position;
            weight += w;
        }
        if (sum != Complex{}) {
            double pos = atoms[i].position;
            if (j - i > 1) {
                pos = weight > 0.0 ? weighted / weight
                                   : 0.5 * (atoms[i].position + atoms[j - 1].position);
            }
            merged.push_back({pos, sum});
        }
        i = j;
    }
    return AtomicMeasure(std::move(merged), window);
}

double AtomicMeasure::total_variation() const {
    double tv = 0.0;
    for (const Atom& a : atoms_) tv += std::abs(a.mass);
    return tv;
}

Complex AtomicMeasure::mass_at(double position, double tol) const {
    std::size_t lo = index_at_or_above(atoms_, position - tol);
    Complex best{};
    double best_dist = tol;
    for (std::size_t i = lo; i < atoms_.size() && atoms_[i].position <= position + tol; ++i) {
        double d = std::abs(atoms_[i].position - position);
        if (d <= best_dist) {
            best_dist = d;
            best = atoms_[i].mass;
        }
    }
    return best;
}

AtomicMeasure comb_measure(const ZeroSet& zs) {
    std::vector<Atom> atoms;
    atoms.reserve(zs.entries().size());
    for (const ZeroEntry& e : zs.entries()) {
        atoms.push_back({e.position, Complex(static_cast<double>(e.multiplicity), 0.0)});
    }
    return AtomicMeasure::create(std::move(atoms), zs.window(), ToleranceConfig{});
}

Complex ball_mass(const AtomicMeasure& m, double center, double radius, bool absolute) {
    if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(center)) {
        fail(errc::invalid_argument, "ball must have positive finite radius");
    }
    if (center - radius < m.window().lo || center + radius > m.window().hi) {
        fail(errc::ball_exceeds_window, "ball of radius " + std::to_string(radius) +
                                            " does not fit inside the measure window");
    }
    const auto& atoms = m.atoms();
    std::size_t lo = index_above(atoms, center - radius);
    std::size_t hi = index_at_or_above(atoms, center + radius);
    Complex sum{};
    double abs_sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        sum += atoms[i].mass;
        abs_sum += std::abs(atoms[i].mass);
    }
    return absolute ? Complex(abs_sum, 0.0) : sum;
}

AtomicMeasure shift(const AtomicMeasure& m, double h) {
    if (!std::isfinite(h)) fail(errc::invalid_argument, "shift must be finite");
    std::vector<Atom> atoms = m.atoms();
    for (Atom& a : atoms) a.position += h;
    return AtomicMeasure(std::move(atoms), Window{m.window().lo + h, m.window().hi + h});
}

DensityEstimate density(const ZeroSet& zs, double probe_length) {
    if (!(probe_length > 0.0) || !std::isfinite(probe_length)) {
        fail(errc::invalid_argument, "probe length must be positive and finite");
    }
    const Window w = zs.window();
    if (probe_length > 0.5 * w.length()) {
        fail(errc::window_too_short, "probe length exceeds half the zero set window");
    }

    // Positions with multiplicity prefix sums, so a probe count is a
    // difference of two binary searches.
    std::vector<double> pos;
    std::vector<long long> prefix{0};
    pos.reserve(zs.entries().size());
    for (const ZeroEntry& e : zs.entries()) {
        pos.push_back(e.position);
        prefix.push_back(prefix.back() + e.multiplicity);
    }
    auto count_open = [&](double t) {
        std::size_t lo = std::upper_bound(pos.begin(), pos.end(), t) - pos.begin();
        std::size_t hi = std::lower_bound(pos.begin(), pos.end(), t + probe_length) - pos.begin();
        return prefix[hi] - prefix[lo];
    };

    const double t_max = w.hi - probe_length;
    std::vector<double> events;
    events.reserve(2 * pos.size() + 2);
    events.push_back(w.lo);
    events.push_back(t_max);
    for (double p : pos) {
        if (p >= w.lo && p <= t_max) events.push_back(p);
        double q = p - probe_length;
        if (q >= w.lo && q <= t_max) events.push_back(q);
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    long long min_count = count_open(events.front());
    long long max_count = min_count;
    auto visit = [&](double t) {
        long long c = count_open(t);
        min_count = std::min(min_count, c);
        max_count = std::max(max_count, c);
    };
    for (std::size_t i = 0; i < events.size(); ++i) {
        visit(events[i]);
        if (i + 1 < events.size()) visit(0.5 * (events[i] + events[i + 1]));
    }

    DensityEstimate est;
    est.low = static_cast<double>(min_count) / probe_length;
    est.high = static_cast<double>(max_count) / probe_length;
    est.density = 0.5 * (est.low + est.high);
    est.uncertainty = 0.5 * (est.high - est.low);
    return est;
}

namespace {

ConvolutionValue convolve_supported(const AtomicMeasure& m, double t, double support_radius,
                                    double tail_bound, const std::function<Complex(double)>& f) {
    if (t - support_radius < m.window().lo || t + support_radius > m.window().hi) {
        fail(errc::support_exceeds_window,
             "kernel support around t = " + std::to_string(t) + " leaves the measure window");
    }
    const auto& atoms = m.atoms();
    std::size_t lo = index_at_or_above(atoms, t - support_radius);
    Complex value{};
    for (std::size_t i = lo; i < atoms.size() && atoms[i].position <= t + support_radius; ++i) {
        value += atoms[i].mass * f(t - atoms[i].position);
    }
    return {value, tail_bound};
}

}  // namespace

ConvolutionValue convolve(const AtomicMeasure& m, const TestFunction& f, double t) {
    double tail = f.tail_bound() * m.total_variation();
    return convolve_supported(m, t, f.truncation_radius(), tail,
                              [&](double x) { return f.eval(x); });
}

ConvolutionValue convolve(const AtomicMeasure& m, const TriangleKernel& k, double t) {
    return convolve_supported(m, t, k.half_width(), 0.0,
                              [&](double x) { return Complex(k.eval(x), 0.0); });
}

double translation_bound(const AtomicMeasure& m) {
    if (m.window().length() < 2.0) {
        fail(errc::window_too_short, "translation bound needs a window of length at least 2");
    }
    const auto& atoms = m.atoms();
    // Atoms a rounding error away from the open ball boundary stay outside:
    // lattice spacings that are not exactly representable would otherwise
    // leak boundary atoms into the count.
    const double snap = 1e-9;
    double best = 0.0;
    for (const Atom& c : atoms) {
        if (c.position < m.window().lo + 1.0 || c.position > m.window().hi - 1.0) continue;
        std::size_t lo = index_at_or_above(atoms, c.position - 1.0 + snap);
        double sum = 0.0;
        for (std::size_t i = lo;
             i < atoms.size() && atoms[i].position <= c.position + 1.0 - snap; ++i) {
            sum += std::abs(atoms[i].mass);
        }
        best = std::max(best, sum);
    }
    return best;
}

}  // namespace qclab
