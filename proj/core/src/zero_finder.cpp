#include "qclab/zero_finder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qclab/errors.hpp"
#include "qclab/logging.hpp"

namespace qclab {
namespace {

constexpr double machine_eps = std::numeric_limits<double>::epsilon();

struct Eval {
    Complex value;
    Complex deriv;
};

Eval eval_with_derivative(const ExponentialSum& q, Complex z) {
    Eval e{};
    for (const Term& t : q.terms()) {
        Complex rate(0.0, two_pi * t.omega);
        Complex w = t.coeff * std::exp(rate * z);
        e.value += w;
        e.deriv += rate * w;
    }
    return e;
}

// Upper bound for |Q''| on a horizontal strip of half-height w.
double second_derivative_bound(const ExponentialSum& q, double w) {
    double bound = 0.0;
    for (const Term& t : q.terms()) {
        double a = two_pi * std::abs(t.omega);
        bound += std::abs(t.coeff) * a * a * std::exp(a * w);
    }
    return bound;
}

// First-order distance from z to the nearest zero.  Away from zeros it is
// at least 1 / (2 pi max|omega|) however large the strip edges grow, so it
// works on full-strip contours and on tiny boxes around a zero alike.
double newton_clearance(const Eval& ev) {
    double mag = std::abs(ev.value);
    double dmag = std::abs(ev.deriv);
    if (dmag > 0.0) return mag / dmag;
    return mag > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

struct ContourEstimate {
    double winding;
    double clearance;
};

ContourEstimate integrate_boundary(const ExponentialSum& q, const Rectangle& rect, double step) {
    Complex corners[4] = {{rect.x_lo, -rect.y_half},
                          {rect.x_hi, -rect.y_half},
                          {rect.x_hi, rect.y_half},
                          {rect.x_lo, rect.y_half}};
    Complex integral{};
    double clearance = std::numeric_limits<double>::infinity();
    for (int e = 0; e < 4; ++e) {
        Complex a = corners[e];
        Complex b = corners[(e + 1) % 4];
        double length = std::abs(b - a);
        auto n = static_cast<std::size_t>(std::max(8.0, std::ceil(length / step)));
        Complex dz = (b - a) / static_cast<double>(n);
        Complex edge{};
        for (std::size_t j = 0; j <= n; ++j) {
            Complex z = a + dz * static_cast<double>(j);
            Eval ev = eval_with_derivative(q, z);
            clearance = std::min(clearance, newton_clearance(ev));
            double weight = (j == 0 || j == n) ? 0.5 : 1.0;
            edge += weight * (ev.deriv / ev.value);
        }
        integral += edge * dz;
    }
    return {integral.imag() / two_pi, clearance};
}

}  // namespace

int argument_principle_count(const ExponentialSum& q, const Rectangle& rect,
                             const ToleranceConfig& cfg) {
    cfg.validate();
    if (q.empty()) fail(errc::empty_series, "argument principle count of an empty sum");
    if (!(rect.x_hi > rect.x_lo) || !(rect.y_half > 0)) {
        fail(errc::invalid_argument, "degenerate rectangle");
    }

    double prev = std::numeric_limits<double>::quiet_NaN();
    long long prev_round = -1;
    double step = cfg.quadrature_step;
    for (int level = 0; level < 20; ++level) {
        ContourEstimate est = integrate_boundary(q, rect, step);
        if (!(est.clearance > 10.0 * cfg.root_tol)) {
            fail(errc::boundary_too_close_to_zero,
                 "contour passes within " + std::to_string(est.clearance) + " of a zero");
        }
        long long rounded = std::llround(est.winding);
        if (level > 0 && std::abs(est.winding - static_cast<double>(rounded)) <= 0.25 &&
            std::abs(est.winding - prev) <= 0.25 && rounded == prev_round) {
            if (rounded < 0) {
                fail(errc::quadrature_not_converged,
                     "negative winding " + std::to_string(est.winding));
            }
            return static_cast<int>(rounded);
        }
        prev = est.winding;
        prev_round = rounded;
        step *= 0.5;
    }
    fail(errc::quadrature_not_converged, "winding estimate did not settle");
}

namespace {

// Moves outward from `anchor` in steps that are deliberately non-round
// fractions of h until the vertical segment through x is clear of zeros.
double pick_clear_abscissa(const ExponentialSum& q, double anchor, double direction, double h,
                           double strip, const ToleranceConfig& cfg) {
    for (int j = 0; j < 12; ++j) {
        double x = anchor + direction * (0.29 + 0.37 * j) * h;
        double clearance = std::numeric_limits<double>::infinity();
        constexpr int samples = 64;
        for (int k = 0; k <= samples; ++k) {
            double y = -strip + 2.0 * strip * k / samples;
            Eval ev = eval_with_derivative(q, Complex(x, y));
            clearance = std::min(clearance, newton_clearance(ev));
        }
        if (clearance > 1e5 * cfg.root_tol) return x;
    }
    fail(errc::boundary_too_close_to_zero,
         "no clear vertical boundary near " + std::to_string(anchor));
}

struct NewtonResult {
    Complex z;
    Eval at_z;
    bool converged = false;
};

NewtonResult newton_refine(const ExponentialSum& q, double seed, const ToleranceConfig& cfg,
                           double x_lo, double x_hi, double strip, double residual_floor) {
    Complex z(seed, 0.0);
    NewtonResult best{};
    double best_mag = std::numeric_limits<double>::infinity();
    int settled = 0;
    for (int it = 0; it < 80; ++it) {
        Eval e = eval_with_derivative(q, z);
        double mag = std::abs(e.value);
        if (mag < best_mag) {
            best = {z, e, false};
            best_mag = mag;
        }
        double dmag = std::abs(e.deriv);
        if (dmag == 0.0) break;
        Complex step = e.value / e.deriv;
        z -= step;
        if (std::abs(z.imag()) > 2.0 * strip + 1.0 || z.real() < x_lo - 1.0 ||
            z.real() > x_hi + 1.0) {
            break;
        }
        double accept = std::max(cfg.root_tol, 8.0 * machine_eps * std::max(1.0, std::abs(z)));
        if (std::abs(step) <= accept) {
            if (++settled >= 2) return {z, eval_with_derivative(q, z), true};
        } else {
            settled = 0;
        }
    }
    // At a zero of multiplicity three or more the steps stall at eps^(1/m)
    // and never meet the step test; the best visit is still a zero within
    // rounding noise when its residual sits at the evaluation floor.
    if (best_mag <= residual_floor) best.converged = true;
    return best;
}

struct ScanOutcome {
    std::vector<ZeroEntry> entries;
    long long found_total = 0;
    long long cover_total = 0;
};

ScanOutcome scan_once(const ExponentialSum& q, const Window& window, double strip,
                      const ToleranceConfig& cfg, double h) {
    double x_lo = pick_clear_abscissa(q, window.lo, -1.0, h, strip, cfg);
    double x_hi = pick_clear_abscissa(q, window.hi, 1.0, h, strip, cfg);

    auto n = static_cast<std::size_t>(std::max(16.0, std::ceil((x_hi - x_lo) / h)));
    std::vector<double> mags(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(n);
        mags[i] = std::abs(q.evaluate(Complex(x, 0.0)));
    }

    struct Candidate {
        double x;
        double u;
    };
    std::vector<Candidate> candidates;
    std::vector<Complex> off_axis;
    double residual_floor =
        4.0 * static_cast<double>(q.size()) * machine_eps * q.wiener_norm();
    auto consider_seed = [&](std::size_t i) {
        double seed = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(n);
        NewtonResult r = newton_refine(q, seed, cfg, x_lo, x_hi, strip, residual_floor);
        if (!r.converged) return;
        if (r.z.real() <= x_lo || r.z.real() >= x_hi) return;
        // Rounding noise splits a real zero of multiplicity m into m simple
        // zeros of the evaluated function on a ring of radius (noise)^(1/m),
        // and Newton converges to those.  Moving such a zero back onto the
        // axis changes the function by about |Q'| |Im z|, so the candidate
        // folds exactly when that change hides below the noise floor; a
        // genuine complex zero exceeds the floor by orders of magnitude.
        double y = std::abs(r.z.imag());
        double axis_tol = std::max(10.0 * cfg.root_tol,
                                   3.0 * std::sqrt(machine_eps) * std::max(1.0, std::abs(r.z)));
        if (y > axis_tol && std::abs(r.at_z.deriv) * y > 10.0 * residual_floor) {
            if (y <= strip) off_axis.push_back(r.z);
            return;
        }
        // The fold offset bounds how far this candidate can sit from the
        // real zero it stands for; siblings of one split zero then overlap.
        candidates.push_back({r.z.real(), axis_tol + 3.0 * y});
    };
    for (std::size_t i = 0; i <= n; ++i) {
        bool left_ok = i == 0 || mags[i] <= mags[i - 1];
        bool right_ok = i == n || mags[i] <= mags[i + 1];
        if (left_ok && right_ok) consider_seed(i);
    }

    if (!off_axis.empty()) {
        fail(errc::non_real_zero_detected,
             "zero at imaginary part " + std::to_string(off_axis.front().imag()));
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.x < b.x; });
    // Candidates for one zero scatter within their uncertainties, so two of
    // them belong together whenever their uncertainty intervals overlap.
    struct Position {
        double x;
        double spread;
    };
    std::vector<Position> distinct;
    std::vector<Candidate> cluster;
    auto flush_cluster = [&] {
        if (cluster.empty()) return;
        double mean = 0.0;
        for (const Candidate& c : cluster) mean += c.x;
        mean /= static_cast<double>(cluster.size());
        double spread = 0.0;
        for (const Candidate& c : cluster) {
            spread = std::max(spread, std::abs(c.x - mean) + c.u);
        }
        distinct.push_back({mean, spread});
        cluster.clear();
    };
    for (const Candidate& c : candidates) {
        if (!cluster.empty() && c.x - cluster.back().x > c.u + cluster.back().u) flush_cluster();
        cluster.push_back(c);
    }
    flush_cluster();

    ScanOutcome out;
    for (std::size_t k = 0; k < distinct.size(); ++k) {
        double x = distinct[k].x;
        double gap = std::min(k > 0 ? x - distinct[k - 1].x : x - x_lo,
                              k + 1 < distinct.size() ? distinct[k + 1].x - x : x_hi - x);
        // The certification box must cover the cluster's own spread or the
        // winding count could miss the zero it stands for.
        double w = std::min(std::max({10.0 * cfg.root_tol, 1e-7, 2.0 * distinct[k].spread}),
                            0.45 * gap);

        int mult = 0;
        Eval e = eval_with_derivative(q, Complex(x, 0.0));
        // Simple-zero certificate: Q' bounded away from zero on the whole box
        // rules out both multiple zeros and a second zero inside it.
        if (std::sqrt(2.0) * w * second_derivative_bound(q, w) <= 0.5 * std::abs(e.deriv)) {
            mult = 1;
        } else {
            for (int expand = 0; expand < 3 && mult == 0; ++expand) {
                double we = std::min(w * std::pow(4.0, expand), 0.45 * gap);
                try {
                    mult = argument_principle_count(q, {x - we, x + we, we}, cfg);
                } catch (const error& err) {
                    if (err.code() != errc::boundary_too_close_to_zero) throw;
                }
                if (we == 0.45 * gap) break;
            }
            if (mult == 0) {
                QCLAB_DEBUG("discarding spurious candidate at " << x);
                continue;
            }
        }
        out.entries.push_back({x, mult});
        out.found_total += mult;
    }

    out.cover_total = argument_principle_count(q, {x_lo, x_hi, strip}, cfg);
    QCLAB_DEBUG("scan h=" << h << ": " << out.entries.size() << " positions, found "
                          << out.found_total << ", cover " << out.cover_total);
    return out;
}

}  // namespace

ZeroSet find_real_zeros(const ExponentialSum& q, Window window, double strip_half_height,
                        const ToleranceConfig& cfg) {
    cfg.validate();
    if (q.empty()) fail(errc::empty_series, "zero search on an empty sum");
    if (!(window.hi >= window.lo)) fail(errc::invalid_argument, "window is reversed");
    if (!(strip_half_height > 0)) fail(errc::invalid_argument, "strip height must be positive");
    if (q.size() == 1) return ZeroSet::create({}, window);

    double span = q.max_frequency() - q.min_frequency();
    double base_h = std::min(cfg.quadrature_step, 1.0 / (8.0 * span));

    ScanOutcome outcome;
    for (int attempt = 0; attempt < 3; ++attempt) {
        outcome = scan_once(q, window, strip_half_height, cfg, base_h / std::pow(4.0, attempt));
        if (outcome.found_total == outcome.cover_total) {
            std::vector<ZeroEntry> kept;
            for (const ZeroEntry& z : outcome.entries) {
                double slack_lo = cfg.root_tol * std::max(1.0, std::abs(window.lo));
                double slack_hi = cfg.root_tol * std::max(1.0, std::abs(window.hi));
                if (z.position < window.lo - slack_lo || z.position > window.hi + slack_hi) {
                    continue;
                }
                kept.push_back({std::clamp(z.position, window.lo, window.hi), z.multiplicity});
            }
            return ZeroSet::create(std::move(kept), window);
        }
        QCLAB_INFO("zero scan mismatch (found " << outcome.found_total << ", boxed "
                                                << outcome.cover_total << "), refining grid");
    }
    if (outcome.cover_total > outcome.found_total) {
        fail(errc::non_real_zero_detected,
             std::to_string(outcome.cover_total - outcome.found_total) +
                 " zeros in the strip are unaccounted for on the axis");
    }
    fail(errc::convergence_failure, "located more zeros than the covering count admits");
}

ZeroSet ZeroSet::create(std::vector<ZeroEntry> entries, Window window) {
    if (!(window.hi >= window.lo)) fail(errc::invalid_argument, "window is reversed");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].multiplicity < 1) {
            fail(errc::invalid_argument, "multiplicity must be at least one");
        }
        if (!window.contains(entries[i].position)) {
            fail(errc::invalid_argument, "zero outside the window");
        }
        if (i > 0 && !(entries[i].position > entries[i - 1].position)) {
            fail(errc::invalid_argument, "positions must increase strictly");
        }
    }
    ZeroSet zs;
    zs.entries_ = std::move(entries);
    zs.window_ = window;
    return zs;
}

std::size_t ZeroSet::total_count() const {
    std::size_t total = 0;
    for (const ZeroEntry& z : entries_) total += static_cast<std::size_t>(z.multiplicity);
    return total;
}

std::size_t ZeroSet::max_per_unit_interval() const {
    std::size_t best = 0;
    std::size_t j = 0;
    std::size_t running = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (j < i) j = i;
        while (j < entries_.size() && entries_[j].position <= entries_[i].position + 1.0) {
            running += static_cast<std::size_t>(entries_[j].multiplicity);
            ++j;
        }
        best = std::max(best, running);
        running -= static_cast<std::size_t>(entries_[i].multiplicity);
    }
    return best;
}

double min_gap(const ZeroSet& zeros) {
    const auto& entries = zeros.entries();
    if (entries.size() < 2) {
        fail(errc::not_enough_points, "min_gap needs two distinct zero positions");
    }
    for (const ZeroEntry& z : entries) {
        if (z.multiplicity >= 2) return 0.0;
    }
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < entries.size(); ++i) {
        gap = std::min(gap, entries[i].position - entries[i - 1].position);
    }
    return gap;
}

double SignedIndexing::at(std::ptrdiff_t n) const {
    std::ptrdiff_t idx = origin + n;
    if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(positions.size())) {
        fail(errc::invalid_argument, "signed index " + std::to_string(n) + " out of range");
    }
    return positions[static_cast<std::size_t>(idx)];
}

SignedIndexing signed_indexing(const ZeroSet& zeros) {
    if (zeros.entries().empty()) fail(errc::empty_zero_set, "indexing an empty zero set");
    SignedIndexing idx;
    for (const ZeroEntry& z : zeros.entries()) {
        for (int m = 0; m < z.multiplicity; ++m) idx.positions.push_back(z.position);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < idx.positions.size(); ++i) {
        if (std::abs(idx.positions[i]) < std::abs(idx.positions[best])) best = i;
    }
    idx.origin = static_cast<std::ptrdiff_t>(best);
    return idx;
}

}  // namespace qclab
