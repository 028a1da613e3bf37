#include "qclab/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qclab/errors.hpp"
#include "qclab/logging.hpp"

namespace qclab {
namespace {

constexpr double infinity = std::numeric_limits<double>::infinity();
constexpr double match_tol = 1e-9;

void require_increasing_radii(const std::vector<double>& radii) {
    if (radii.empty()) fail(errc::invalid_argument, "need at least one radius");
    double prev = 0.0;
    for (double r : radii) {
        if (!(r > prev) || !std::isfinite(r)) {
            fail(errc::invalid_argument, "radii must be positive, finite and increasing");
        }
        prev = r;
    }
}

void require_ball_in_window(const Window& w, double radius) {
    if (w.lo > -radius || w.hi < radius) {
        fail(errc::window_too_small, "ball of radius " + std::to_string(radius) +
                                         " leaves the window [" + std::to_string(w.lo) + ", " +
                                         std::to_string(w.hi) + "]");
    }
}

}  // namespace

ProbeReport probe_uniqueness(const AtomicMeasure& mu, const AtomicMeasure& nu,
                             const std::vector<double>& radii) {
    require_increasing_radii(radii);
    require_ball_in_window(mu.window(), radii.back());
    require_ball_in_window(nu.window(), radii.back());

    // Total variation of the difference: matched positions contribute the
    // modulus of the mass difference, unmatched ones their full modulus.
    std::vector<RadiusValue> diff;
    const auto& a = mu.atoms();
    const auto& b = nu.atoms();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (i < a.size() && j < b.size() && std::abs(a[i].position - b[j].position) <= match_tol) {
            diff.push_back({a[i].position, std::abs(a[i].mass - b[j].mass)});
            ++i;
            ++j;
        } else if (j == b.size() || (i < a.size() && a[i].position < b[j].position)) {
            diff.push_back({a[i].position, std::abs(a[i].mass)});
            ++i;
        } else {
            diff.push_back({b[j].position, std::abs(b[j].mass)});
            ++j;
        }
    }

    ProbeReport report;
    report.name = "uniqueness";
    report.verdict_metric = infinity;
    for (double r : radii) {
        double total = 0.0;
        for (const RadiusValue& d : diff) {
            if (std::abs(d.radius) < r) total += d.value;
        }
        report.per_radius.push_back({r, total / r});
        report.verdict_metric = std::min(report.verdict_metric, total / r);
    }
    return report;
}

ProbeReport probe_perturbation(const ZeroSet& a, const ZeroSet& c) {
    SignedIndexing ia = signed_indexing(a);
    SignedIndexing ic = signed_indexing(c);

    Window common{std::max(a.window().lo, c.window().lo), std::min(a.window().hi, c.window().hi)};
    if (!(common.hi > common.lo)) fail(errc::invalid_argument, "zero set windows do not overlap");
    double reach = std::min(-common.lo, common.hi);
    if (!(reach > 0)) fail(errc::invalid_argument, "common window does not surround the origin");

    auto inside = [&](const std::vector<double>& positions) {
        long long n = 0;
        for (double p : positions) {
            if (p >= common.lo && p <= common.hi) ++n;
        }
        return n;
    };
    long long na = inside(ia.positions);
    long long nc = inside(ic.positions);
    if (std::abs(na - nc) > 2) {
        fail(errc::count_mismatch, "sets hold " + std::to_string(na) + " and " +
                                       std::to_string(nc) + " points in the common window");
    }

    ProbeReport report;
    report.name = "perturbation";
    for (int k = 1; k <= 4; ++k) report.per_radius.push_back({0.25 * k * reach, 0.0});

    std::ptrdiff_t lo = std::max(ia.min_index(), ic.min_index());
    std::ptrdiff_t hi = std::min(ia.max_index(), ic.max_index());
    for (std::ptrdiff_t n = lo; n <= hi; ++n) {
        double pos = std::abs(ia.at(n));
        double d = std::abs(ia.at(n) - ic.at(n));
        for (RadiusValue& shell : report.per_radius) {
            if (pos <= shell.radius) {
                shell.value = std::max(shell.value, d);
                break;
            }
        }
    }
    report.verdict_metric = report.per_radius.back().value;
    return report;
}

namespace {

struct Clustering {
    int clusters = 0;
    double max_width = 0.0;
    std::size_t min_members = 0;
};

// Clusters sorted residues on the circle of circumference `period`, cutting
// at gaps wider than the threshold.  When no gap exceeds it the points form
// one cluster whose width is the tightest covering arc.
Clustering cluster_modulo(const std::vector<double>& residues, double period, double threshold) {
    std::size_t n = residues.size();
    if (n == 1) return {1, 0.0, 1};

    std::size_t widest = n - 1;  // gap between back() and front() + period
    double widest_gap = residues.front() + period - residues.back();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double gap = residues[i + 1] - residues[i];
        if (gap > widest_gap) {
            widest_gap = gap;
            widest = i;
        }
    }
    if (widest_gap <= threshold) {
        return {1, period - widest_gap, n};
    }

    // Unroll the circle starting just past the widest gap.
    std::size_t start = (widest + 1) % n;
    Clustering out;
    out.min_members = n;
    double first = 0.0;
    double prev = 0.0;
    std::size_t members = 0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t idx = (start + k) % n;
        double u = residues[idx] + (idx < start ? period : 0.0);
        if (k == 0 || u - prev > threshold) {
            if (k > 0) {
                out.max_width = std::max(out.max_width, prev - first);
                out.min_members = std::min(out.min_members, members);
            }
            ++out.clusters;
            first = u;
            members = 0;
        }
        prev = u;
        ++members;
    }
    out.max_width = std::max(out.max_width, prev - first);
    out.min_members = std::min(out.min_members, members);
    return out;
}

}  // namespace

ProbeReport probe_lattice_structure(const ZeroSet& zs, const AtomicMeasure& m_hat,
                                    const ToleranceConfig& cfg) {
    cfg.validate();
    if (zs.entries().size() < 2) fail(errc::invalid_argument, "need at least two zeros");
    if (!(min_gap(zs) > 0)) {
        fail(errc::invalid_argument, "zeros must be simple and separated");
    }
    double len = zs.window().length();

    double strongest = 0.0;
    for (const Atom& atom : m_hat.atoms()) {
        if (atom.position > cfg.freq_merge_tol) {
            strongest = std::max(strongest, std::abs(atom.mass));
        }
    }
    if (strongest == 0.0) {
        fail(errc::no_candidate_periods, "spectrum has no positive-frequency atoms");
    }

    struct Candidate {
        double period;
        double strength;
    };
    std::vector<Candidate> candidates;
    for (const Atom& atom : m_hat.atoms()) {
        if (atom.position <= cfg.freq_merge_tol) continue;
        if (std::abs(atom.mass) < 0.25 * strongest) continue;
        double period = 1.0 / atom.position;
        // A period needs a few repetitions inside the window to be testable.
        if (len < 3.0 * period) continue;
        candidates.push_back({period, std::abs(atom.mass)});
    }
    if (candidates.empty()) {
        fail(errc::no_candidate_periods, "window too short for every dominant period");
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
        if (x.strength != y.strength) return x.strength > y.strength;
        return x.period > y.period;
    });
    if (candidates.size() > 8) candidates.resize(8);
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& x, const Candidate& y) { return x.period < y.period; });

    ProbeReport report;
    report.name = "lattice-structure";
    report.verdict_metric = infinity;
    int best_clusters = 0;
    for (const Candidate& cand : candidates) {
        std::vector<double> residues;
        residues.reserve(zs.entries().size());
        for (const ZeroEntry& z : zs.entries()) {
            double r = z.position - cand.period * std::floor(z.position / cand.period);
            residues.push_back(std::min(r, cand.period));
        }
        std::sort(residues.begin(), residues.end());
        Clustering cl = cluster_modulo(residues, cand.period, cand.period / 32.0);

        double expected_members = len / cand.period - 1.0;
        bool qualified = cl.clusters <= 8 &&
                         static_cast<double>(cl.min_members) >= 0.8 * expected_members;
        double value = qualified ? cl.max_width : infinity;
        report.per_radius.push_back({cand.period, value});
        if (value < report.verdict_metric) {
            report.verdict_metric = value;
            best_clusters = cl.clusters;
        }
    }
    if (std::isfinite(report.verdict_metric)) {
        QCLAB_INFO("lattice probe: " << best_clusters << " progressions, width "
                                     << report.verdict_metric);
    } else {
        QCLAB_INFO("lattice probe: no candidate period explains the zeros");
    }
    return report;
}

ProbeReport probe_mass_growth(const AtomicMeasure& mu, const std::vector<double>& radii) {
    require_increasing_radii(radii);
    require_ball_in_window(mu.window(), radii.back());

    ProbeReport report;
    report.name = "mass-growth";
    report.verdict_metric = infinity;
    for (double r : radii) {
        double value = ball_mass(mu, 0.0, r, true).real() / r;
        report.per_radius.push_back({r, value});
        report.verdict_metric = std::min(report.verdict_metric, value);
    }
    return report;
}

}  // namespace qclab
