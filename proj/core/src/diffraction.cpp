#include "qclab/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qclab/errors.hpp"
#include "qclab/logging.hpp"
#include "qclab/zero_finder.hpp"

namespace qclab {

namespace {

// c * e^{exponent} without overflowing the intermediate exponential: the
// coefficients here carry factors like e^{-2 pi gamma s} that the exponent
// undoes, so only the combined magnitude is representable.
Complex amplified(Complex c, double exponent) {
    if (c == Complex{}) return c;
    double log_mag = std::log(std::abs(c)) + exponent;
    if (log_mag > 700.0) {
        fail(errc::truncation_budget_exceeded,
             "amplified line coefficient overflows; lower gamma_max or the height");
    }
    return std::polar(std::exp(log_mag), std::arg(c));
}

}  // namespace

double select_height(const ExponentialSum& q, const ToleranceConfig& cfg) {
    cfg.validate();
    if (q.size() < 2) {
        fail(errc::no_height_found, "height selection needs at least two terms");
    }
    for (double s = 0.25; s <= 64.0; s *= 2.0) {
        if (edge_remainder_norm(q, s, LineSide::upper) < 0.5 &&
            edge_remainder_norm(q, s, LineSide::lower) < 0.5) {
            return s;
        }
    }
    fail(errc::no_height_found, "no height up to 64 tames both edge remainders");
}

AtomicMeasure diffraction_spectrum(const ExponentialSum& q, double height, double gamma_max,
                                   const ToleranceConfig& cfg) {
    cfg.validate();
    if (!(height > 0.0) || !std::isfinite(height)) {
        fail(errc::invalid_argument, "spectrum height must be positive");
    }
    if (!(gamma_max > 0.0) || !std::isfinite(gamma_max)) {
        fail(errc::invalid_argument, "frequency window must be positive");
    }

    // Series tail small enough to survive amplification by e^{2 pi gamma s}.
    // The required target can underflow; then no attainable tail certifies
    // the atoms and the budget is exhausted.
    ToleranceConfig tight = spectrum_tolerances(cfg, gamma_max, height);
    if (std::log(tight.series_tail_target) + two_pi * gamma_max * height >
        std::log(cfg.prune_threshold)) {
        fail(errc::truncation_budget_exceeded,
             "series tail cannot be driven below the amplified prune threshold");
    }

    // The line series only see zeros through their traces on two horizontal
    // lines; a complex zero inside the strip would corrupt every atom.  Check
    // the strip near the origin by comparing against a contour count.
    double span = q.max_frequency() - q.min_frequency();
    if (span > 0.0) {
        double half = std::max(2.0, 5.0 / span);
        find_real_zeros(q, {-half, half}, height, cfg);
    }

    auto upper = log_derivative_series(q, height, LineSide::upper, tight);
    auto lower = log_derivative_series(q, height, LineSide::lower, tight);

    // Union of line frequencies inside the open window, deduplicated.
    std::vector<double> gammas{0.0};
    for (const Term& t : upper.terms()) {
        if (std::abs(t.omega) < gamma_max) gammas.push_back(t.omega);
    }
    for (const Term& t : lower.terms()) {
        if (std::abs(t.omega) < gamma_max) gammas.push_back(t.omega);
    }
    std::sort(gammas.begin(), gammas.end());
    std::vector<double> unique;
    for (double g : gammas) {
        if (unique.empty() || g - unique.back() > cfg.freq_merge_tol) unique.push_back(g);
    }

    std::vector<Atom> atoms;
    atoms.reserve(unique.size());
    double dropped = 0.0;
    for (double g : unique) {
        Complex p = upper.coefficient(g, cfg.freq_merge_tol);
        Complex pt = lower.coefficient(g, cfg.freq_merge_tol);
        Complex diff = amplified(pt, -two_pi * g * height) - amplified(p, two_pi * g * height);
        Complex b = diff * Complex(0.0, -1.0) / two_pi;
        if (std::abs(b) >= cfg.prune_threshold) {
            atoms.push_back({g, b});
        } else {
            dropped += std::abs(b);
        }
    }
    if (dropped > 0.0) {
        QCLAB_INFO("spectrum dropped sub-threshold atom mass " << dropped);
    }
    return AtomicMeasure::create(std::move(atoms), {-gamma_max, gamma_max}, cfg);
}

double check_int_condition(const AtomicMeasure& m_hat, const ToleranceConfig& cfg,
                           std::size_t* excluded_atoms) {
    cfg.validate();
    if (m_hat.window().lo > 0.0 || m_hat.window().hi < 1.0) {
        fail(errc::window_too_small, "integrability check needs the window to contain (0, 1)");
    }
    double sum = 0.0;
    std::size_t excluded = 0;
    for (const Atom& a : m_hat.atoms()) {
        if (a.position <= 0.0 || a.position >= 1.0) continue;
        if (a.position <= cfg.freq_merge_tol) {
            ++excluded;
            continue;
        }
        sum += std::abs(a.mass) / a.position;
    }
    if (excluded_atoms) *excluded_atoms = excluded;
    if (excluded > 0) {
        QCLAB_INFO("integrability check skipped " << excluded
                                                 << " atoms within merge tolerance of zero");
    }
    return sum;
}

double GrowthProfile::max_slope() const {
    double best = 0.0;
    for (const GrowthSample& s : samples) {
        if (std::isfinite(s.log_tv_over_r)) best = std::max(best, s.log_tv_over_r);
    }
    return best;
}

double GrowthProfile::edge_slope() const {
    if (samples.empty() || !std::isfinite(samples.back().log_tv_over_r)) return 0.0;
    return samples.back().log_tv_over_r;
}

GrowthProfile growth_profile(const AtomicMeasure& m_hat, const std::vector<double>& radii) {
    if (radii.empty()) fail(errc::invalid_argument, "growth profile needs at least one radius");
    double reach = std::min(-m_hat.window().lo, m_hat.window().hi);
    GrowthProfile profile;
    profile.samples.reserve(radii.size());
    double prev = 0.0;
    for (double r : radii) {
        if (!(r > prev)) {
            fail(errc::invalid_argument, "growth radii must be positive and strictly increasing");
        }
        if (r > reach) {
            fail(errc::window_too_small, "growth radius " + std::to_string(r) +
                                             " reaches outside the spectrum window");
        }
        prev = r;
        double tv = ball_mass(m_hat, 0.0, r, true).real();
        double slope = tv > 0.0 ? std::log(tv) / r : std::nan("");
        profile.samples.push_back({r, tv, slope});
    }
    return profile;
}

std::vector<HeightAgreement> height_independence_report(const ExponentialSum& q,
                                                        const std::vector<double>& heights,
                                                        double gamma_max,
                                                        const ToleranceConfig& cfg) {
    if (heights.size() < 2) {
        fail(errc::invalid_argument, "height comparison needs at least two heights");
    }
    std::vector<AtomicMeasure> spectra;
    spectra.reserve(heights.size());
    for (double s : heights) spectra.push_back(diffraction_spectrum(q, s, gamma_max, cfg));

    std::vector<HeightAgreement> report;
    for (std::size_t i = 0; i < spectra.size(); ++i) {
        for (std::size_t j = i + 1; j < spectra.size(); ++j) {
            double worst = 0.0;
            auto compare = [&](const AtomicMeasure& a, const AtomicMeasure& b) {
                for (const Atom& atom : a.atoms()) {
                    Complex other = b.mass_at(atom.position, cfg.freq_merge_tol);
                    worst = std::max(worst, std::abs(atom.mass - other));
                }
            };
            compare(spectra[i], spectra[j]);
            compare(spectra[j], spectra[i]);
            report.push_back({heights[i], heights[j], worst});
        }
    }
    return report;
}

}  // namespace qclab
