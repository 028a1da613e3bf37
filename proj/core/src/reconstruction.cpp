#include "qclab/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qclab/diffraction.hpp"
#include "qclab/errors.hpp"
#include "qclab/logging.hpp"

namespace qclab {

namespace {

struct PairedView {
    SignedIndexing idx;
    long long pairs_available = 0;
};

PairedView paired_view(const ZeroSet& zs) {
    PairedView v{signed_indexing(zs), 0};
    v.pairs_available = std::min(v.idx.max_index(), -v.idx.min_index());
    return v;
}

// First-order continuation of the observed zero density past the last pair.
double pair_tail_estimate(const SignedIndexing& idx, long long pairs, Complex z) {
    if (pairs < 1) return 0.0;
    double hi = idx.at(pairs);
    double lo = idx.at(-pairs);
    double span = hi - lo;
    if (!(span > 0.0)) return 0.0;
    double density = (2.0 * pairs + 1.0) / span;
    double reach = std::min(std::abs(hi), std::abs(lo));
    if (!(reach > 0.0)) return 0.0;
    return 2.0 * std::abs(z) * density / reach;
}

}  // namespace

SeriesValue canonical_product_eval(const ZeroSet& zs, Complex z, std::size_t pair_count) {
    auto v = paired_view(zs);
    if (v.pairs_available < static_cast<long long>(pair_count)) {
        fail(errc::insufficient_zeros,
             "zero set has " + std::to_string(v.pairs_available) + " pairs, need " +
                 std::to_string(pair_count));
    }
    long long pairs = static_cast<long long>(pair_count);
    for (long long n = -pairs; n <= pairs; ++n) {
        if (v.idx.at(n) == 0.0) {
            fail(errc::zero_at_origin, "canonical product cannot normalize across a zero at 0");
        }
    }
    Complex value = Complex(1.0, 0.0) - z / v.idx.at(0);
    for (long long n = 1; n <= pairs; ++n) {
        value *= (Complex(1.0, 0.0) - z / v.idx.at(n)) * (Complex(1.0, 0.0) - z / v.idx.at(-n));
    }
    return {value, std::abs(value) * pair_tail_estimate(v.idx, pairs, z)};
}

SeriesValue log_derivative_partial_fractions(const ZeroSet& zs, Complex z,
                                             std::size_t pair_count) {
    auto v = paired_view(zs);
    long long pairs = std::min<long long>(static_cast<long long>(pair_count), v.pairs_available);
    auto term = [&](long long n) {
        Complex d = z - v.idx.at(n);
        if (d == Complex{}) {
            fail(errc::evaluation_at_zero, "partial fractions evaluated on a zero");
        }
        return Complex(1.0, 0.0) / d;
    };
    Complex sum = term(0);
    for (long long n = 1; n <= pairs; ++n) sum += term(n) + term(-n);
    return {sum, pair_tail_estimate(v.idx, pairs, z)};
}

Complex log_derivative_from_spectrum(const AtomicMeasure& m_hat, double density, Complex z) {
    if (!(z.imag() > 0.0)) {
        fail(errc::non_positive_imaginary_part,
             "spectrum-side logarithmic derivative converges only above the real axis");
    }
    Complex sum{};
    for (const Atom& a : m_hat.atoms()) {
        if (a.position <= 0.0) continue;
        sum += a.mass * std::exp(Complex(0.0, two_pi * a.position) * z);
    }
    return Complex(0.0, -two_pi) * sum - Complex(0.0, pi * density);
}

SeriesValue reciprocal_sum_diagnostic(const ZeroSet& zs, std::size_t pair_count) {
    auto v = paired_view(zs);
    long long pairs = std::min<long long>(static_cast<long long>(pair_count), v.pairs_available);
    auto reciprocal = [&](long long n) {
        double a = v.idx.at(n);
        if (a == 0.0) fail(errc::zero_at_origin, "reciprocal sum undefined for a zero at 0");
        return Complex(1.0 / a, 0.0);
    };
    Complex sum = reciprocal(0);
    Complex last{};
    for (long long n = 1; n <= pairs; ++n) {
        last = reciprocal(n) + reciprocal(-n);
        sum += last;
    }
    return {sum, std::abs(last)};
}

Reconstruction reconstruct_series(const AtomicMeasure& m_hat, double density, double height,
                                  const ToleranceConfig& cfg, double int_condition_cap) {
    cfg.validate();
    if (!(density > 0.0) || !std::isfinite(density)) {
        fail(errc::invalid_argument, "density must be positive");
    }
    if (!(height > 0.0) || !std::isfinite(height)) {
        fail(errc::invalid_argument, "height must be positive");
    }

    Reconstruction rec;
    rec.height = height;
    rec.density = density;

    // Growth gate: the edge sample is the least contaminated estimate of the
    // exponential growth rate; the factor 2 is the safety margin the damping
    // needs to dominate it.
    double reach = std::min(-m_hat.window().lo, m_hat.window().hi);
    if (reach > 0.0 && !m_hat.empty()) {
        auto profile =
            growth_profile(m_hat, {0.25 * reach, 0.5 * reach, 0.75 * reach, 0.9999 * reach});
        double slope = profile.edge_slope();
        if (height < 2.0 * slope) {
            fail(errc::height_too_low, "height " + std::to_string(height) +
                                           " is below twice the observed growth slope " +
                                           std::to_string(slope));
        }
    }

    if (m_hat.window().lo <= 0.0 && m_hat.window().hi >= 1.0) {
        rec.int_condition = check_int_condition(m_hat, cfg);
        if (!(rec.int_condition <= int_condition_cap)) {
            fail(errc::int_condition_diverging,
                 "low-frequency spectrum sum " + std::to_string(rec.int_condition) +
                     " exceeds the cap " + std::to_string(int_condition_cap));
        }
    }

    Complex at_zero = m_hat.mass_at(0.0, cfg.freq_merge_tol);
    if (at_zero != Complex{}) {
        rec.density_disagreement = std::abs(at_zero - Complex(density, 0.0));
        if (rec.density_disagreement > 1e-6 * std::max(1.0, density)) {
            QCLAB_INFO("supplied density " << density << " disagrees with the spectrum atom "
                                           << at_zero.real() << " at 0 by "
                                           << rec.density_disagreement);
        }
    }

    // Log-series G over the positive atoms, kept undamped: the damping to the
    // line and the amplification of the remap cancel coefficient by
    // coefficient, so running the exponential on undamped terms avoids both.
    std::vector<Term> g_terms;
    Complex c_damped{};
    for (const Atom& a : m_hat.atoms()) {
        if (a.position <= cfg.freq_merge_tol) continue;
        Complex coeff = -a.mass / a.position;
        g_terms.push_back({a.position, coeff});
        rec.log_series_norm += std::abs(coeff);
        c_damped -= coeff * std::exp(-two_pi * a.position * height);
    }
    auto g = ExponentialSum::normalized(std::move(g_terms), cfg);
    auto e = exp_sum(g, cfg);

    rec.line_series = scale(restrict_to_line(e, height), std::exp(c_damped));

    // Continuing back to the real axis keeps only frequencies in [0, density]:
    // the true line series lives there, everything above is truncation debris
    // whose amplified size is unknowable.
    const double slack = std::max(cfg.freq_merge_tol, 1e-9);
    Complex amp = std::exp(c_damped - Complex(pi * density * height, 0.0));
    std::vector<Term> remapped;
    remapped.reserve(e.size());
    for (const Term& t : e.terms()) {
        if (t.omega <= density + slack) {
            remapped.push_back({t.omega - 0.5 * density, t.coeff * amp});
        } else {
            rec.dropped_mass += std::abs(t.coeff);
        }
    }
    rec.remapped = ExponentialSum::normalized(std::move(remapped), cfg);
    if (rec.dropped_mass > 0.0) {
        QCLAB_DEBUG("remap discarded coefficient mass " << rec.dropped_mass
                                                        << " above the density band");
    }
    return rec;
}

RoundTripReport round_trip_report(const ExponentialSum& q, Window window,
                                  const ToleranceConfig& cfg, double gamma_max, double height) {
    cfg.validate();
    double s = select_height(q, cfg);
    RoundTripReport report;
    report.spectrum_height = s;
    report.original = find_real_zeros(q, window, s, cfg);
    auto m_hat = diffraction_spectrum(q, s, gamma_max, cfg);

    Complex at_zero = m_hat.mass_at(0.0, cfg.freq_merge_tol);
    double density = at_zero.real();
    if (!(density > 0.0)) {
        fail(errc::empty_zero_set, "spectrum carries no density atom; nothing to reconstruct");
    }

    double y0 = height;
    if (!(y0 > 0.0)) {
        double reach = std::min(-m_hat.window().lo, m_hat.window().hi);
        auto profile =
            growth_profile(m_hat, {0.25 * reach, 0.5 * reach, 0.75 * reach, 0.9999 * reach});
        y0 = std::max(1.0, 2.0 * profile.max_slope());
    }
    report.reconstruction = reconstruct_series(m_hat, density, y0, cfg);

    const auto& remapped = report.reconstruction.remapped;
    double zero_strip = select_height(remapped, cfg);
    report.recovered = find_real_zeros(remapped, window, zero_strip, cfg);

    // Align by signed index and compare the overlap.
    auto a = signed_indexing(report.original);
    auto b = signed_indexing(report.recovered);
    long long lo = std::max(a.min_index(), b.min_index());
    long long hi = std::min(a.max_index(), b.max_index());
    for (long long n = lo; n <= hi; ++n) {
        report.max_displacement =
            std::max(report.max_displacement, std::abs(a.at(n) - b.at(n)));
        ++report.matched_pairs;
    }

    // Q / remapped should be a pure exponential e^{c + slope z}; sample its
    // log-slope along the imaginary axis above all zeros, stepping by 1/4 so
    // the phase advance per step stays under pi.
    auto ratio = [&](double y) {
        Complex zz(0.0, y);
        Complex denom = remapped.evaluate(zz);
        if (denom == Complex{}) {
            fail(errc::evaluation_at_zero, "reconstructed series vanishes on the sample line");
        }
        return q.evaluate(zz) / denom;
    };
    double base = y0 + 0.25;
    Complex r0 = ratio(base);
    Complex r1 = ratio(base + 0.25);
    Complex r2 = ratio(base + 0.5);
    Complex slope01 = std::log(r1 / r0) / Complex(0.0, 0.25);
    Complex slope12 = std::log(r2 / r1) / Complex(0.0, 0.25);
    report.ratio_log_slope = 0.5 * (slope01 + slope12);
    report.slope_residual = std::abs(slope12 - slope01);
    return report;
}

}  // namespace qclab
