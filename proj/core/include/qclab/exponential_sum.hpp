#pragma once

#include <cstddef>
#include <vector>

#include "qclab/tolerances.hpp"
#include "qclab/types.hpp"

namespace qclab {

// One term coeff * e^{2*pi*i*omega*z} of an exponential sum.
struct Term {
    double omega = 0.0;
    Complex coeff{0.0, 0.0};
};

// Horizontal line Im z = +s (upper) or Im z = -s (lower), s > 0.
enum class LineSide { upper, lower };

// Finite sum  Q(z) = sum_j q_j e^{2*pi*i*omega_j*z}  with real frequencies.
// Invariants: terms are sorted by strictly increasing frequency, adjacent
// frequencies differ by more than the merge tolerance used at construction,
// and no stored coefficient is zero.  The absolute-coefficient sum (the
// wiener_norm) majorizes |Q| on the whole real axis.
class ExponentialSum {
  public:
    ExponentialSum() = default;

    // Sorts, merges frequencies closer than cfg.freq_merge_tol, drops
    // coefficients below cfg.prune_threshold, enforces cfg.max_terms.
    static ExponentialSum normalized(std::vector<Term> raw, const ToleranceConfig& cfg);

    static ExponentialSum constant(Complex value);
    static ExponentialSum harmonic(double omega, Complex coeff);

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    double wiener_norm() const;
    // Smallest / largest frequency present; fails with EmptySeries when empty.
    double min_frequency() const;
    double max_frequency() const;

    Complex evaluate(Complex z) const;
    // Sum of coefficients with |omega_j - omega| <= tol (zero when absent).
    Complex coefficient(double omega, double tol) const;

  private:
    // Adopts terms that are already sorted, merged and free of zeros.
    static ExponentialSum from_sorted_unchecked(std::vector<Term> terms);

    friend ExponentialSum scale(const ExponentialSum&, Complex);
    friend ExponentialSum differentiate(const ExponentialSum&);
    friend ExponentialSum restrict_to_line(const ExponentialSum&, double);

    std::vector<Term> terms_;
};

ExponentialSum add(const ExponentialSum& p, const ExponentialSum& q, const ToleranceConfig& cfg);
ExponentialSum mul(const ExponentialSum& p, const ExponentialSum& q, const ToleranceConfig& cfg);

// Coefficient-wise scaling.  Drops terms only when the scaled coefficient is
// exactly zero; no tolerance is consulted.
ExponentialSum scale(const ExponentialSum& p, Complex factor);

// Term-wise derivative d/dz.  Takes no tolerance configuration, so the result
// may carry coefficients below any prune threshold; callers renormalize.
ExponentialSum differentiate(const ExponentialSum& p);

// Series in x for Q(x + i*y): each coefficient picks up the factor
// e^{-2*pi*omega*y}.  Like differentiate, takes no tolerance configuration
// and so never prunes; terms whose factor underflows to zero are dropped.
ExponentialSum restrict_to_line(const ExponentialSum& q, double y);

// Wiener norm of the remainder H after factoring the dominant edge term out
// of Q on the given line: upper side factors the minimal frequency, lower the
// maximal, and H collects the rest relative to that term.  Q(x +- i*height)
// has no zeros as soon as this norm is below one.
double edge_remainder_norm(const ExponentialSum& q, double height, LineSide side);

// The three series expansions below prune intermediate and final terms only
// against a fraction of cfg.series_tail_target, not cfg.prune_threshold:
// their outputs feed reweightings by factors as large as e^{2*pi*gamma*s},
// where a coefficient far below prune_threshold still carries an atom.

// exp(Q) via the power series, truncated once the a-priori tail bound
// r^N/N! * e^r (r = max(|Q|_W, norm_hint)) falls below cfg.series_tail_target.
// norm_hint lets callers certify against a larger norm than |Q|_W when the
// result will be rescaled term by term afterwards.
ExponentialSum exp_sum(const ExponentialSum& q, const ToleranceConfig& cfg,
                       double norm_hint = 0.0);

// log(1 + H) via the alternating power series; requires |H|_W < 1 and fails
// with NormNotLessThanOne otherwise.  Tail bound r^{N+1}/((N+1)(1-r)).
ExponentialSum log1p_sum(const ExponentialSum& h, const ToleranceConfig& cfg);

// Series in x for Q'/Q on the given line.  Factors the dominant edge term,
// requires edge_remainder_norm < 1 (else FactorizationFailed), and expands
// 2*pi*i*edge_frequency + (log(1+H))'.  Upper side yields frequencies >= 0,
// lower side <= 0.
ExponentialSum log_derivative_series(const ExponentialSum& q, double height, LineSide side,
                                     const ToleranceConfig& cfg);

}  // namespace qclab
