#pragma once

#include <cstddef>
#include <vector>

#include "qclab/exponential_sum.hpp"
#include "qclab/tolerances.hpp"
#include "qclab/types.hpp"

namespace qclab {

// Axis-aligned box [x_lo, x_hi] x [-y_half, y_half] in the complex plane.
struct Rectangle {
    double x_lo = 0.0;
    double x_hi = 0.0;
    double y_half = 0.0;
};

struct ZeroEntry {
    double position = 0.0;
    int multiplicity = 1;
};

// Real zeros of an exponential sum inside a window, counted with
// multiplicity.  Entries are sorted by strictly increasing position.
class ZeroSet {
  public:
    ZeroSet() = default;

    static ZeroSet create(std::vector<ZeroEntry> entries, Window window);

    const std::vector<ZeroEntry>& entries() const { return entries_; }
    const Window& window() const { return window_; }
    std::size_t distinct_count() const { return entries_.size(); }
    // Number of zeros counted with multiplicity.
    std::size_t total_count() const;
    // Largest multiplicity-weighted count in any closed unit interval.
    std::size_t max_per_unit_interval() const;

  private:
    std::vector<ZeroEntry> entries_;
    Window window_;
};

// Number of zeros of Q inside the rectangle, by the argument principle:
// trapezoid quadrature of Q'/Q around the boundary, refined by halving the
// step until the value settles within 0.25 of the same integer twice.
// Fails with BoundaryTooCloseToZero when the sampled boundary clearance
// min|Q| drops below 10 * root_tol * max|Q|, and with QuadratureNotConverged
// when refinement stalls.
int argument_principle_count(const ExponentialSum& q, const Rectangle& rect,
                             const ToleranceConfig& cfg);

// All real zeros of Q in the window, verified: Newton refinement from a grid
// scan locates candidates, small boxes certify each multiplicity, and an
// argument-principle count over [window x (-strip_half_height,
// strip_half_height)] must equal the multiplicity total.  A surplus in the
// box count means zeros off the real axis (NonRealZeroDetected); a deficit
// means the quadrature contradicted the per-zero certificates
// (ConvergenceFailure).  The scan retries at step/4 and step/16 before
// giving up.
ZeroSet find_real_zeros(const ExponentialSum& q, Window window, double strip_half_height,
                        const ToleranceConfig& cfg);

// Smallest distance between zeros counted with multiplicity: any entry with
// multiplicity >= 2 gives zero.  Needs at least two stored positions.
double min_gap(const ZeroSet& zeros);

// Zeros flattened with multiplicity and indexed relative to the entry
// closest to the origin (ties resolved toward the negative side), so that
// at(0) is that entry and at(n) walks n places to the right.
struct SignedIndexing {
    std::vector<double> positions;
    std::ptrdiff_t origin = 0;

    double at(std::ptrdiff_t n) const;
    std::ptrdiff_t min_index() const { return -origin; }
    std::ptrdiff_t max_index() const {
        return static_cast<std::ptrdiff_t>(positions.size()) - 1 - origin;
    }
};

SignedIndexing signed_indexing(const ZeroSet& zeros);

}  // namespace qclab
