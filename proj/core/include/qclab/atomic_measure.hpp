#pragma once

#include <vector>

#include "qclab/test_function.hpp"
#include "qclab/tolerances.hpp"
#include "qclab/types.hpp"
#include "qclab/zero_finder.hpp"

namespace qclab {

struct Atom {
    double position = 0.0;
    Complex mass;
};

// Finite complex atomic measure on a window, atoms sorted by position.
// Positions closer than freq_merge_tol are merged (masses added, position the
// modulus-weighted mean); atoms whose merged mass is exactly zero are dropped.
class AtomicMeasure {
public:
    AtomicMeasure() = default;

    static AtomicMeasure create(std::vector<Atom> atoms, Window window,
                                const ToleranceConfig& cfg);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const Window& window() const { return window_; }
    bool empty() const { return atoms_.empty(); }
    std::size_t size() const { return atoms_.size(); }

    // Sum of |mass| over all atoms.
    double total_variation() const;
    // Mass at the atom within tol of position, zero when absent.
    Complex mass_at(double position, double tol) const;

private:
    AtomicMeasure(std::vector<Atom> atoms, Window window)
        : atoms_(std::move(atoms)), window_(window) {}

    std::vector<Atom> atoms_;
    Window window_;

    friend AtomicMeasure shift(const AtomicMeasure&, double);
};

// Unit mass at every zero, weighted by multiplicity.
AtomicMeasure comb_measure(const ZeroSet& zs);

// Measure of the open ball (center - radius, center + radius); with absolute
// set, the |mass|-sum instead (imaginary part zero).  The closed ball must fit
// inside the window so no boundary atom escapes uncounted.
Complex ball_mass(const AtomicMeasure& m, double center, double radius, bool absolute = false);

// Translate atoms and window by h.
AtomicMeasure shift(const AtomicMeasure& m, double h);

struct DensityEstimate {
    double density = 0.0;      // midpoint of the extreme window averages
    double uncertainty = 0.0;  // half their spread
    double low = 0.0;          // min count / probe_length over all placements
    double high = 0.0;         // max count / probe_length
};

// Zero counts over every placement of an open probe interval inside the
// window, multiplicity-weighted.  Extremes are exact: counts only change when
// a probe endpoint crosses a zero, so sampling endpoints, event points, and
// gap midpoints attains them.  Requires probe_length <= window length / 2.
DensityEstimate density(const ZeroSet& zs, double probe_length);

struct ConvolutionValue {
    Complex value;
    // Bound on the mass omitted by truncating the kernel, zero for compactly
    // supported kernels.
    double tail_bound = 0.0;
};

// (m * f)(t) = sum of mass * f(t - position).  The kernel's effective support
// around t must lie inside the window, else atoms that matter are missing.
ConvolutionValue convolve(const AtomicMeasure& m, const TestFunction& f, double t);
ConvolutionValue convolve(const AtomicMeasure& m, const TriangleKernel& k, double t);

// Max |m|-mass of an open unit ball centered at an atom, over atoms at least
// distance 1 from the window edge.  Distances within 1e-9 of the ball radius
// count as boundary and are excluded.  Requires window length >= 2.
double translation_bound(const AtomicMeasure& m);

}  // namespace qclab
