#pragma once

#include <cstddef>
#include <vector>

#include "qclab/atomic_measure.hpp"
#include "qclab/exponential_sum.hpp"
#include "qclab/tolerances.hpp"
#include "qclab/types.hpp"

namespace qclab {

// Smallest height on the doubling grid {1/4, 1/2, 1, ..., 64} at which the
// edge remainder falls below 1/2 on both lines, so each edge term dominates
// and the logarithmic derivative series converge geometrically.
double select_height(const ExponentialSum& q, const ToleranceConfig& cfg);

// Pure point spectrum of the zero distribution of q over the open frequency
// window (-gamma_max, gamma_max), computed from the difference of the upper
// and lower line series of Q'/Q at the given height.  The atom at zero is the
// frequency span of q (the zero density); atoms with |mass| below
// prune_threshold are dropped.  Zeros near the origin are cross-checked to be
// real before trusting the line series.
AtomicMeasure diffraction_spectrum(const ExponentialSum& q, double height, double gamma_max,
                                   const ToleranceConfig& cfg);

// Sum of |mass| / gamma over atoms with 0 < gamma < 1, the quantity that must
// stay finite for the spectrum to come from a zero set of bounded density.
// Atoms with 0 < gamma <= freq_merge_tol cannot be divided safely; they are
// skipped and counted in *excluded_atoms when given.  The measure window must
// contain (0, 1).
double check_int_condition(const AtomicMeasure& m_hat, const ToleranceConfig& cfg,
                           std::size_t* excluded_atoms = nullptr);

struct GrowthSample {
    double radius = 0.0;
    double total_variation = 0.0;  // |m|-mass of the open ball (-radius, radius)
    double log_tv_over_r = 0.0;    // NaN marks an empty ball
};

struct GrowthProfile {
    std::vector<GrowthSample> samples;

    // Largest finite log_tv_over_r, 0 when every ball is empty.
    double max_slope() const;
    // log_tv_over_r at the largest radius, 0 when that ball is empty.  Small
    // radii overestimate the growth of lattice-like spectra, so the edge
    // sample is the better asymptotic estimate.
    double edge_slope() const;
};

// Total variation growth of the spectrum over strictly increasing radii, all
// of which must fit inside the window around zero.
GrowthProfile growth_profile(const AtomicMeasure& m_hat, const std::vector<double>& radii);

struct HeightAgreement {
    double height_a = 0.0;
    double height_b = 0.0;
    // Max |mass difference| over the union of atom positions.
    double max_atom_difference = 0.0;
};

// Recompute the spectrum at each height and compare every pair atom by atom.
// The masses are height-independent by construction; this measures how far
// the numerics drift.
std::vector<HeightAgreement> height_independence_report(const ExponentialSum& q,
                                                        const std::vector<double>& heights,
                                                        double gamma_max,
                                                        const ToleranceConfig& cfg);

}  // namespace qclab
