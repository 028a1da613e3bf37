#pragma once

#include <string>
#include <vector>

#include "qclab/atomic_measure.hpp"
#include "qclab/tolerances.hpp"
#include "qclab/zero_finder.hpp"

namespace qclab {

struct RadiusValue {
    double radius = 0.0;  // ball radius, or candidate period for the lattice probe
    double value = 0.0;
};

// Outcome of one desk-scale experiment: a metric per radius plus a single
// number summarizing the verdict.  Radii are listed in increasing order.
struct ProbeReport {
    std::string name;
    std::vector<RadiusValue> per_radius;
    double verdict_metric = 0.0;
};

// Total variation of mu - nu on open balls around the origin, divided by the
// radius.  A measure is determined by these numbers growing linearly: for
// distinct atomic fixtures the metric stays bounded away from zero, and it is
// exactly zero when the measures coincide.  Atoms within 1e-9 of each other
// are treated as sitting at the same position.  verdict_metric = min over
// radii.  Fails WindowTooSmall when a closed ball leaves either window.
ProbeReport probe_uniqueness(const AtomicMeasure& mu, const AtomicMeasure& nu,
                             const std::vector<double>& radii);

// Pairs two zero sets by signed index and reports max |a_n - c_n| in four
// concentric shells of their common window.  A perturbation that decays with
// |n| shows values shrinking toward the window edge; verdict_metric is the
// outermost shell's value.  Diagnostic only.  Fails CountMismatch when the
// two sets differ by more than two points inside the common window.
ProbeReport probe_perturbation(const ZeroSet& a, const ZeroSet& c);

// Tests whether the zeros form a finite union of arithmetic progressions.
// Candidate periods are the reciprocals of the dominant positive-frequency
// spectrum atoms; for each candidate the zeros are clustered modulo the
// period on the circle.  A candidate qualifies when there are at most eight
// clusters and every cluster holds at least 80% of a full progression's
// share of the window.  per_radius pairs each candidate period with its
// largest cluster width (infinity when disqualified); verdict_metric is the
// smallest of those.  Fails NoCandidatePeriods when the spectrum offers no
// usable period.
ProbeReport probe_lattice_structure(const ZeroSet& zs, const AtomicMeasure& m_hat,
                                    const ToleranceConfig& cfg);

// Total-variation mass of open balls around the origin divided by the
// radius.  Nonzero translation-bounded fixtures keep this bounded away from
// zero; sublinear growth would force the measure to vanish.  verdict_metric
// = min over radii.  Fails WindowTooSmall when a closed ball leaves the
// window.
ProbeReport probe_mass_growth(const AtomicMeasure& mu, const std::vector<double>& radii);

}  // namespace qclab
