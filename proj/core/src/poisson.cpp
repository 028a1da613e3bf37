#include "qclab/poisson.hpp"

#include <cmath>
#include <string>

#include "qclab/errors.hpp"

namespace qclab {

PoissonIdentity verify_poisson(const AtomicMeasure& mu, const AtomicMeasure& mu_hat,
                               const TestFunction& f) {
    if (f.center() - f.truncation_radius() < mu.window().lo ||
        f.center() + f.truncation_radius() > mu.window().hi) {
        fail(errc::support_exceeds_window, "probe support leaves the point measure window");
    }
    if (f.modulation() - f.transform_radius() < mu_hat.window().lo ||
        f.modulation() + f.transform_radius() > mu_hat.window().hi) {
        fail(errc::support_exceeds_window,
             "probe transform support leaves the frequency window");
    }
    PoissonIdentity out;
    for (const Atom& a : mu.atoms()) out.lhs += a.mass * f.eval(a.position);
    for (const Atom& a : mu_hat.atoms()) out.rhs += a.mass * f.transform(a.position);
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

}  // namespace qclab
