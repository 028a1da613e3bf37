#include "qclab/test_function.hpp"

#include <cmath>

#include "qclab/errors.hpp"
#include "qclab/types.hpp"

namespace qclab {

TestFunction TestFunction::create(double width, double center, double modulation,
                                  double truncation_radius) {
    if (!(width > 0.0) || !std::isfinite(width)) {
        fail(errc::invalid_argument, "test function width must be positive and finite");
    }
    if (!std::isfinite(center) || !std::isfinite(modulation)) {
        fail(errc::invalid_argument, "test function parameters must be finite");
    }
    if (truncation_radius <= 0.0) truncation_radius = 6.0 * width;
    if (truncation_radius < 6.0 * width) {
        fail(errc::invalid_argument, "truncation radius must be at least six widths");
    }
    return TestFunction(width, center, modulation, truncation_radius);
}

Complex TestFunction::eval(Complex z) const {
    Complex u = (z - Complex(center_, 0.0)) / Complex(width_, 0.0);
    Complex exponent = -pi * u * u + Complex(0.0, two_pi * modulation_) * z;
    return std::exp(exponent);
}

Complex TestFunction::transform(double xi) const {
    double d = xi - modulation_;
    double mag = width_ * std::exp(-pi * width_ * width_ * d * d);
    return std::polar(mag, -two_pi * center_ * d);
}

double TestFunction::tail_bound() const {
    double u = truncation_radius_ / width_;
    return std::exp(-pi * u * u);
}

double TestFunction::transform_tail_bound() const {
    double v = width_ * transform_radius();
    return width_ * std::exp(-pi * v * v);
}

std::vector<TestFunction> gaussian_family(const std::vector<double>& widths,
                                          const std::vector<double>& centers,
                                          const std::vector<double>& modulations) {
    if (widths.empty() || centers.empty() || modulations.empty()) {
        fail(errc::invalid_argument, "gaussian family needs at least one value per parameter");
    }
    for (double w : widths) {
        if (!(w >= 0.2 && w <= 5.0)) {
            fail(errc::invalid_argument, "gaussian family widths must lie in [0.2, 5]");
        }
    }
    std::vector<TestFunction> family;
    family.reserve(widths.size() * centers.size() * modulations.size());
    for (double w : widths) {
        for (double c : centers) {
            for (double m : modulations) family.push_back(TestFunction::create(w, c, m));
        }
    }
    return family;
}

TriangleKernel TriangleKernel::create(double half_width) {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        fail(errc::invalid_argument, "triangle kernel half-width must be positive and finite");
    }
    return TriangleKernel(half_width);
}

double TriangleKernel::eval(double x) const {
    double v = 1.0 - std::abs(x) / half_width_;
    return v > 0.0 ? v : 0.0;
}

}  // namespace qclab
