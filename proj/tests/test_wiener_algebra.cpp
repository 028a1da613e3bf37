#include <cmath>
#include <vector>

#include <doctest.h>

#include "qclab/errors.hpp"
#include "qclab/exponential_sum.hpp"
#include "support/fixtures.hpp"

using namespace qclab;
using testing::close;
using testing::comb;
using testing::default_cfg;
using testing::scaled_comb;

TEST_SUITE("wiener_algebra") {

TEST_CASE("normalized sorts, merges equal frequencies and prunes") {
    ToleranceConfig cfg;
    auto s = ExponentialSum::normalized(
        {{2.0, Complex(1.0, 0.0)},
         {-1.0, Complex(0.5, 0.0)},
         {2.0, Complex(-0.25, 0.0)},
         {0.0, Complex(1e-15, 0.0)}},
        cfg);
    REQUIRE(s.size() == 2);
    CHECK(s.terms()[0].omega == -1.0);
    CHECK(s.terms()[1].omega == 2.0);
    CHECK(s.terms()[1].coeff == Complex(0.75, 0.0));
    CHECK(s.wiener_norm() == doctest::Approx(1.25));
}

TEST_CASE("normalized chains merges across adjacent sub-tolerance gaps") {
    ToleranceConfig cfg;
    double tol = cfg.freq_merge_tol;
    auto s = ExponentialSum::normalized(
        {{1.0, Complex(1.0, 0.0)}, {1.0 + 0.9 * tol, Complex(1.0, 0.0)},
         {1.0 + 1.8 * tol, Complex(2.0, 0.0)}},
        cfg);
    REQUIRE(s.size() == 1);
    CHECK(s.terms()[0].coeff == Complex(4.0, 0.0));
    // Representative frequency is the magnitude-weighted mean of the cluster.
    CHECK(s.terms()[0].omega == doctest::Approx(1.0 + (0.9 + 2.0 * 1.8) / 4.0 * tol));
}

TEST_CASE("normalized rejects non-finite input and oversized results") {
    ToleranceConfig cfg;
    CHECK_THROWS_AS(ExponentialSum::normalized({{std::nan(""), Complex(1.0, 0.0)}}, cfg),
                    error);
    cfg.max_terms = 2;
    std::vector<Term> raw;
    for (int k = 0; k < 5; ++k) raw.push_back({double(k), Complex(1.0, 0.0)});
    try {
        ExponentialSum::normalized(raw, cfg);
        FAIL("expected TooManyTerms");
    } catch (const error& e) {
        CHECK(e.code() == errc::too_many_terms);
        CHECK(e.numerical());
    }
}

TEST_CASE("frequency queries fail on the empty sum") {
    ExponentialSum s;
    CHECK(s.empty());
    CHECK(s.wiener_norm() == 0.0);
    CHECK_THROWS_AS(s.min_frequency(), error);
    CHECK_THROWS_AS(s.max_frequency(), error);
    CHECK(ExponentialSum::constant(Complex{}).empty());
}

TEST_CASE("evaluate matches closed forms on and off the real axis") {
    auto q = comb();
    CHECK(close(q.evaluate(Complex(0.25, 0.0)), Complex(-1.0, 1.0), 1e-15));
    CHECK(close(q.evaluate(Complex(0.0, 0.0)), Complex(0.0, 0.0), 0.0));
    // Frozen reference: e^{-2*pi} - 1 = -0.998132557268292011185569787065.
    CHECK(close(q.evaluate(Complex(0.0, 1.0)),
                Complex(-0.998132557268292011185569787065, 0.0), 1e-15));
}

TEST_CASE("coefficient lookup respects the tolerance window") {
    auto q = comb();
    CHECK(q.coefficient(1.0, 1e-9) == Complex(1.0, 0.0));
    CHECK(q.coefficient(0.5, 1e-9) == Complex(0.0, 0.0));
    CHECK(q.coefficient(0.5, 0.6) == Complex(0.0, 0.0));  // -1 and 1 both in window
}

TEST_CASE("add and mul convolve coefficients exactly on a lattice") {
    ToleranceConfig cfg;
    auto q = comb(cfg);
    auto sum = add(q, ExponentialSum::constant(Complex(1.0, 0.0)), cfg);
    REQUIRE(sum.size() == 1);
    CHECK(sum.terms()[0].omega == 1.0);

    // (e - 1)^2 = e^2 - 2e + 1.
    auto sq = mul(q, q, cfg);
    REQUIRE(sq.size() == 3);
    CHECK(sq.coefficient(0.0, 1e-12) == Complex(1.0, 0.0));
    CHECK(sq.coefficient(1.0, 1e-12) == Complex(-2.0, 0.0));
    CHECK(sq.coefficient(2.0, 1e-12) == Complex(1.0, 0.0));
    CHECK(sq.wiener_norm() == doctest::Approx(4.0));
}

TEST_CASE("mul falls back to the hash accumulator and stays consistent") {
    ToleranceConfig cfg;
    std::vector<Term> a_raw, b_raw;
    // 501 * 501 pairs exceed the dense cutoff; geometric coefficients give a
    // closed form to evaluate against.
    for (int k = 0; k <= 500; ++k) {
        a_raw.push_back({double(k), Complex(std::pow(0.97, k), 0.0)});
        b_raw.push_back({0.5 * k, Complex(std::pow(0.95, k), 0.01 * std::sin(k))});
    }
    auto a = ExponentialSum::normalized(a_raw, cfg);
    auto b = ExponentialSum::normalized(b_raw, cfg);
    auto prod = mul(a, b, cfg);
    for (double x : {0.0, 0.1, 0.37, 2.5}) {
        Complex z(x, 0.0);
        CHECK(close(prod.evaluate(z), a.evaluate(z) * b.evaluate(z), 1e-8));
    }
    // Spot coefficient: freq 1 = a_0 b_2 + a_1 b_... only freq pairs 0+1, 1+0.5? none
    // except a_0*b_(k=2) and a_1*... frequencies are k + 0.5m, so freq 1 gets
    // (k,m) in {(0,2),(1,0)}.
    Complex expect = Complex(1.0, 0.0) * b.coefficient(1.0, 1e-9) +
                     a.coefficient(1.0, 1e-9) * b.coefficient(0.0, 1e-9);
    CHECK(close(prod.coefficient(1.0, 1e-9), expect, 1e-12));
}

TEST_CASE("scale and differentiate act term by term") {
    auto q = comb();
    auto d = differentiate(q);
    REQUIRE(d.size() == 1);  // the constant term differentiates away
    CHECK(d.terms()[0].omega == 1.0);
    CHECK(close(d.terms()[0].coeff, Complex(0.0, two_pi), 1e-16));

    auto s = scale(q, Complex(0.0, 2.0));
    CHECK(s.coefficient(0.0, 1e-12) == Complex(0.0, -2.0));
    CHECK(scale(q, Complex{}).empty());

    // Central difference cross-check at x = 0.3.
    auto p = ExponentialSum::normalized(
        {{-0.7, Complex(0.3, -0.1)}, {0.0, Complex(1.0, 0.0)}, {1.3, Complex(0.0, 0.8)}},
        default_cfg());
    auto dp = differentiate(p);
    const double h = 1e-6;
    Complex fd = (p.evaluate(Complex(0.3 + h, 0.0)) - p.evaluate(Complex(0.3 - h, 0.0))) /
                 Complex(2.0 * h, 0.0);
    Complex exact = dp.evaluate(Complex(0.3, 0.0));
    CHECK(std::abs(fd - exact) / std::abs(exact) < 1e-6);
}

TEST_CASE("restrict_to_line damps frequencies by the signed line height") {
    auto q = comb();
    auto up = restrict_to_line(q, 1.0);
    // Frozen reference: e^{-2*pi} = 0.00186744273170798881443021293483.
    CHECK(close(up.coefficient(1.0, 1e-12), Complex(0.00186744273170798881443021293483, 0.0),
                1e-17));
    CHECK(up.coefficient(0.0, 1e-12) == Complex(-1.0, 0.0));
    auto down = restrict_to_line(q, -1.0);
    CHECK(close(down.coefficient(1.0, 1e-12), Complex(535.491655524764736503049329589, 0.0),
                1e-10));

    // Height zero is the identity, and evaluation commutes with restriction.
    auto same = restrict_to_line(q, 0.0);
    REQUIRE(same.size() == q.size());
    CHECK(same.terms()[0].coeff == q.terms()[0].coeff);
    CHECK(same.terms()[1].coeff == q.terms()[1].coeff);
    for (double x : {0.13, -2.7, 0.5}) {
        CHECK(close(up.evaluate(Complex(x, 0.0)), q.evaluate(Complex(x, 1.0)), 1e-14));
        CHECK(close(down.evaluate(Complex(x, 0.0)), q.evaluate(Complex(x, -1.0)), 1e-9));
    }
}

TEST_CASE("edge_remainder_norm measures the non-dominant mass on a line") {
    auto q = comb();
    CHECK(edge_remainder_norm(q, 1.0, LineSide::upper) ==
          doctest::Approx(0.00186744273170798881).epsilon(1e-12));
    CHECK(edge_remainder_norm(q, 1.0, LineSide::lower) ==
          doctest::Approx(0.00186744273170798881).epsilon(1e-12));

    // 10 e^{2*pi*i*x} - 1: at height 1/4 the remainder still dominates.
    auto loud = ExponentialSum::normalized({{0.0, Complex(-1.0, 0.0)}, {1.0, Complex(10.0, 0.0)}},
                                           default_cfg());
    CHECK(edge_remainder_norm(loud, 0.25, LineSide::upper) > 1.0);
    CHECK(edge_remainder_norm(loud, 0.5, LineSide::upper) ==
          doctest::Approx(10.0 * 0.0432139182637722497744).epsilon(1e-12));
}

TEST_CASE("exp_sum reproduces exponentials of harmonics") {
    ToleranceConfig cfg;
    auto h = ExponentialSum::harmonic(1.0, Complex(0.5, 0.0));
    auto e = exp_sum(h, cfg);
    // Coefficients are 0.5^n / n!.
    CHECK(close(e.coefficient(0.0, 1e-9), Complex(1.0, 0.0), 1e-13));
    CHECK(close(e.coefficient(1.0, 1e-9), Complex(0.5, 0.0), 1e-13));
    CHECK(close(e.coefficient(2.0, 1e-9), Complex(0.125, 0.0), 1e-13));
    CHECK(close(e.coefficient(3.0, 1e-9), Complex(0.5 * 0.5 * 0.5 / 6.0, 0.0), 1e-13));

    // exp(Q) exp(-Q) = 1 pointwise.
    auto q = comb(cfg);
    auto p = mul(exp_sum(q, cfg), exp_sum(scale(q, Complex(-1.0, 0.0)), cfg), cfg);
    for (double x : {0.0, 0.3, 1.7}) {
        CHECK(close(p.evaluate(Complex(x, 0.0)), Complex(1.0, 0.0), 1e-11));
    }
}

TEST_CASE("exp_sum honors the norm hint when certifying the tail") {
    ToleranceConfig cfg;
    auto h = ExponentialSum::harmonic(1.0, Complex(0.25, 0.0));
    auto plain = exp_sum(h, cfg);
    auto hinted = exp_sum(h, cfg, 4.0);
    // The hint can only extend the expansion.
    CHECK(hinted.size() >= plain.size());
    CHECK(close(hinted.coefficient(1.0, 1e-9), Complex(0.25, 0.0), 1e-14));
    CHECK_THROWS_AS(exp_sum(h, cfg, -1.0), error);
}

TEST_CASE("log1p_sum inverts exp_sum on small sums") {
    ToleranceConfig cfg;
    auto h = ExponentialSum::normalized(
        {{1.0, Complex(0.3, 0.1)}, {-2.0, Complex(0.0, 0.2)}}, cfg);
    auto lg = log1p_sum(h, cfg);
    auto back = exp_sum(lg, cfg);
    // exp(log(1+H)) = 1 + H coefficient-wise.
    CHECK(close(back.coefficient(0.0, 1e-9), Complex(1.0, 0.0), 1e-10));
    CHECK(close(back.coefficient(1.0, 1e-9), Complex(0.3, 0.1), 1e-10));
    CHECK(close(back.coefficient(-2.0, 1e-9), Complex(0.0, 0.2), 1e-10));
    CHECK(close(back.coefficient(2.0, 1e-9), Complex(0.0, 0.0), 1e-10));
}

TEST_CASE("log1p_sum matches the scalar Mercator series") {
    ToleranceConfig cfg;
    auto h = ExponentialSum::harmonic(2.0, Complex(-0.4, 0.0));
    auto lg = log1p_sum(h, cfg);
    CHECK(close(lg.coefficient(2.0, 1e-9), Complex(-0.4, 0.0), 1e-15));
    CHECK(close(lg.coefficient(4.0, 1e-9), Complex(-0.08, 0.0), 1e-15));
    CHECK(close(lg.coefficient(6.0, 1e-9), Complex(-0.4 * 0.4 * 0.4 / 3.0, 0.0), 1e-15));
    // Scalar check at x = 0: log(1 - 0.4) = -0.510825623765990683205514096304.
    CHECK(close(lg.evaluate(Complex(0.0, 0.0)),
                Complex(-0.510825623765990683205514096304, 0.0), 1e-12));
}

TEST_CASE("log1p_sum requires norm below one") {
    ToleranceConfig cfg;
    auto h = ExponentialSum::harmonic(1.0, Complex(1.0, 0.0));
    try {
        log1p_sum(h, cfg);
        FAIL("expected NormNotLessThanOne");
    } catch (const error& e) {
        CHECK(e.code() == errc::norm_not_less_than_one);
        CHECK_FALSE(e.numerical());
    }
}

TEST_CASE("log_derivative_series expands the comb on both lines") {
    ToleranceConfig cfg;
    auto q = comb(cfg);
    double s = 1.0;

    auto up = log_derivative_series(q, s, LineSide::upper, cfg);
    CHECK(up.min_frequency() >= 0.0);
    CHECK(close(up.coefficient(0.0, 1e-9), Complex(0.0, 0.0), 1e-15));
    for (int k = 1; k <= 3; ++k) {
        CHECK(close(up.coefficient(double(k), 1e-9),
                    Complex(0.0, -two_pi * std::exp(-two_pi * k * s)), 1e-15));
    }

    auto down = log_derivative_series(q, s, LineSide::lower, cfg);
    CHECK(down.max_frequency() <= 0.0);
    CHECK(close(down.coefficient(0.0, 1e-9), Complex(0.0, two_pi), 1e-15));
    for (int k = 1; k <= 3; ++k) {
        CHECK(close(down.coefficient(-double(k), 1e-9),
                    Complex(0.0, two_pi * std::exp(-two_pi * k * s)), 1e-15));
    }
}

TEST_CASE("log_derivative_series fails when the edge does not dominate") {
    ToleranceConfig cfg;
    auto loud = ExponentialSum::normalized({{0.0, Complex(-1.0, 0.0)}, {1.0, Complex(10.0, 0.0)}},
                                           cfg);
    try {
        log_derivative_series(loud, 0.25, LineSide::upper, cfg);
        FAIL("expected FactorizationFailed");
    } catch (const error& e) {
        CHECK(e.code() == errc::factorization_failed);
        CHECK(e.numerical());
    }
    // At a higher line the same sum factors fine.
    CHECK_NOTHROW(log_derivative_series(loud, 0.5, LineSide::upper, cfg));
}

TEST_CASE("series expansions keep coefficients far below the prune threshold") {
    ToleranceConfig cfg;
    auto tight = spectrum_tolerances(cfg, 5.0, 2.0);
    auto up = log_derivative_series(comb(cfg), 2.0, LineSide::upper, tight);
    // At height 2 the sixth line coefficient is 2*pi*e^{-24*pi} ~ 1e-32; the
    // spectrum tolerance keeps it because amplification by e^{2*pi*gamma*s}
    // later turns it back into an order-one atom.
    Complex c6 = up.coefficient(6.0, 1e-9);
    CHECK(std::abs(c6) > 0.0);
    CHECK(std::abs(std::abs(c6) - two_pi * std::exp(-two_pi * 12.0)) <
          1e-6 * two_pi * std::exp(-two_pi * 12.0));
}

TEST_CASE("series results are deterministic across repeated runs") {
    ToleranceConfig cfg;
    auto q = testing::product_comb(cfg);
    auto a = log_derivative_series(q, 1.0, LineSide::upper, cfg);
    auto b = log_derivative_series(q, 1.0, LineSide::upper, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.terms()[i].omega == b.terms()[i].omega);
        CHECK(a.terms()[i].coeff == b.terms()[i].coeff);
    }
}

}  // TEST_SUITE
