#include <gtest/gtest.h>

#include <boost/math/special_functions/digamma.hpp>

#include "lcrit/gammaphase.hpp"

using namespace lcrit;

namespace {
struct LogGammaRef {
    int alpha;
    double eps, t, re, im;
};
// mpmath loggamma((1/2 + eps + alpha + i t)/2) at 30 digits
const LogGammaRef kRefs[] = {
    {1, 0.0, 5.0, -2.7802640568104919, 0.18760235195575867},
    {0, 0.0, 20.0, -15.36459276029524, 12.634193666938486},
    {1, 0.0, 30.0, -21.966028564832837, 26.014146587702441},
    {2, 0.0, 0.5, -0.13524626134657907, -0.053472080545764508},
    {0, 0.2, 2.0, -0.64539736127643217, -1.2023741484753236},
    {1, -0.2, 100.0, -77.034076630879076, 145.83737806604329},
};
}  // namespace

TEST(GaussWeierstrass, LogGammaMatchesReference) {
    for (const auto& r : kRefs) {
        const std::complex<double> z{(0.5 + r.eps + r.alpha) / 2, r.t / 2};
        const auto v = gw_log_gamma(z);
        EXPECT_NEAR(v.real(), r.re, 1e-9 * std::max(1.0, std::abs(r.re))) << r.t;
        EXPECT_NEAR(v.imag(), r.im, 1e-9 * std::max(1.0, std::abs(r.im))) << r.t;
        const auto w = gw_log_gamma(z, kXiGammaConfig);
        EXPECT_NEAR(w.real(), r.re, 1e-11 * std::max(1.0, std::abs(r.re))) << r.t;
        EXPECT_NEAR(w.imag(), r.im, 1e-11 * std::max(1.0, std::abs(r.im))) << r.t;
        const auto ph = gw_log_gamma_phase({r.eps, r.t}, r.alpha);
        EXPECT_NEAR(ph.value, r.im, 1e-9 * std::max(1.0, std::abs(r.im)));
        EXPECT_NEAR(ph.value, v.imag(), 1e-12);
    }
}

TEST(GaussWeierstrass, PhaseOddAndZeroAtOrigin) {
    for (int a : {0, 1, 2}) {
        EXPECT_EQ(gw_log_gamma_phase({0.1, 0.0}, a, {10000, 1}).value, 0.0);
        for (double t : {0.3, 4.0, 17.0}) {
            const GwConfig c{20000, 2};
            EXPECT_EQ(gw_log_gamma_phase({0.0, -t}, a, c).value, -gw_log_gamma_phase({0.0, t}, a, c).value);
            EXPECT_EQ(gw_dphase_dt({0.0, -t}, a, c).value, gw_dphase_dt({0.0, t}, a, c).value);
        }
    }
}

TEST(GaussWeierstrass, DerivativeAtZeroIsHalfDigamma) {
    // d/dt arg Γ(x + it/2) = Re ψ(x + it/2) / 2
    for (int a : {0, 1, 2})
        for (double e : {-0.2, 0.0, 0.3}) {
            const double x = (0.5 + e + a) / 2;
            EXPECT_NEAR(gw_dphase_dt({e, 0.0}, a).value, 0.5 * boost::math::digamma(x), 1e-11);
        }
}

TEST(GaussWeierstrass, DerivativeMatchesFiniteDifference) {
    for (double t : {0.7, 5.0, 30.0}) {
        auto d = central_derivative([&](double u) { return gw_log_gamma_phase({0.0, u}, 1).value; }, t, 1e-3, 1);
        EXPECT_NEAR(gw_dphase_dt({0.0, t}, 1).value, d.value, 1e-8);
    }
}

TEST(GaussWeierstrass, LargeTAgreesWithLogClosedForm) {
    const PrefactorParams p{3, 1, 1};
    const double v = prefactor_dphase_dt({0.0, 50.0}, p);
    EXPECT_NEAR(v, 1.5863707799266654, 1e-9);  // mpmath
    EXPECT_NEAR(v, std::log(std::sqrt(50.0 * 3 / (2 * pi))), 1e-3);
}

TEST(GaussWeierstrass, PoleGuardAndConfig) {
    EXPECT_THROW(gw_log_gamma_phase({-2.5, 0.0}, 0), singularity_error);
    EXPECT_THROW(gw_log_gamma({-3.0, 0.0}), singularity_error);
    EXPECT_THROW(gw_dphase_dt({0.0, 1.0}, 1, {0, 0}), lcrit::domain_error);
    EXPECT_THROW(gw_dphase_dt({0.0, 1.0}, 1, {4, 3}), lcrit::domain_error);
    EXPECT_THROW((PrefactorParams{3, 2, 0}.validate()), lcrit::domain_error);
    EXPECT_THROW((PrefactorParams{3, 1, 0}.validate()), lcrit::domain_error);
}

TEST(GaussWeierstrass, RichardsonShrinksError) {
    const double exact = kRefs[1].im;
    const std::complex<double> z1{0.25, 10.0};
    double e0 = std::abs(gw_log_gamma(z1, {1 << 14, 0}).imag() - exact);
    double e1 = std::abs(gw_log_gamma(z1, {1 << 14, 1}).imag() - exact);
    double e3 = std::abs(gw_log_gamma(z1, {1 << 14, 3}).imag() - exact);
    EXPECT_LT(e1, e0 / 100);
    EXPECT_LT(e3, e1);
}

TEST(Stirling, Im1) {
    const PrefactorParams zeta{1, 2, 0};
    EXPECT_NEAR(stirling_im1(2 * pi, 0.0, zeta), -5 * pi / 8, 1e-14);
    const PrefactorParams p5{5, 1, 1};
    auto d = central_derivative([&](double t) { return stirling_im1(t, 0.0, p5); }, 10.0, 1e-3, 1);
    EXPECT_NEAR(d.value, std::log(std::sqrt(10.0 * 5 / (2 * pi))), 1e-8);
    EXPECT_NEAR(stirling_dim1_dt(10.0, p5), d.value, 1e-8);
    EXPECT_NEAR(stirling_im1(7.0, 0.3, p5) - stirling_im1(7.0, 0.1, p5), pi / 4 * 0.2, 1e-13);
    EXPECT_THROW(stirling_im1(0.0, 0.0, p5), lcrit::domain_error);
}

TEST(Stirling, Im2) {
    EXPECT_EQ(stirling_im2(3.0, 0.5, 1), 0.0);
    EXPECT_EQ(stirling_im2(3.0, -0.5, 2), 0.0);
    EXPECT_LT(std::abs(stirling_im2(1e6, 0.0, 0)), 1e-5);
    EXPECT_THROW(stirling_im2(0.0, 0.0, 1), lcrit::domain_error);
    for (double t : {1.0, 4.0, 25.0}) {
        auto d = central_derivative([&](double u) { return stirling_im2(u, 0.1, 1); }, t, 1e-3, 1);
        EXPECT_NEAR(stirling_dim2_dt(t, 0.1, 1), d.value, 1e-10);
        auto da = central_derivative([&](double u) { return stirling_im2_approx(u, 0.1, 1); }, t, 1e-3, 1);
        EXPECT_NEAR(stirling_dim2_approx_dt(t, 0.1, 1), da.value, 1e-10);
    }
}

TEST(Stirling, Im2MixedDerivative) {
    const double t = 10;
    const double want_approx[] = {-0.0025, 0.0025, 0.0075};
    // mpmath mixed derivative of the exact Im2 at t = 10
    const double want_exact[] = {-0.0026601945, 0.0024688901, 0.0074564213};
    for (int a : {0, 1, 2}) {
        EXPECT_NEAR(mixed_second_derivative_im2_approx(t, a), want_approx[a], 1e-6);
        auto d = central_derivative([&](double e) { return stirling_dim2_dt(t, e, a); }, 0.0, 1e-3, 1);
        EXPECT_NEAR(d.value, want_exact[a], 2e-10);
    }
}

TEST(Stirling, Im3) {
    const auto v = stirling_im3(100.0, 0.0, 1);
    EXPECT_NEAR(v.value, -1.0 / 600, 0.02 / 600);
    for (double t : {0.8, 3.0, 12.0})
        for (int a : {0, 1, 2}) EXPECT_NEAR(stirling_im3(t, 0.1, a).value, stirling_im3_closed(t, 0.1, a), 1e-15);
    double prev = 1e300;
    for (double t = 1; t < 100; t += 3) {
        const auto s = stirling_im3(t, 0.0, 1);
        EXPECT_GT(s.error_bound, 0);
        EXPECT_LT(s.error_bound, prev);
        prev = s.error_bound;
    }
    for (double t : {1.0, 6.0}) {
        auto d = central_derivative([&](double u) { return stirling_im3(u, 0.2, 0).value; }, t, 1e-3, 1);
        EXPECT_NEAR(stirling_dim3_dt(t, 0.2, 0), d.value, 1e-10);
    }
    EXPECT_THROW((stirling_im3(1.0, 0.0, 1, StirlingConfig{7})), lcrit::domain_error);
}

TEST(Stirling, Im3MixedDerivativeIsSmall) {
    for (int a : {0, 1, 2}) {
        for (double t : {5.0, 10.0, 20.0}) {
            auto m = central_derivative([&](double e) { return stirling_dim3_dt(t, e, a); }, 0.0, 1e-3, 1).value;
            const double ratio = std::abs(m) * 4 * t * t;
            EXPECT_LT(ratio, t >= 10 ? 0.06 : 0.2) << a << " " << t;
            if (t == 20.0) {
                EXPECT_NEAR(m, -(2.0 * a - 3) / (2 * std::pow(t, 4)), 0.03 * std::abs(m));
            }
        }
    }
}

TEST(Stirling, RefusesSmallT) {
    EXPECT_THROW(stirling_phase(0.4, 0.0, {3, 1, 1}), lcrit::domain_error);
    EXPECT_THROW(mixed_second_derivative(0.3, 1, Route::stirling), lcrit::domain_error);
}

TEST(Routes, AgreeWithinBound) {
    for (int a : {0, 1, 2})
        for (double e : {-0.2, 0.0, 0.2})
            for (double t : {2.0, 11.8, 55.9, 100.0}) {
                const PrefactorParams p{1, a, a == 1 ? 1 : 0};
                const auto st = stirling_gamma_phase(t, e, p);
                const auto gw = gw_log_gamma_phase({e, t}, a);
                EXPECT_LE(std::abs(st.value - gw.value), st.error_bound + 10 * gw.tail_estimate);
                // and against the high-accuracy evaluation
                const auto ref = gw_log_gamma({(0.5 + e + a) / 2, t / 2}, {1 << 16, 4}).imag();
                EXPECT_LE(std::abs(st.value - ref), st.error_bound * 1.0001 + 1e-12);
            }
}

TEST(MixedDerivative, ThreeCases) {
    for (Route r : {Route::stirling, Route::gw})
        for (int a : {0, 1, 2})
            for (double t : {20.0, 50.0}) {
                const double m = mixed_second_derivative(t, a, r);
                const double want = (2.0 * a - 1) / (4 * t * t);
                EXPECT_NEAR(m / want, 1.0, t == 20 ? 0.05 : 0.01) << a << " " << t;
            }
    // both routes see the same function
    for (double t : {1.0, 3.0, 10.0}) {
        EXPECT_NEAR(mixed_second_derivative(t, 1, Route::stirling), mixed_second_derivative(t, 1, Route::gw),
                    stirling_im3(t, 0.0, 1).error_bound * 4 + 1e-8);
    }
}

TEST(MixedDerivative, AlphaZeroCrossing) {
    const auto c = find_mixed_cross(0, {200000, 2});
    ASSERT_EQ(c.kind, TCross::Kind::crossing);
    EXPECT_NEAR(c.t, 0.5887966, 2e-6);  // mpmath root of Re ψ'((1/2 + it)/2)
}

TEST(TCrossing, OddRoots) {
    // mpmath roots of ½ln(q/π) + ½Re ψ((3/2 + it)/2)
    const std::pair<std::uint64_t, double> want[] = {{3, 2.10620543}, {4, 1.56388156}, {5, 1.21163579},
                                                     {7, 0.71956966}, {8, 0.50095307}, {9, 0.22667569}};
    double prev = 1e9;
    for (auto [q, t] : want) {
        const auto c = find_t_cross({q, 1, 1}, {200000, 2});
        ASSERT_EQ(c.kind, TCross::Kind::crossing) << q;
        EXPECT_NEAR(c.t, t, 1e-4) << q;
        EXPECT_LT(c.t, prev);
        prev = c.t;
    }
    EXPECT_EQ(find_t_cross({11, 1, 1}, {200000, 2}).kind, TCross::Kind::always_positive);
}

TEST(TCrossing, EvenSignPattern) {
    const PrefactorParams q5{5, 0, 0}, q220{220, 0, 0};
    EXPECT_LT(prefactor_dphase_dt({0.0, 0.0}, q5, {100000, 2}), 0);
    EXPECT_LT(prefactor_dphase_dt({0.0, 1.0}, q5, {100000, 2}), 0);
    EXPECT_GT(prefactor_dphase_dt({0.0, 3.0}, q5, {100000, 2}), 0);
    std::vector<double> ts;
    for (double t = 0; t <= 100; t += 0.25) ts.push_back(t);
    for (double v : prefactor_dphase_dt_grid(ts, 0.0, q220, {100000, 2})) EXPECT_GT(v, 0);
}
