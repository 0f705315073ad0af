#pragma once

// Desk-scale acceptance checks shared by `lcrit verify` and the acceptance
// binary. Each check returns pass/fail plus the measured numbers; thresholds
// and budgets live here and nowhere else.

#include <array>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>

#include "lcrit/arith/characters.hpp"
#include "lcrit/arith/li.hpp"
#include "lcrit/eulerphase.hpp"
#include "lcrit/eulerphase/ledger.hpp"
#include "lcrit/gammaphase.hpp"
#include "lcrit/lfunction.hpp"

namespace lcrit::verify {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    Outcome (*run)();
};

struct Result {
    int id;
    std::string name;
    bool pass;  // numeric check and budget
    double seconds;
    double budget_seconds;
    std::string detail;
};

namespace detail {

inline std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

inline Outcome gauss_law() {
    double worst = 0;
    int n = 0;
    for (std::uint64_t q = 1; q <= 50; ++q)
        for (const auto& chi : enumerate_characters(q)) {
            if (!chi.is_primitive()) continue;
            worst = std::max(worst, std::abs(std::norm(gauss_sum(chi)) - static_cast<double>(q)));
            ++n;
        }
    return {worst < 1e-9, fmt("%d primitive characters, max ||tau|^2 - q| = %.3e (tol 1e-9)", n, worst)};
}

inline Outcome table_mod5() {
    // rows χ(1..4) as fractions of a turn
    const std::array<std::array<RationalPhase, 4>, 4> want{{
        {RationalPhase(0, 1), RationalPhase(0, 1), RationalPhase(0, 1), RationalPhase(0, 1)},
        {RationalPhase(0, 1), RationalPhase(1, 4), RationalPhase(3, 4), RationalPhase(1, 2)},
        {RationalPhase(0, 1), RationalPhase(1, 2), RationalPhase(1, 2), RationalPhase(0, 1)},
        {RationalPhase(0, 1), RationalPhase(3, 4), RationalPhase(1, 4), RationalPhase(1, 2)},
    }};
    const auto chars = enumerate_characters(5);
    std::array<bool, 4> used{};
    int matched = 0;
    for (const auto& row : want)
        for (std::size_t i = 0; i < chars.size(); ++i) {
            if (used[i]) continue;
            bool same = true;
            for (int n = 1; n <= 4; ++n) same = same && chars[i].phase(n) == row[n - 1];
            if (same) {
                used[i] = true;
                ++matched;
                break;
            }
        }
    return {matched == 4 && chars.size() == 4, fmt("%d of 4 rows matched exactly", matched)};
}

inline Outcome three_cases() {
    bool ok = true;
    std::string d;
    for (double t : {10.0, 20.0, 50.0})
        for (int a : {2, 1, 0}) {
            const double want = (2.0 * a - 1) / (4 * t * t);
            const double got = mixed_second_derivative(t, a, Route::gw);
            const double rel = std::abs(got / want - 1);
            const double tol = t >= 50 ? 0.005 : 0.02;
            ok = ok && rel < tol;
            d += fmt("t=%g a=%d rel=%.2e; ", t, a, rel);
        }
    return {ok, d};
}

inline Outcome mixed_cross() {
    const auto c = find_mixed_cross(0);
    const bool ok = c.kind == TCross::Kind::crossing && c.t > 0.585 && c.t < 0.588;
    return {ok, fmt("alpha=0 crossing at t=%.7f (window (0.585, 0.588))", c.t)};
}

inline Outcome table_odd() {
    const std::array<std::pair<std::uint64_t, double>, 6> want{{{3, 2.0}, {4, 1.5}, {5, 1.25}, {7, 0.75},
                                                                {8, 0.5}, {9, 0.25}}};
    bool ok = true;
    double prev = 1e300;
    std::string d;
    for (auto [q, t0] : want) {
        const auto c = find_t_cross({q, 1, 1});
        const double t = c.kind == TCross::Kind::crossing ? c.t : -1;
        ok = ok && std::abs(t - t0) <= 0.05 && t < prev;
        prev = t;
        d += fmt("q=%llu %.4f (want %.2f); ", static_cast<unsigned long long>(q), t, t0);
    }
    return {ok, d};
}

inline Outcome route_agreement() {
    double worst_ratio = 0;
    for (int a : {0, 1, 2})
        for (double e : {-0.2, 0.0, 0.2})
            for (int i = 0; i < 21; ++i) {
                const double t = 2.0 + 98.0 * i / 20;
                const auto st = stirling_gamma_phase(t, e, {1, a, a == 1 ? 1 : 0});
                const auto gw = gw_log_gamma_phase({e, t}, a);
                worst_ratio = std::max(worst_ratio,
                                       std::abs(st.value - gw.value) / (st.error_bound + 10 * gw.tail_estimate));
            }
    return {worst_ratio <= 1, fmt("189 samples, max |diff| / allowance = %.3f", worst_ratio)};
}

inline Outcome realness() {
    double worst_im = 0, worst_l = 0;
    for (std::uint64_t q : {3, 4, 5, 7})
        for (const auto& chi : odd_primitive_characters(q)) {
            const CompletedL xi(chi);
            for (int k = 5; k <= 200; ++k) {
                const double t = k * 0.1;
                const auto e = eta_eval(t, 0.0, xi);
                worst_im = std::max(worst_im, std::abs(e.eta.imag()) / std::max(std::abs(e.eta), 1e-12));
                const auto am = angular_momentum({0.0, t}, xi);
                worst_l = std::max(worst_l, std::abs(am.value) / (std::norm(am.xi) * (1 + std::log(t))));
            }
        }
    return {worst_im < 1e-7 && worst_l < 1e-6,
            fmt("max |Im eta|/|eta| = %.2e (tol 1e-7), max |L|/(|xi|^2 (1+ln t)) = %.2e (tol 1e-6)", worst_im,
                worst_l)};
}

inline Outcome curvature_routes() {
    const CompletedL xi(odd_primitive_characters(3).at(0));
    std::mt19937_64 rng(20240917);
    std::uniform_real_distribution<double> u(1.0, 30.0);
    double worst = 0, worst_t = 0;
    for (int i = 0; i < 50; ++i) {
        const double t = u(rng);
        const auto r = critical_curvature(t, xi);
        const double rel = std::abs(r.value - r.cross_check) / std::abs(r.value);
        if (rel > worst) worst = rel, worst_t = t;
    }
    return {worst < 1e-4, fmt("50 random t in [1,30], max relative gap %.2e at t=%.4f (tol 1e-4)", worst, worst_t)};
}

inline Outcome positivity() {
    double lowest = 1e300, at_t = 0;
    std::uint64_t at_q = 0;
    int n = 0;
    for (std::uint64_t q : {3, 4, 5, 7, 8, 9})
        for (const auto& chi : odd_primitive_characters(q)) {
            const CompletedL xi(chi);
            for (int k = 10; k <= 600; ++k) {
                const double t = k * 0.05;
                const double v = critical_curvature(t, xi, 1e-3, false).value;
                ++n;
                if (v < lowest) lowest = v, at_t = t, at_q = q;
            }
        }
    return {lowest > 0, fmt("%d points, min [eta']^2 - eta eta'' = %.4e at q=%llu t=%.2f", n, lowest,
                            static_cast<unsigned long long>(at_q), at_t)};
}

inline Outcome zero_locations() {
    auto first_zero = [](const DirichletCharacter& chi, double hi) {
        const auto z = find_zeros_on_line(chi, 0.0, hi, 0.05);
        return z.empty() ? 1e300 : z.front().t_zero;
    };
    const double z3 = first_zero(odd_primitive_characters(3).at(0), 10.0);
    const double z4 = first_zero(odd_primitive_characters(4).at(0), 10.0);
    double z5 = 1e300, z7 = 1e300;
    for (const auto& c : odd_primitive_characters(5)) z5 = std::min(z5, first_zero(c, 4.0));
    for (const auto& c : odd_primitive_characters(7)) z7 = std::min(z7, first_zero(c, 2.0));
    const bool ok = z3 > 8.0 && z3 < 8.2 && z4 > 6.0 && z4 < 6.2 && z5 > 4.0 && z7 > 2.0;
    return {ok, fmt("q=3 first zero %.6f, q=4 %.6f, q=5 %s below 4, q=7 %s below 2", z3, z4,
                    z5 > 4 ? "none" : "some", z7 > 2 ? "none" : "some")};
}

inline Outcome level() {
    const auto chi = odd_primitive_characters(3).at(0);
    const auto table = sieve_primes(1'000'000);
    const EulerProduct ep(chi, table);
    const auto w = WindowParams::make(1'000'000);
    const double w0 = ep.windowed_exact(20.0, 0.0, w), w2 = ep.windowed_exact(20.0, 0.2, w);
    const bool ok = w0 >= -1.28 && w0 <= -0.98 && std::abs(w2) < std::abs(w0);
    return {ok, fmt("W(eps=0) = %.5f (window [-1.28, -0.98], target %.5f), W(eps=0.2) = %.5f", w0,
                    -std::log(std::sqrt(60 / (2 * pi))), w2)};
}

inline Outcome residual_bounded() {
    const auto chi = odd_primitive_characters(3).at(0);
    const auto table = sieve_primes(200'000);
    const EulerProduct ep(chi, table);
    const auto w1 = WindowParams::make(1e5, 100'000), w2 = WindowParams::make(1e5, 200'000);
    bool ok = true;
    std::string d;
    for (double t : {8.04, 5.0}) {
        const double a = ep.estimator_residual(t, 0.25, w1).value, b = ep.estimator_residual(t, 0.25, w2).value;
        const double rel = std::abs(b - a) / std::abs(a);
        ok = ok && std::isfinite(a) && rel < 0.01;
        d += fmt("t=%.2f residual %.5f -> %.5f (rel %.2e); ", t, a, b, rel);
    }
    return {ok, d};
}

inline Outcome rho() {
    const auto chi = odd_primitive_characters(3).at(0);
    const auto table = sieve_primes(1'000'000);
    const EulerProduct ep(chi, table);
    const auto w = WindowParams::make(1'000'000);
    const double t = 10.0;
    auto ratios = [&](double bound) {
        const auto k = ledger_k_max(t, chi, bound);
        return rho_ratios(build_oscillation_ledger(t, 0.0, ep, w, k), build_oscillation_ledger(t, 0.1, ep, w, k));
    };
    const auto r5 = ratios(1e5), r6 = ratios(1e6);
    const double g5 = std::abs(r5.rho_plus - r5.rho_minus), g6 = std::abs(r6.rho_plus - r6.rho_minus);
    const bool ok = r6.rho_plus < 1 && r6.rho_minus < 1 && g6 < g5;
    return {ok, fmt("t=10: rho+ %.4f rho- %.4f at 1e6; |rho+ - rho-| %.3e (1e5) -> %.3e (1e6)", r6.rho_plus,
                    r6.rho_minus, g5, g6)};
}

inline Outcome pnt() {
    double lo = 1e300, hi = 0;
    for (std::uint64_t q : {3, 4, 5})
        for (auto [h, r] : pnt_class_ratio(1e6, q)) lo = std::min(lo, r), hi = std::max(hi, r);
    return {lo >= 0.99 && hi <= 1.01, fmt("class ratios at 1e6 in [%.5f, %.5f]", lo, hi)};
}

inline Outcome reduction() {
    double worst = 0;
    for (double s : {2.0, 3.0})
        for (std::uint64_t q : {2, 5, 9}) worst = std::max(worst, reduction_identities({s - 0.5, 0.0}, q).max_residual);
    return {worst < 1e-8, fmt("max residual %.2e (tol 1e-8)", worst)};
}

inline Outcome symmetry() {
    const auto table = sieve_primes(100'000);
    const EulerProduct ep(character_at(5, 2), table);
    const auto w = WindowParams::make(100'000);
    std::vector<double> grid;
    for (int k = -300; k <= 300; ++k) grid.push_back(k * 0.05);
    const auto sc = scan_phase(ep, grid, 0.0, Estimator::exact_arctan, w);
    double worst = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        worst = std::max(worst, std::abs(sc.values[i] - sc.values[grid.size() - 1 - i]));
    return {worst < 1e-9 && ep.character().is_real() && ep.character().parity() == 0,
            fmt("601 points on [-15,15], max |v(t) - v(-t)| = %.2e (tol 1e-9)", worst)};
}

}  // namespace detail

inline const std::array<Criterion, 16>& criteria() {
    static const std::array<Criterion, 16> all{{
        {1, "gauss-sum-law", 1, detail::gauss_law},
        {2, "character-table-mod5", 1, detail::table_mod5},
        {3, "mixed-derivative-three-cases", 10, detail::three_cases},
        {4, "mixed-derivative-crossing", 30, detail::mixed_cross},
        {5, "odd-threshold-table", 30, detail::table_odd},
        {6, "stirling-gw-agreement", 60, detail::route_agreement},
        {7, "eta-realness-angular-momentum", 120, detail::realness},
        {8, "curvature-two-routes", 60, detail::curvature_routes},
        {9, "positivity-desk-scale", 300, detail::positivity},
        {10, "first-zero-locations", 120, detail::zero_locations},
        {11, "level-check", 120, detail::level},
        {12, "residual-boundedness", 60, detail::residual_bounded},
        {13, "rho-ratios", 180, detail::rho},
        {14, "pnt-class-ratios", 10, detail::pnt},
        {15, "reduction-identities", 10, detail::reduction},
        {16, "symmetry-scan", 180, detail::symmetry},
    }};
    return all;
}

inline Result run_criterion(const Criterion& c) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = c.run();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = sec < c.budget_seconds;
    if (!in_budget) o.detail += detail::fmt(" [over budget: %.1f s > %.0f s]", sec, c.budget_seconds);
    return {c.id, c.name, o.pass && in_budget, sec, c.budget_seconds, o.detail};
}

inline Result run_criterion(int id) {
    for (const auto& c : criteria())
        if (c.id == id) return run_criterion(c);
    throw domain_error("verify: no criterion with id " + std::to_string(id));
}

// "PASS c07 name (1.23 s): detail"
inline std::string summary_line(const Result& r) {
    return detail::fmt("%s c%02d %s (%.2f s): ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds) +
           r.detail;
}

}  // namespace lcrit::verify
