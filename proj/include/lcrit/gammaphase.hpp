#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lcrit/arith/characters.hpp"
#include "lcrit/errors.hpp"
#include "lcrit/numeric.hpp"
#include "lcrit/spoint.hpp"

namespace lcrit {

// Gauss-Weierstrass product truncated at `terms`; the partial sums at
// terms/2^j (j <= richardson_levels) come from the same pass and are
// extrapolated in 1/N.
struct GwConfig {
    std::int64_t terms = 1'000'000;
    int richardson_levels = 1;
};

// Cheaper setting used for the Gamma factor inside xi.
inline constexpr GwConfig kXiGammaConfig{std::int64_t{1} << 15, 3};

struct GwEstimate {
    double value;
    double tail_estimate;  // |extrapolated - previous extrapolant|
    double last_term;      // |term n = N|
};

// Shift (q, alpha, alpha1) of the xi prefactor; alpha = 2 encodes zeta(s)(s-1).
struct PrefactorParams {
    std::uint64_t q = 1;
    int alpha = 1;
    int alpha1 = 1;

    void validate() const {
        const bool ok = (alpha == 0 && alpha1 == 0) || (alpha == 1 && alpha1 == 1) || (alpha == 2 && alpha1 == 0);
        if (!ok) throw domain_error("PrefactorParams: (alpha, alpha1) must be (0,0), (1,1) or (2,0)");
        if (alpha == 2 && q != 1) throw domain_error("PrefactorParams: alpha = 2 requires q = 1");
        if (q == 0) throw domain_error("PrefactorParams: q must be >= 1");
    }
    static PrefactorParams for_character(const DirichletCharacter& chi) {
        return {chi.modulus(), chi.parity(), chi.parity()};
    }
};

namespace detail {

// Polynomial extrapolation to h = 0 of samples v_j taken at h_j = 1/N_j
// (Neville). Returns the value and |final - previous diagonal|.
inline Extrapolated extrapolate_inverse_n(std::span<const double> v, std::span<const double> n) {
    const std::size_t m = v.size();
    std::vector<double> p(v.begin(), v.end());
    double prev = p.back();
    for (std::size_t level = 1; level < m; ++level) {
        prev = p[m - 1];
        for (std::size_t j = m - 1; j >= level; --j) {
            const double hj = 1.0 / n[j], hk = 1.0 / n[j - level];
            p[j] = (hk * p[j] - hj * p[j - 1]) / (hk - hj);
        }
    }
    return {p[m - 1], std::abs(p[m - 1] - prev)};
}

inline void check_gw_config(const GwConfig& cfg) {
    if (cfg.terms < 1) throw domain_error("GwConfig: terms must be >= 1");
    if (cfg.richardson_levels < 0 || (cfg.terms >> cfg.richardson_levels) < 1)
        throw domain_error("GwConfig: too many Richardson levels for the number of terms");
}

inline void check_gamma_pole(double x, double y, std::int64_t terms) {
    if (std::abs(y) >= 1e-12 || x > 0.5) return;
    const double n0 = std::round(-x);
    if (n0 >= 0 && n0 <= static_cast<double>(terms) && std::hypot(x + n0, y) < 1e-12)
        throw singularity_error("Gamma pole: z is (numerically) a nonpositive integer", x);
}

// Accumulates Σ_{n=1}^{N} term(n) and records the partial sums at N >> j.
template <std::size_t K, class Term>
std::array<std::vector<double>, K> gw_partials(const GwConfig& cfg, Term&& term, std::vector<double>& counts,
                                               std::array<double, K>& last) {
    const int levels = cfg.richardson_levels;
    std::array<std::vector<double>, K> out;
    counts.clear();
    for (int j = levels; j >= 0; --j) counts.push_back(static_cast<double>(cfg.terms >> j));
    std::array<NeumaierSum<double>, K> acc;
    std::size_t next = 0;
    std::array<double, K> v{};
    for (std::int64_t n = 1; n <= cfg.terms; ++n) {
        term(n, v);
        for (std::size_t c = 0; c < K; ++c) acc[c].add(v[c]);
        if (next < counts.size() && static_cast<double>(n) == counts[next]) {
            for (std::size_t c = 0; c < K; ++c) out[c].push_back(acc[c].value());
            ++next;
        }
    }
    for (std::size_t c = 0; c < K; ++c) last[c] = std::abs(v[c]);
    return out;
}

}  // namespace detail

// ln Γ(z) for Re z > 0 or off the real axis, by the Weierstrass product:
//   ln|Γ| = -ln|z| - γx + Σ [x/n - ½ log1p(2x/n + |z|²/n²)]
//   arg Γ = -γy - atan2(y, x) + Σ [y/n - atan2(y, n + x)]
// The imaginary part is the continuous branch (zero on the positive axis).
inline std::complex<double> gw_log_gamma(std::complex<double> z, const GwConfig& cfg = {},
                                         double* tail_estimate = nullptr) {
    detail::check_gw_config(cfg);
    const double x = z.real(), y = z.imag();
    detail::check_gamma_pole(x, y, cfg.terms);
    const double r2 = x * x + y * y;
    std::vector<double> counts;
    std::array<double, 2> last{};
    auto parts = detail::gw_partials<2>(
        cfg,
        [&](std::int64_t n, std::array<double, 2>& v) {
            const double dn = static_cast<double>(n);
            v[0] = x / dn - 0.5 * std::log1p(2 * x / dn + r2 / (dn * dn));
            v[1] = y / dn - std::atan2(y, dn + x);
        },
        counts, last);
    const auto re = detail::extrapolate_inverse_n(parts[0], counts);
    const auto im = detail::extrapolate_inverse_n(parts[1], counts);
    if (tail_estimate) *tail_estimate = std::hypot(re.error_estimate, im.error_estimate);
    return {-0.5 * std::log(r2) - euler_gamma * x + re.value, -euler_gamma * y - std::atan2(y, x) + im.value};
}

// arg Γ((s + alpha)/2) for s = 1/2 + eps + i t.
inline GwEstimate gw_log_gamma_phase(SPoint s, int alpha, const GwConfig& cfg = {}) {
    detail::check_gw_config(cfg);
    const double x = (0.5 + s.eps + alpha) / 2, y = s.t / 2;
    detail::check_gamma_pole(x, y, cfg.terms);
    std::vector<double> counts;
    std::array<double, 1> last{};
    auto parts = detail::gw_partials<1>(
        cfg,
        [&](std::int64_t n, std::array<double, 1>& v) {
            const double dn = static_cast<double>(n);
            v[0] = y / dn - std::atan2(y, dn + x);
        },
        counts, last);
    const auto e = detail::extrapolate_inverse_n(parts[0], counts);
    return {-euler_gamma * y - std::atan2(y, x) + e.value, e.error_estimate, last[0]};
}

// ∂/∂t of gw_log_gamma_phase (termwise).
inline GwEstimate gw_dphase_dt(SPoint s, int alpha, const GwConfig& cfg = {}) {
    detail::check_gw_config(cfg);
    const double x = (0.5 + s.eps + alpha) / 2, y = s.t / 2;
    detail::check_gamma_pole(x, y, cfg.terms);
    const double y2 = y * y;
    std::vector<double> counts;
    std::array<double, 1> last{};
    auto parts = detail::gw_partials<1>(
        cfg,
        [&](std::int64_t n, std::array<double, 1>& v) {
            const double dn = static_cast<double>(n), a = dn + x;
            v[0] = 0.5 * (1.0 / dn - a / (a * a + y2));
        },
        counts, last);
    const auto e = detail::extrapolate_inverse_n(parts[0], counts);
    return {0.5 * (-euler_gamma - x / (x * x + y2)) + e.value, e.error_estimate, last[0]};
}

// ½ ln(q/π) + ∂ arg Γ((s+α)/2) / ∂t: t-derivative of the xi prefactor phase.
inline double prefactor_dphase_dt(SPoint s, const PrefactorParams& params, const GwConfig& cfg = {}) {
    params.validate();
    return 0.5 * std::log(static_cast<double>(params.q) / pi) + gw_dphase_dt(s, params.alpha, cfg).value;
}

inline std::vector<double> prefactor_dphase_dt_grid(std::span<const double> ts, double eps,
                                                    const PrefactorParams& params, const GwConfig& cfg = {}) {
    std::vector<double> out(ts.size());
    parallel_for_index(ts.size(), [&](std::size_t i) { out[i] = prefactor_dphase_dt({eps, ts[i]}, params, cfg); });
    return out;
}

// ---------------------------------------------------------------- Stirling

struct StirlingConfig {
    int K = 3;
    // B_2 .. B_12 as exact fractions
    static constexpr std::array<std::array<std::int64_t, 2>, 6> bernoulli{
        {{1, 6}, {-1, 30}, {1, 42}, {-1, 30}, {5, 66}, {-691, 2730}}};

    static double b2k(int k) {
        const auto& f = bernoulli.at(static_cast<std::size_t>(k - 1));
        return static_cast<double>(f[0]) / static_cast<double>(f[1]);
    }
    void validate() const {
        if (K < 2 || K > static_cast<int>(bernoulli.size()))
            throw domain_error("StirlingConfig: K must lie in [2, 6]");
    }
};

struct StirlingTerm {
    double value;
    double error_bound;
    bool usable;  // error_bound <= |value|
};

namespace detail {
inline std::complex<double> stirling_z(double t, double eps, int alpha) {
    return {(2 * eps + 2 * alpha - 3) / 4, t / 2};
}
}  // namespace detail

// Im1 = -t/2 + (t/2) ln(tq/2π) - π/8 + (π/4)(ε+α)
inline double stirling_im1(double t, double eps, const PrefactorParams& params) {
    params.validate();
    if (!(t > 0)) throw domain_error("stirling_im1: t must be > 0");
    const double q = static_cast<double>(params.q);
    return -t / 2 + (t / 2) * std::log(t * q / (2 * pi)) - pi / 8 + (pi / 4) * (eps + params.alpha);
}

inline double stirling_dim1_dt(double t, const PrefactorParams& params) {
    params.validate();
    if (!(t > 0)) throw domain_error("stirling_dim1_dt: t must be > 0");
    return 0.5 * std::log(t * static_cast<double>(params.q) / (2 * pi));
}

// Im2 = (t/4) ln(1 + r²) + (y/2 - 1/4) atan(-r),  y = ε+α, r = (2y-3)/(2t)
inline double stirling_im2(double t, double eps, int alpha) {
    if (t == 0) throw domain_error("stirling_im2: t must be nonzero");
    const double y = eps + alpha, r = (2 * y - 3) / (2 * t);
    return (t / 4) * std::log1p(r * r) + (y / 2 - 0.25) * std::atan((3 - 2 * y) / (2 * t));
}

// Large-t expansion of Im2 to O(1/t): r²t/4 - (y/2 - 1/4) r.
inline double stirling_im2_approx(double t, double eps, int alpha) {
    if (t == 0) throw domain_error("stirling_im2_approx: t must be nonzero");
    const double y = eps + alpha, r = (2 * y - 3) / (2 * t);
    return r * r * t / 4 - (y / 2 - 0.25) * r;
}

inline double stirling_dim2_dt(double t, double eps, int alpha) {
    if (t == 0) throw domain_error("stirling_dim2_dt: t must be nonzero");
    const double y = eps + alpha, r = (2 * y - 3) / (2 * t), d = 1 + r * r;
    return 0.25 * std::log1p(r * r) - r * r / (2 * d) + (y / 2 - 0.25) * (r / t) / d;
}

inline double stirling_dim2_approx_dt(double t, double eps, int alpha) {
    if (t == 0) throw domain_error("stirling_dim2_approx_dt: t must be nonzero");
    const double y = eps + alpha, r = (2 * y - 3) / (2 * t);
    return -r * r / 4 + (y / 2 - 0.25) * r / t;
}

// Im Σ_{k<K} B_2k / (2k(2k-1) z^{2k-1}) with the remainder bound
// |B_2K| / (2K(2K-1)|z|^{2K-1}) / cos^{2K}(arg z / 2).
inline StirlingTerm stirling_im3(double t, double eps, int alpha, const StirlingConfig& cfg = {}) {
    cfg.validate();
    if (!(t > 0)) throw domain_error("stirling_im3: t must be > 0");
    const auto z = detail::stirling_z(t, eps, alpha);
    const auto z2 = z * z;
    std::complex<double> zp = z, sum = 0;
    for (int k = 1; k < cfg.K; ++k) {
        sum += StirlingConfig::b2k(k) / (2.0 * k * (2.0 * k - 1)) / zp;
        zp *= z2;
    }
    const int K = cfg.K;
    const double bound = std::abs(StirlingConfig::b2k(K)) / (2.0 * K * (2.0 * K - 1)) /
                         std::pow(std::abs(z), 2 * K - 1) / std::pow(std::cos(std::arg(z) / 2), 2 * K);
    return {sum.imag(), bound, bound <= std::abs(sum.imag())};
}

// Closed form of the K = 3 value, kept as an independent check.
inline double stirling_im3_closed(double t, double eps, int alpha) {
    const double c = 2 * eps + 2 * alpha - 3, r = c / (2 * t), d = 1 + r * r;
    return -1 / (6 * t * d) - 1 / (45 * std::pow(t, 3) * d * d * d) + c * c / (60 * std::pow(t, 5) * d * d * d);
}

// ∂Im3/∂t = Re F'(z) / 2 with F'(z) = -Σ B_2k / (2k z^{2k}).
inline double stirling_dim3_dt(double t, double eps, int alpha, const StirlingConfig& cfg = {}) {
    cfg.validate();
    if (!(t > 0)) throw domain_error("stirling_dim3_dt: t must be > 0");
    const auto z = detail::stirling_z(t, eps, alpha);
    const auto z2 = z * z;
    std::complex<double> zp = z2, sum = 0;
    for (int k = 1; k < cfg.K; ++k) {
        sum -= StirlingConfig::b2k(k) / (2.0 * k) / zp;
        zp *= z2;
    }
    return sum.real() / 2;
}

// Below this t the asymptotic route is refused.
inline constexpr double kStirlingMinT = 0.5;

// Im1 + Im2 + Im3 = arg Γ((s+α)/2) + (t/2) ln(q/π).
inline StirlingTerm stirling_phase(double t, double eps, const PrefactorParams& params,
                                   const StirlingConfig& cfg = {}) {
    if (!(t >= kStirlingMinT)) throw domain_error("stirling route: t below 0.5 is outside the asymptotic regime");
    const auto im3 = stirling_im3(t, eps, params.alpha, cfg);
    const double v = stirling_im1(t, eps, params) + stirling_im2(t, eps, params.alpha) + im3.value;
    return {v, im3.error_bound, im3.usable};
}

// arg Γ((s+α)/2) alone, i.e. stirling_phase - (t/2) ln(q/π).
inline StirlingTerm stirling_gamma_phase(double t, double eps, const PrefactorParams& params,
                                         const StirlingConfig& cfg = {}) {
    auto r = stirling_phase(t, eps, params, cfg);
    r.value -= 0.5 * t * std::log(static_cast<double>(params.q) / pi);
    return r;
}

inline double stirling_dphase_dt(double t, double eps, const PrefactorParams& params,
                                 const StirlingConfig& cfg = {}) {
    if (!(t >= kStirlingMinT)) throw domain_error("stirling route: t below 0.5 is outside the asymptotic regime");
    return stirling_dim1_dt(t, params) + stirling_dim2_dt(t, eps, params.alpha) +
           stirling_dim3_dt(t, eps, params.alpha, cfg);
}

// ------------------------------------------------------- mixed derivative

enum class Route { stirling, gw };

inline constexpr double kEpsStep = 1e-3;
inline constexpr double kLadderRelTol = 1e-6;
inline constexpr double kLadderFloor = 1e-4;

// ∂²/∂ε∂t of the prefactor phase at ε = 0 (q drops out).
inline double mixed_second_derivative(double t, int alpha, Route route, const GwConfig& cfg = {},
                                      const StirlingConfig& scfg = {}) {
    if (!(t > 0)) throw domain_error("mixed_second_derivative: t must be > 0");
    if (alpha < 0 || alpha > 2) throw domain_error("mixed_second_derivative: alpha must be 0, 1 or 2");
    Derivative d{};
    if (route == Route::gw) {
        if (cfg.terms < 100'000) throw domain_error("mixed_second_derivative: gw route needs N >= 1e5");
        d = central_derivative([&](double e) { return gw_dphase_dt({e, t}, alpha, cfg).value; }, 0.0, kEpsStep, 1);
    } else {
        if (t < kStirlingMinT) throw domain_error("stirling route: t below 0.5 is outside the asymptotic regime");
        d = central_derivative(
            [&](double e) { return stirling_dim2_dt(t, e, alpha) + stirling_dim3_dt(t, e, alpha, scfg); }, 0.0,
            kEpsStep, 1);
    }
    if (d.disagreement > kLadderRelTol * std::max(std::abs(d.value), kLadderFloor))
        throw numerical_error("mixed_second_derivative: Richardson ladder did not settle");
    return d.value;
}

// ∂²Im2approx/∂ε∂t, which is exactly (2y - 1)/(4t²) at y = α.
inline double mixed_second_derivative_im2_approx(double t, int alpha) {
    return central_derivative([&](double e) { return stirling_dim2_approx_dt(t, e, alpha); }, 0.0, kEpsStep, 1)
        .value;
}

struct TCross {
    enum class Kind { crossing, always_positive, always_negative };
    Kind kind;
    double t;  // meaningful for Kind::crossing
};

namespace detail {
template <class F>
TCross first_crossing(F&& f, std::span<const double> grid, double tol) {
    double prev_t = grid[0], prev_v = f(grid[0]);
    if (prev_v == 0) return {TCross::Kind::crossing, prev_t};
    const bool first_positive = prev_v > 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double v = f(grid[i]);
        if ((v > 0) != (prev_v > 0) || v == 0)
            return {TCross::Kind::crossing, bisect(f, prev_t, grid[i], tol, prev_v, v)};
        prev_t = grid[i];
        prev_v = v;
    }
    return {first_positive ? TCross::Kind::always_positive : TCross::Kind::always_negative, 0.0};
}
}  // namespace detail

// First sign change of prefactor_dphase_dt (ε = 0) on [0, 100], refined to 1e-4.
inline TCross find_t_cross(const PrefactorParams& params, const GwConfig& cfg = {}) {
    params.validate();
    std::vector<double> grid;
    for (int k = 0; k <= 64; ++k) grid.push_back(100.0 * (k / 64.0) * (k / 64.0));
    return detail::first_crossing([&](double t) { return prefactor_dphase_dt({0.0, t}, params, cfg); }, grid,
                                  1e-4);
}

// First sign change of the GW mixed derivative on [t_lo, t_hi].
inline TCross find_mixed_cross(int alpha, const GwConfig& cfg = {}, double t_lo = 0.05, double t_hi = 5.0,
                               double tol = 1e-6) {
    std::vector<double> grid;
    for (double t = t_lo; t <= t_hi + 1e-12; t += 0.05) grid.push_back(t);
    return detail::first_crossing([&](double t) { return mixed_second_derivative(t, alpha, Route::gw, cfg); },
                                  grid, tol);
}

}  // namespace lcrit
