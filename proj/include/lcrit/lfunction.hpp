#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lcrit/arith/characters.hpp"
#include "lcrit/errors.hpp"
#include "lcrit/gammaphase.hpp"
#include "lcrit/numeric.hpp"
#include "lcrit/spoint.hpp"

namespace lcrit {

using cplx = std::complex<double>;

struct LValue {
    SPoint s;
    std::uint64_t modulus = 1;
    std::size_t chi_index = 0;
    cplx value;
    double abs_err_estimate = 0;
    std::int64_t n_terms_used = 0;
};

namespace detail {

// B_2k / (2k)!, k = 1..30
inline constexpr double kBernoulliOverFactorial[] = {
    8.3333333333333333e-2,  -1.3888888888888889e-3, 3.3068783068783069e-5,  -8.2671957671957672e-7,
    2.0876756987868099e-8,  -5.2841901386874932e-10, 1.3382536530684679e-11, -3.3896802963225829e-13,
    8.5860620562778446e-15, -2.1748686985580619e-16, 5.5090028283602295e-18, -1.3954464685812523e-19,
    3.5347070396294675e-21, -8.9535174270375469e-23, 2.2679524523376831e-24, -5.7447906688722024e-26,
    1.4551724756148649e-27, -3.6859949406653102e-29, 9.3367342570950447e-31, -2.3650224157006299e-32,
    5.9906717624821343e-34, -1.5174548844682903e-35, 3.8437581254541882e-37, -9.736353072646691e-39,
    2.466247044200681e-40,  -6.2470767418207437e-42, 1.5824030244644914e-43, -4.008273685948936e-45,
    1.0153075855569556e-46, -2.5718041582418717e-48};
inline constexpr int kEmMaxTerms = 29;  // one coefficient is kept for the remainder bound

struct HurwitzTail {
    cplx value;
    double bound;
    int terms;
};

// ζ(s, w) minus its 1/(s-1) part, i.e. the Euler-Maclaurin series
//   w^{-s}/2 + Σ_{k<=K} B_2k/(2k)! (s)_{2k-1} w^{-s-2k+1},
// stopped once the remainder bound falls below `target`.
inline HurwitzTail hurwitz_em(cplx s, double w, double target) {
    const double lw = std::log(w);
    const cplx wms = std::exp(-s * lw);
    cplx sum = 0.5 * wms;
    cplx poch = s;             // (s)_{2k-1}
    cplx wpow = wms / w;       // w^{-s-2k+1} at k = 1
    const double w2 = w * w;
    const double sigma = s.real();
    for (int k = 1; k <= kEmMaxTerms; ++k) {
        sum += kBernoulliOverFactorial[k - 1] * poch * wpow;
        // next Pochhammer and power, which also give the remainder bound
        const cplx poch_next = poch * (s + double(2 * k - 1)) * (s + double(2 * k));
        const cplx wpow_next = wpow / w2;
        const double first_omitted = std::abs(kBernoulliOverFactorial[k] * poch_next * wpow_next);
        const double bound = first_omitted * std::abs(s + double(2 * k + 1)) / (sigma + 2 * k + 1);
        poch = poch_next;
        wpow = wpow_next;
        if (bound < target) return {sum, bound, k};
    }
    return {sum, std::numeric_limits<double>::infinity(), kEmMaxTerms};
}

// (w^{1-s} - 1)/(s - 1), finite at s = 1.
inline cplx shifted_power_ratio(cplx s, double w) {
    const double lw = std::log(w);
    const cplx u = (1.0 - s) * lw;
    if (std::abs(u) < 1e-8) return -lw * (1.0 + u / 2.0 + u * u / 6.0);
    return -lw * (std::exp(u) - 1.0) / u;
}

}  // namespace detail

// L(s, χ) = Σ χ(n) n^{-s}. Head: complete periods n <= Mq. Tail: per unit
// residue a, q^{-s} ζ(s, M + a/q) by Euler-Maclaurin; for non-principal χ the
// 1/(s-1) parts cancel across classes and are dropped exactly.
inline LValue l_eval(SPoint sp, const DirichletCharacter& chi, double tol = 1e-13) {
    if (!(sp.eps > -0.5)) throw domain_error("l_eval: eps must exceed -1/2");
    if (chi.is_principal() && !(sp.eps > 0.5))
        throw domain_error("l_eval: principal character needs eps > 1/2 (pole region)");
    if (!(tol > 0)) throw domain_error("l_eval: tol must be positive");
    const cplx s = sp.s();
    const auto q = static_cast<std::int64_t>(chi.modulus());
    const double qd = static_cast<double>(q), sigma = sp.sigma();
    const double phi = static_cast<double>(euler_phi(chi.modulus()));

    std::int64_t M = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::max(8.0, std::abs(s)) / qd)));
    for (int attempt = 0; attempt < 12; ++attempt, M *= 2) {
        const double qms_abs = std::pow(qd, -sigma);
        const cplx qms = std::exp(-s * std::log(qd));
        const double target = 0.5 * tol / (phi * qms_abs);
        NeumaierSum<cplx> tail;
        double bound = 0;
        int terms = 0;
        bool ok = true;
        for (std::int64_t a = 1; a <= q && ok; ++a) {
            if (!chi.is_unit(a)) continue;
            const double w = static_cast<double>(M) + static_cast<double>(a) / qd;
            const auto em = detail::hurwitz_em(s, w, target);
            if (!std::isfinite(em.bound)) {
                ok = false;
                break;
            }
            cplx part = em.value;
            if (chi.is_principal())
                part += std::exp((1.0 - s) * std::log(w)) / (s - 1.0);
            else
                part += detail::shifted_power_ratio(s, w);
            tail.add(chi.value(a) * part);
            bound += em.bound;
            terms += em.terms;
        }
        if (!ok) continue;

        const std::int64_t n_head = M * q;
        NeumaierSum<cplx> head;
        double mag_sum = 0;
        for (std::int64_t n = 1; n <= n_head; ++n) {
            if (!chi.is_unit(n)) continue;
            const double ln = std::log(static_cast<double>(n));
            const double mag = std::exp(-sigma * ln);
            const double ang = chi.phase(n).radians() - sp.t * ln;
            head.add(std::polar(mag, ang));
            mag_sum += mag;
        }
        LValue out;
        out.s = sp;
        out.modulus = chi.modulus();
        out.chi_index = chi.index();
        out.value = head.value() + qms * tail.value();
        out.abs_err_estimate = bound * qms_abs + 4e-16 * (mag_sum + std::abs(out.value));
        out.n_terms_used = n_head + terms;
        return out;
    }
    throw numerical_error("l_eval: Euler-Maclaurin tail did not reach the requested tolerance");
}

struct XiConfig {
    GwConfig gamma = kXiGammaConfig;
    double l_tol = 1e-15;
};

// Completed L-function of a primitive non-principal character:
//   ξ(s,χ) = (q/π)^{(s+α)/2} Γ((s+α)/2) L(s,χ)
// and the rotated η = e^{iθ} ξ with θ = ½ arg(i^α √q / τ(χ)) (principal arg).
class CompletedL {
public:
    explicit CompletedL(const DirichletCharacter& chi, XiConfig cfg = {}) : chi_(chi), cfg_(cfg) {
        if (!chi.is_primitive() || chi.is_principal())
            throw domain_error("completed L-function needs a primitive non-principal character");
        const double q = static_cast<double>(chi.modulus());
        log_q_over_pi_ = std::log(q / pi);
        tau_ = gauss_sum(chi);
        root_number_ = std::polar(std::sqrt(q), chi.parity() * pi / 2) / tau_;
        theta_ = 0.5 * std::arg(root_number_);
        rotation_ = std::polar(1.0, theta_);
    }

    const DirichletCharacter& character() const noexcept { return chi_; }
    double normalizer_phase() const noexcept { return theta_; }
    // i^α √q / τ(χ), unimodular
    cplx root_number() const noexcept { return root_number_; }

    cplx xi(SPoint sp) const {
        const cplx z = (sp.s() + static_cast<double>(chi_.parity())) / 2.0;
        const cplx log_pref = z * log_q_over_pi_ + gw_log_gamma(z, cfg_.gamma);
        return std::exp(log_pref) * l_eval(sp, chi_, cfg_.l_tol).value;
    }
    cplx eta(double t, double eps) const { return rotation_ * xi({eps, t}); }

private:
    DirichletCharacter chi_;
    XiConfig cfg_;
    double log_q_over_pi_ = 0;
    cplx tau_, root_number_, rotation_;
    double theta_ = 0;
};

inline cplx xi_eval(SPoint s, const DirichletCharacter& chi, XiConfig cfg = {}) {
    return CompletedL(chi, cfg).xi(s);
}

struct EtaSample {
    double t = 0, eps = 0;
    std::uint64_t modulus = 1;
    std::size_t chi_index = 0;
    cplx eta;
    double normalizer_phase = 0;
};

inline EtaSample eta_eval(double t, double eps, const CompletedL& xi) {
    return {t, eps, xi.character().modulus(), xi.character().index(), xi.eta(t, eps), xi.normalizer_phase()};
}

inline EtaSample eta_eval(double t, double eps, const DirichletCharacter& chi, XiConfig cfg = {}) {
    return eta_eval(t, eps, CompletedL(chi, cfg));
}

// Bulk evaluation over a t-grid.
inline std::vector<EtaSample> eta_grid(const CompletedL& xi, std::span<const double> ts, double eps) {
    std::vector<EtaSample> out(ts.size());
    parallel_for_index(ts.size(), [&](std::size_t i) { out[i] = eta_eval(ts[i], eps, xi); });
    return out;
}

// Re A ∂Im A - Im A ∂Re A for one sample of A and its t-derivative.
inline double angular_momentum_of(cplx a, cplx da) { return a.real() * da.imag() - a.imag() * da.real(); }

struct AngularMomentum {
    double value;
    cplx xi;
    cplx dxi_dt;
};

inline constexpr double kDerivativeRelTol = 1e-7;

inline AngularMomentum angular_momentum(SPoint s, const CompletedL& xi, double dt = 1e-3) {
    if (!(dt > 0)) throw domain_error("angular_momentum: dt must be positive");
    const cplx x0 = xi.xi(s);
    double dis = 0;
    const cplx dx = central_derivative_c([&](double t) { return xi.xi({s.eps, t}); }, s.t, dt, &dis);
    if (dis > kDerivativeRelTol * std::max(std::abs(dx), std::abs(x0)))
        throw numerical_error("angular_momentum: Richardson ladder did not settle");
    return {angular_momentum_of(x0, dx), x0, dx};
}

inline AngularMomentum angular_momentum(SPoint s, const DirichletCharacter& chi, double dt = 1e-3) {
    return angular_momentum(s, CompletedL(chi), dt);
}

struct CriticalCurvature {
    double value;        // η'² - η η''
    double cross_check;  // (L(ε=δ) - L(ε=0)) / δ
    double eta, deta, d2eta;
};

inline constexpr double kCurvatureDelta = 1e-4;

inline CriticalCurvature critical_curvature(double t, const CompletedL& xi, double dt = 1e-3, bool with_cross_check = true) {
    if (!(dt > 0)) throw domain_error("critical_curvature: dt must be positive");
    auto eta_re = [&](double u) { return xi.eta(u, 0.0).real(); };
    auto d = central_derivatives12(eta_re, t, dt);
    if (std::abs(d.f_at_x) < 1e-2 * std::abs(d.first.value) && dt > 1e-4)
        d = central_derivatives12(eta_re, t, 1e-4);  // close to a zero
    const double scale = std::max({std::abs(d.f_at_x), std::abs(d.first.value), std::abs(d.second.value)});
    if (d.first.disagreement > 1e-5 * scale || d.second.disagreement > 1e-5 * scale)
        throw numerical_error("critical_curvature: Richardson ladder did not settle");
    const double e0 = d.f_at_x, e1 = d.first.value, e2 = d.second.value;
    double cross = std::nan("");
    if (with_cross_check) {
        const double l0 = angular_momentum({0.0, t}, xi, dt).value;
        const double ld = angular_momentum({kCurvatureDelta, t}, xi, dt).value;
        cross = (ld - l0) / kCurvatureDelta;
    }
    return {e1 * e1 - e0 * e2, cross, e0, e1, e2};
}

inline CriticalCurvature critical_curvature(double t, const DirichletCharacter& chi, double dt = 1e-3) {
    return critical_curvature(t, CompletedL(chi), dt);
}

// Numerical ∂ arg ξ / ∂t = 𝓛 / |ξ|².
inline double xi_phase_derivative(SPoint s, const CompletedL& xi, double dt = 1e-3) {
    const auto am = angular_momentum(s, xi, dt);
    return am.value / std::norm(am.xi);
}

// ------------------------------------------------------- reduction checks

struct ReductionRow {
    std::size_t chi_index;
    enum class Kind { principal, primitive, imprimitive } kind;
    std::uint64_t conductor;
    double residual;
};

struct ReductionReport {
    std::vector<ReductionRow> rows;
    double max_residual = 0;
};

// L(s,χ0) = ζ(s) Π_{p|q}(1 - p^{-s});  L(s,χ) = L(s,ψ) Π_{p|q}(1 - ψ(p) p^{-s}).
inline ReductionReport reduction_identities(SPoint s, std::uint64_t q) {
    if (!(s.eps > 0.5)) throw domain_error("reduction_identities: needs eps > 1/2");
    const cplx sv = s.s();
    const cplx zeta = l_eval(s, enumerate_characters(1)[0]).value;
    ReductionReport rep;
    for (const auto& chi : enumerate_characters(q)) {
        const cplx lhs = l_eval(s, chi).value;
        ReductionRow row{chi.index(), ReductionRow::Kind::primitive, chi.conductor(), 0};
        cplx rhs;
        if (chi.is_principal()) {
            row.kind = ReductionRow::Kind::principal;
            rhs = zeta;
            for (auto p : prime_factors(q)) rhs *= 1.0 - std::exp(-sv * std::log(static_cast<double>(p)));
            if (q == 1) row.kind = ReductionRow::Kind::primitive;
        } else {
            const auto psi = chi.is_primitive() ? chi : inducing_primitive(chi);
            if (!chi.is_primitive()) row.kind = ReductionRow::Kind::imprimitive;
            rhs = l_eval(s, psi).value;
            for (auto p : prime_factors(q))
                rhs *= 1.0 - psi.value(static_cast<std::int64_t>(p)) *
                                 std::exp(-sv * std::log(static_cast<double>(p)));
        }
        row.residual = std::abs(lhs - rhs);
        rep.max_residual = std::max(rep.max_residual, row.residual);
        rep.rows.push_back(row);
    }
    return rep;
}

// -------------------------------------------------------------- zero scan

struct ZeroRecord {
    enum class Kind { simple, suspected_multiple };
    double t_zero = 0;
    std::uint64_t modulus = 1;
    std::size_t chi_index = 0;
    double bracket_lo = 0, bracket_hi = 0;
    double tolerance = 0;
    int sign_before = 0, sign_after = 0;
    Kind kind = Kind::simple;
    std::string warning;
};

struct EtaScan {
    std::vector<double> t;
    std::vector<double> eta;  // Re η with the global sign fixed
    int global_sign = 1;
};

inline constexpr double kEtaSignTolerance = 1e-300;

// Re η on the grid t_lo + k·step, sign fixed so that the first sample with
// |η| > tolerance is positive.
inline EtaScan eta_scan(const CompletedL& xi, double t_lo, double t_hi, double step) {
    if (!(step > 0)) throw domain_error("eta_scan: grid step must be positive");
    if (!(t_hi > t_lo)) throw domain_error("eta_scan: need t_hi > t_lo");
    EtaScan sc;
    const auto n = static_cast<std::size_t>(std::floor((t_hi - t_lo) / step + 1e-9)) + 1;
    sc.t.resize(n);
    for (std::size_t k = 0; k < n; ++k) sc.t[k] = t_lo + static_cast<double>(k) * step;
    sc.eta.resize(n);
    parallel_for_index(n, [&](std::size_t k) { sc.eta[k] = xi.eta(sc.t[k], 0.0).real(); });
    for (double v : sc.eta)
        if (std::abs(v) > kEtaSignTolerance) {
            sc.global_sign = v > 0 ? 1 : -1;
            break;
        }
    for (double& v : sc.eta) v *= sc.global_sign;
    return sc;
}

inline constexpr double kZeroTolerance = 1e-8;

// Sign changes of the scan refined by bisection on `f` (same sign convention
// as the scan). A strict local minimum of |η| with no sign change is logged as
// a suspected multiple zero (or two zeros in one cell) and not refined.
template <class F>
std::vector<ZeroRecord> zeros_from_scan(const EtaScan& sc, F&& f, std::uint64_t modulus, std::size_t chi_index,
                                        double grid_step) {
    std::vector<ZeroRecord> out;
    const auto sgn = [](double v) { return (v > 0) - (v < 0); };
    auto base = [&] {
        ZeroRecord z;
        z.modulus = modulus;
        z.chi_index = chi_index;
        return z;
    };
    for (std::size_t k = 0; k + 1 < sc.t.size(); ++k) {
        const double a = sc.eta[k], b = sc.eta[k + 1];
        if (sgn(a) != sgn(b) && sgn(b) != 0) {
            auto z = base();
            z.t_zero = bisect(f, sc.t[k], sc.t[k + 1], kZeroTolerance, a, b);
            z.bracket_lo = sc.t[k];
            z.bracket_hi = sc.t[k + 1];
            z.tolerance = kZeroTolerance;
            z.sign_before = sgn(a);
            z.sign_after = sgn(b);
            out.push_back(z);
        }
        if (k == 0) continue;
        const double l = sc.eta[k - 1], m = a, r = b;
        const bool same = sgn(l) == sgn(m) && sgn(m) == sgn(r) && sgn(m) != 0;
        const bool dip = std::abs(m) < std::abs(l) && std::abs(m) < std::abs(r);
        const bool curls_back = sgn(l - 2 * m + r) == sgn(m);
        if (same && dip && curls_back) {
            auto z = base();
            z.t_zero = sc.t[k];
            z.bracket_lo = sc.t[k - 1];
            z.bracket_hi = sc.t[k + 1];
            z.tolerance = grid_step;
            z.sign_before = z.sign_after = sgn(m);
            z.kind = ZeroRecord::Kind::suspected_multiple;
            z.warning = "eta has a local minimum without a sign change; refine the grid";
            out.push_back(z);
        }
    }
    return out;
}

inline std::vector<ZeroRecord> find_zeros_on_line(const CompletedL& xi, double t_lo, double t_hi, double grid_step) {
    if (!(t_lo >= 0)) throw domain_error("find_zeros_on_line: t_lo must be >= 0 (scan the conjugate character for t < 0)");
    const auto sc = eta_scan(xi, t_lo, t_hi, grid_step);
    auto f = [&](double t) { return sc.global_sign * xi.eta(t, 0.0).real(); };
    return zeros_from_scan(sc, f, xi.character().modulus(), xi.character().index(), grid_step);
}

inline std::vector<ZeroRecord> find_zeros_on_line(const DirichletCharacter& chi, double t_lo, double t_hi,
                                                  double grid_step) {
    return find_zeros_on_line(CompletedL(chi), t_lo, t_hi, grid_step);
}

// Both odd-character sufficient conditions at (t, ε = 0) via the GW route.
inline bool sufficient_condition_check(const DirichletCharacter& chi, double t, const GwConfig& cfg = {}) {
    if (!chi.is_primitive() || chi.parity() != 1)
        throw domain_error("sufficient_condition_check: needs an odd primitive character");
    const auto p = PrefactorParams::for_character(chi);
    return prefactor_dphase_dt({0.0, t}, p, cfg) > 0 && mixed_second_derivative(t, 1, Route::gw, cfg) > 0;
}

}  // namespace lcrit
