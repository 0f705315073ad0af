#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "lcrit/eulerphase.hpp"

namespace lcrit {

// Zero transitions of cos(t ln x - ∠χ(h)): upward at x0, downward at x1.
inline std::pair<double, double> oscillation_boundaries(std::int64_t k, std::int64_t h, double t,
                                                        const DirichletCharacter& chi) {
    if (!(t > 0)) throw domain_error("oscillation_boundaries: t must be > 0");
    if (!chi.is_unit(h)) throw domain_error("oscillation_boundaries: h must be a unit mod q");
    const double a = chi.angle(h), kk = 2 * pi * static_cast<double>(k);
    return {std::exp((kk - pi / 2 + a) / t), std::exp((kk + pi / 2 + a) / t)};
}

// Smallest k with x0(k, h) >= 2.
inline std::int64_t ledger_k_min(std::int64_t h, double t, const DirichletCharacter& chi) {
    auto k = static_cast<std::int64_t>(std::ceil((t * std::log(2.0) + pi / 2 - chi.angle(h)) / (2 * pi)));
    while (oscillation_boundaries(k, h, t, chi).first < 2) ++k;
    while (oscillation_boundaries(k - 1, h, t, chi).first >= 2) --k;
    return k;
}

// Largest k with x0(k+1, h) <= bound for every unit class h.
inline std::int64_t ledger_k_max(double t, const DirichletCharacter& chi, double bound) {
    if (!(t > 0)) throw domain_error("ledger_k_max: t must be > 0");
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    const auto q = static_cast<std::int64_t>(chi.modulus());
    for (std::int64_t h = 1; h <= q; ++h) {
        if (!chi.is_unit(h)) continue;
        auto k = static_cast<std::int64_t>(std::floor((t * std::log(bound) + pi / 2 - chi.angle(h)) / (2 * pi))) - 1;
        while (oscillation_boundaries(k + 1, h, t, chi).first > bound) --k;
        while (oscillation_boundaries(k + 2, h, t, chi).first <= bound) ++k;
        best = std::min(best, k);
    }
    return best;
}

struct OscillationCell {
    std::int64_t k;
    std::uint32_t h;
    double x0, x1, x0_next;
    // prime-sum route: signed partial sums (scaled by ln p*/2π) and masses
    double plus_signed = 0, minus_signed = 0;
    double plus_sum = 0, minus_sum = 0;
    std::size_t plus_count = 0, minus_count = 0;
    // Li route: O⁻ lives on (x0, x1), O⁺ on (x1, x0_next)
    double minus_li = 0, plus_li = 0;
};

struct OscillationLedger {
    double t = 0, eps = 0;
    WindowParams window;
    std::uint64_t modulus = 1;
    std::size_t chi_index = 0;
    std::int64_t k_max = 0;
    std::map<std::uint32_t, std::int64_t> k_min;  // per class
    std::vector<OscillationCell> cells;           // ordered by (h, k)

    double total_plus() const {
        double s = 0;
        for (const auto& c : cells) s += c.plus_sum + c.plus_li;
        return s;
    }
    double total_minus() const {
        double s = 0;
        for (const auto& c : cells) s += c.minus_sum + c.minus_li;
        return s;
    }
    // -2 Σ signed prime-sum parts: the cosine estimator restricted to the
    // primes the ledger covers.
    double reconstruct_approx() const {
        NeumaierSum<double> s;
        for (const auto& c : cells) {
            s.add(c.plus_signed);
            s.add(c.minus_signed);
        }
        return -2 * s.value();
    }
};

namespace detail {
// (ln p*/2π φ(q)) ∫_a^b cos(t ln y - φ) sin(π ln y / ln p*) y^{-σ} dy / ln y, in u = ln y.
inline double li_mass_integral(double a, double b, double t, double phase, double sigma, double lps, double phi_q) {
    auto f = [&](double u) { return std::cos(u * t - phase) * std::sin(pi * u / lps) * std::exp(u * (1 - sigma)) / u; };
    return lps / (2 * pi * phi_q) * integrate(f, std::log(a), std::log(b), 1e-11);
}
}  // namespace detail

inline OscillationLedger build_oscillation_ledger(double t, double eps, const EulerProduct& ep,
                                                  const WindowParams& w, std::int64_t k_max) {
    if (!(t > 0)) throw domain_error("ledger: t must be > 0");
    if (!(eps > -0.5)) throw domain_error("ledger: eps must exceed -1/2");
    w.validate();
    const auto& chi = ep.character();
    const double bound = static_cast<double>(std::min<std::uint64_t>(w.p_max, ep.table_p_max()));
    const std::int64_t k_ok = ledger_k_max(t, chi, bound);
    if (k_max > k_ok) throw ledger_truncation_error("ledger: k_max pushes oscillation boundaries past p_max", k_ok);

    OscillationLedger L;
    L.t = t;
    L.eps = eps;
    L.window = w;
    L.modulus = chi.modulus();
    L.chi_index = chi.index();
    L.k_max = k_max;
    const auto q = static_cast<std::int64_t>(chi.modulus());
    const double sigma = 0.5 + eps, lps = w.log_p_star(), phi_q = static_cast<double>(euler_phi(chi.modulus()));
    std::map<std::uint32_t, std::size_t> first_cell;  // class -> index of its k_min cell
    for (std::int64_t h = 1; h <= q; ++h) {
        if (!chi.is_unit(h) || (q == 1 && h != 1)) continue;
        const auto hc = static_cast<std::uint32_t>(h % q);
        const std::int64_t kmin = ledger_k_min(h, t, chi);
        if (kmin > k_max) throw domain_error("ledger: k_max below the first oscillation above 2");
        L.k_min[hc] = kmin;
        first_cell[hc] = L.cells.size();
        for (std::int64_t k = kmin; k <= k_max; ++k) {
            OscillationCell c{};
            c.k = k;
            c.h = hc;
            std::tie(c.x0, c.x1) = oscillation_boundaries(k, h, t, chi);
            c.x0_next = oscillation_boundaries(k + 1, h, t, chi).first;
            const double ph = chi.angle(h);
            c.minus_li = std::abs(detail::li_mass_integral(c.x0, c.x1, t, ph, sigma, lps, phi_q));
            c.plus_li = std::abs(detail::li_mass_integral(c.x1, c.x0_next, t, ph, sigma, lps, phi_q));
            L.cells.push_back(c);
        }
    }
    // Prime route: walk primes in ascending order and tag each term with its cell.
    std::vector<NeumaierSum<double>> plus(L.cells.size()), minus(L.cells.size());
    const auto& ps = ep.primes();
    const std::size_t n = ep.count_up_to(static_cast<std::uint64_t>(bound));
    for (std::size_t i = 0; i < n; ++i) {
        const double p = ps[i];
        const auto hc = static_cast<std::uint32_t>(ps[i] % static_cast<std::uint32_t>(q));
        auto it = first_cell.find(q == 1 ? 0u : hc);
        if (it == first_cell.end()) continue;
        const std::size_t base = it->second;
        const std::int64_t kmin = L.cells[base].k;
        // locate k from the phase, then settle against the stored boundaries
        auto k = static_cast<std::int64_t>(std::floor((t * ep.log_p(i) + pi / 2 - ep.angle(i)) / (2 * pi)));
        if (k < kmin - 1 || k > k_max + 1) continue;
        k = std::clamp(k, kmin, k_max);
        while (k > kmin && p < L.cells[base + static_cast<std::size_t>(k - kmin)].x0) --k;
        while (k < k_max && p >= L.cells[base + static_cast<std::size_t>(k - kmin)].x0_next) ++k;
        const std::size_t ci = base + static_cast<std::size_t>(k - kmin);
        const auto& c = L.cells[ci];
        if (p < c.x0 || p >= c.x0_next) continue;
        const double term = ep.cosine_term(i, t, sigma, lps);
        if (p < c.x1) {
            plus[ci].add(term);
            ++L.cells[ci].plus_count;
        } else {
            minus[ci].add(term);
            ++L.cells[ci].minus_count;
        }
    }
    const double scale = lps / (2 * pi);
    for (std::size_t ci = 0; ci < L.cells.size(); ++ci) {
        auto& c = L.cells[ci];
        c.plus_signed = scale * plus[ci].value();
        c.minus_signed = scale * minus[ci].value();
        c.plus_sum = std::abs(c.plus_signed);
        c.minus_sum = std::abs(c.minus_signed);
    }
    return L;
}

inline OscillationLedger build_oscillation_ledger(double t, double eps, const DirichletCharacter& chi,
                                                  const PrimeTable& primes, const WindowParams& w,
                                                  std::int64_t k_max) {
    return build_oscillation_ledger(t, eps, EulerProduct(chi, primes), w, k_max);
}

struct RhoRatios {
    double rho, rho_plus, rho_minus;
};

// ledger0 at ε', ledger_eps at ε''.
inline RhoRatios rho_ratios(const OscillationLedger& ledger0, const OscillationLedger& ledger_eps) {
    const auto& a = ledger0;
    const auto& b = ledger_eps;
    const bool same = a.t == b.t && a.modulus == b.modulus && a.chi_index == b.chi_index &&
                      a.window.p_star == b.window.p_star && a.window.p_max == b.window.p_max &&
                      a.k_max == b.k_max && a.k_min == b.k_min;
    if (!same) throw domain_error("rho_ratios: ledgers differ in t, character, window or k range");
    double plus0 = 0, minus0 = 0, plus1 = 0, minus1 = 0;
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        plus0 += a.cells[i].plus_li + a.cells[i].plus_sum;
        minus0 += a.cells[i].minus_sum + a.cells[i].minus_li;
        plus1 += b.cells[i].plus_li + b.cells[i].plus_sum;
        minus1 += b.cells[i].minus_sum + b.cells[i].minus_li;
    }
    if (plus0 == 0 || minus0 == 0) throw domain_error("rho_ratios: degenerate ledger (all masses vanish)");
    return {plus1 / minus0, plus1 / plus0, minus1 / minus0};
}

// (ln p*/π) Σ_h (1/φ(q)) ∫_2^{p_max} cos(t ln y - ∠χ(h)) y^{-σ} sin(π ln y/ln p*) dLi(y).
// Each class integral is evaluated separately and summed in class order.
inline double class_li_combination(double t, double eps, const DirichletCharacter& chi, const WindowParams& w,
                                   double upper) {
    const double sigma = 0.5 + eps, lps = w.log_p_star(), phi_q = static_cast<double>(euler_phi(chi.modulus()));
    NeumaierSum<double> s;
    const auto q = static_cast<std::int64_t>(chi.modulus());
    for (std::int64_t h = 1; h <= q; ++h) {
        if (!chi.is_unit(h)) continue;
        s.add(2 * detail::li_mass_integral(2.0, upper, t, chi.angle(h), sigma, lps, phi_q));
    }
    return s.value();
}

}  // namespace lcrit
