#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "lcrit/arith/characters.hpp"
#include "lcrit/arith/li.hpp"
#include "lcrit/arith/primes.hpp"
#include "lcrit/errors.hpp"
#include "lcrit/lfunction.hpp"
#include "lcrit/numeric.hpp"
#include "lcrit/spoint.hpp"

namespace lcrit {

struct WindowParams {
    double p_star = 1e6;
    std::uint64_t p_max = 1'000'000;

    static WindowParams make(double p_star, std::uint64_t p_max) {
        WindowParams w{p_star, p_max};
        w.validate();
        return w;
    }
    // p_star defaults to p_max
    static WindowParams make(std::uint64_t p_max) { return make(static_cast<double>(p_max), p_max); }
    void validate() const {
        if (!(p_star > 1)) throw domain_error("WindowParams: p_star must exceed 1");
        if (static_cast<double>(p_max) < p_star) throw domain_error("WindowParams: p_max must be >= p_star");
    }
    double log_p_star() const { return std::log(p_star); }
    double half_width() const { return pi / log_p_star(); }
    double width() const { return 2 * half_width(); }
};

enum class Estimator { exact_arctan, cosine_approx };

struct EstimatorResidual {
    double value;         // exact - approx
    double higher_order;  // from arctan(x) - x
    double coupled;       // from the sinθcosθ / ((p^σ - cosθ) p^σ) part of x
};

// Euler-product phase machinery for one character over a prime table. All
// sums run over primes p <= p_max coprime to q in ascending order.
class EulerProduct {
public:
    EulerProduct(const DirichletCharacter& chi, const PrimeTable& primes) : chi_(chi) {
        const auto& ps = primes.primes();
        assert(std::is_sorted(ps.begin(), ps.end()));
        for (auto p : ps) {
            if (!chi.is_unit(p)) continue;
            p_.push_back(p);
            log_p_.push_back(std::log(static_cast<double>(p)));
            angle_.push_back(chi.angle(p));
        }
        table_p_max_ = primes.p_max();
    }

    const DirichletCharacter& character() const noexcept { return chi_; }
    std::uint64_t table_p_max() const noexcept { return table_p_max_; }
    std::size_t count_up_to(std::uint64_t p_max) const {
        return static_cast<std::size_t>(std::upper_bound(p_.begin(), p_.end(), p_max) - p_.begin());
    }
    const std::vector<std::uint32_t>& primes() const noexcept { return p_; }

    // -Σ arctan( sin θ / (p^σ - cos θ) ),  θ = t ln p - ∠χ(p)
    double phase(SPoint s, std::uint64_t p_max) const {
        check_eps(s.eps);
        check_p_max(p_max);
        const double sigma = s.sigma();
        return -ordered_block_sum<double>(count_up_to(p_max),
                                          [&](std::size_t i) { return arctan_term(i, s.t, sigma); });
    }

    double windowed_exact(double t, double eps, const WindowParams& w) const {
        check_eps(eps);
        check_window(w);
        const double sigma = 0.5 + eps, hw = w.half_width();
        const double sum = ordered_block_sum<double>(count_up_to(w.p_max), [&](std::size_t i) {
            return arctan_term(i, t + hw, sigma) - arctan_term(i, t - hw, sigma);
        });
        return -w.log_p_star() / (2 * pi) * sum;
    }

    double windowed_approx(double t, double eps, const WindowParams& w) const {
        check_eps(eps);
        check_window(w);
        const double sigma = 0.5 + eps, lps = w.log_p_star();
        const double sum = ordered_block_sum<double>(count_up_to(w.p_max), [&](std::size_t i) {
            return cosine_term(i, t, sigma, lps);
        });
        return -lps / pi * sum;
    }

    double windowed(Estimator e, double t, double eps, const WindowParams& w) const {
        return e == Estimator::exact_arctan ? windowed_exact(t, eps, w) : windowed_approx(t, eps, w);
    }

    EstimatorResidual estimator_residual(double t, double eps, const WindowParams& w) const {
        check_eps(eps);
        check_window(w);
        const double sigma = 0.5 + eps, hw = w.half_width();
        const std::size_t n = count_up_to(w.p_max);
        auto pieces = [&](std::size_t i, double u, double& higher, double& coupled) {
            const double th = u * log_p_[i] - angle_[i];
            const double ps = std::exp(sigma * log_p_[i]);
            const double c = std::cos(th), sn = std::sin(th);
            const double den = ps - c;
            if (std::abs(den) < 1e-14) throw singularity_error("vanishing Euler-factor denominator", p_[i]);
            const double x = sn / den;
            higher = std::atan(x) - x;
            coupled = sn * c / (den * ps);
        };
        const double h = ordered_block_sum<double>(n, [&](std::size_t i) {
            double h2, c2, h1, c1;
            pieces(i, t + hw, h2, c2);
            pieces(i, t - hw, h1, c1);
            return h2 - h1;
        });
        const double c = ordered_block_sum<double>(n, [&](std::size_t i) {
            double h2, c2, h1, c1;
            pieces(i, t + hw, h2, c2);
            pieces(i, t - hw, h1, c1);
            return c2 - c1;
        });
        const double f = -w.log_p_star() / (2 * pi);
        return {windowed_exact(t, eps, w) - windowed_approx(t, eps, w), f * h, f * c};
    }

    // Term of the cosine estimator before the -(ln p*)/π factor.
    double cosine_term(std::size_t i, double t, double sigma, double log_p_star) const {
        const double th = t * log_p_[i] - angle_[i];
        return std::cos(th) * std::sin(pi * log_p_[i] / log_p_star) * std::exp(-sigma * log_p_[i]);
    }
    double log_p(std::size_t i) const { return log_p_[i]; }
    double angle(std::size_t i) const { return angle_[i]; }

private:
    double arctan_term(std::size_t i, double t, double sigma) const {
        const double th = t * log_p_[i] - angle_[i];
        const double den = std::exp(sigma * log_p_[i]) - std::cos(th);
        if (std::abs(den) < 1e-14) throw singularity_error("vanishing Euler-factor denominator", p_[i]);
        return std::atan(std::sin(th) / den);
    }
    static void check_eps(double eps) {
        if (!(eps > -0.5)) throw domain_error("Euler product: eps must exceed -1/2");
    }
    void check_p_max(std::uint64_t p_max) const {
        if (p_max > table_p_max_) throw domain_error("Euler product: p_max exceeds the prime table");
    }
    void check_window(const WindowParams& w) const {
        w.validate();
        check_p_max(w.p_max);
    }

    DirichletCharacter chi_;
    std::vector<std::uint32_t> p_;
    std::vector<double> log_p_, angle_;
    std::uint64_t table_p_max_ = 0;
};

inline double euler_phase(SPoint s, const DirichletCharacter& chi, const PrimeTable& primes) {
    return EulerProduct(chi, primes).phase(s, primes.p_max());
}
inline double windowed_ratio_exact(double t, double eps, const DirichletCharacter& chi, const PrimeTable& primes,
                                   const WindowParams& w) {
    return EulerProduct(chi, primes).windowed_exact(t, eps, w);
}
inline double windowed_ratio_approx(double t, double eps, const DirichletCharacter& chi, const PrimeTable& primes,
                                    const WindowParams& w) {
    return EulerProduct(chi, primes).windowed_approx(t, eps, w);
}
inline EstimatorResidual estimator_residual(double t, double eps, const DirichletCharacter& chi, const PrimeTable& primes,
                                      const WindowParams& w) {
    return EulerProduct(chi, primes).estimator_residual(t, eps, w);
}

// ------------------------------------------------------------------ scans

struct PhaseScan {
    std::uint64_t modulus = 1;
    std::size_t chi_index = 0;
    double eps = 0;
    std::vector<double> t_grid;
    std::vector<double> values;
    Estimator estimator = Estimator::exact_arctan;
    WindowParams window;
};

inline PhaseScan scan_phase(const EulerProduct& ep, std::vector<double> grid, double eps, Estimator est,
                            const WindowParams& w) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw domain_error("scan: t grid must be strictly increasing");
    PhaseScan sc;
    sc.modulus = ep.character().modulus();
    sc.chi_index = ep.character().index();
    sc.eps = eps;
    sc.estimator = est;
    sc.window = w;
    sc.values.resize(grid.size());
    sc.t_grid = std::move(grid);
    parallel_for_index(sc.t_grid.size(), [&](std::size_t i) { sc.values[i] = ep.windowed(est, sc.t_grid[i], eps, w); });
    return sc;
}

// Grid t_lo + k·step, k = 0..n with the last point <= t_hi (+ slack).
inline std::vector<double> make_grid(double t_lo, double t_hi, double step) {
    if (!(step > 0)) throw domain_error("grid step must be positive");
    if (!(t_hi >= t_lo)) throw domain_error("grid: t_max must be >= t_min");
    const auto n = static_cast<std::int64_t>(std::floor((t_hi - t_lo) / step + 1e-9));
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(n + 1));
    for (std::int64_t k = 0; k <= n; ++k) g.push_back(t_lo + static_cast<double>(k) * step);
    return g;
}

struct Spike {
    double t_peak;
    double value;
    double t_lo, t_hi;  // flagged run
};

inline constexpr double kSpikeMadFactor = 6.0;

// Runs of grid points with |v| > median(|v|) + 6·MAD(|v|); one Spike per run
// at its largest |v|.
inline std::vector<Spike> detect_spikes(const PhaseScan& sc) {
    const std::size_t n = sc.values.size();
    if (n < 3) return {};
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = std::abs(sc.values[i]);
    auto median = [](std::vector<double> v) {
        const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
        std::nth_element(v.begin(), mid, v.end());
        double m = *mid;
        if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
        return m;
    };
    const double med = median(a);
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(a[i] - med);
    const double thr = med + kSpikeMadFactor * median(dev);
    std::vector<Spike> out;
    for (std::size_t i = 0; i < n;) {
        if (a[i] <= thr) {
            ++i;
            continue;
        }
        std::size_t j = i, best = i;
        while (j < n && a[j] > thr) {
            if (a[j] > a[best]) best = j;
            ++j;
        }
        out.push_back({sc.t_grid[best], sc.values[best], sc.t_grid[i], sc.t_grid[j - 1]});
        i = j;
    }
    return out;
}

inline bool near_spike(double t, std::span<const Spike> spikes, const WindowParams& w) {
    for (const auto& s : spikes)
        if (std::abs(t - s.t_peak) <= w.width()) return true;
    return false;
}

// ------------------------------------------------------------ level check

struct LevelCheck {
    double lhs;                  // ln√(tq/2π) + windowed ratio
    double defect;               // lhs - ∂ arg ξ/∂t
    double windowed_ratio;
    double target;               // -ln√(tq/2π)
    double xi_phase_derivative;
    bool flagged;                // t inside a spike strip
};

inline LevelCheck level_check(double t, double eps, const EulerProduct& ep, const CompletedL& xi,
                              const WindowParams& w, std::span<const Spike> spikes = {}) {
    if (!(t > 0)) throw domain_error("level_check: t must be > 0");
    const double q = static_cast<double>(ep.character().modulus());
    const double lg = 0.5 * std::log(t * q / (2 * pi));
    const double wr = ep.windowed_exact(t, eps, w);
    const double dxi = xi_phase_derivative({eps, t}, xi);
    return {lg + wr, lg + wr - dxi, wr, -lg, dxi, near_spike(t, spikes, w)};
}

}  // namespace lcrit
