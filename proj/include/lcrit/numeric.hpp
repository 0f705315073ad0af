#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lcrit/errors.hpp"

namespace lcrit {

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;

// Compensated (Neumaier) accumulator. Works for double and std::complex<double>.
template <class T>
class NeumaierSum {
public:
    void add(const T& x) {
        if constexpr (std::is_same_v<T, double>) {
            add_real(sum_, comp_, x);
        } else {
            double sr = sum_.real(), cr = comp_.real();
            double si = sum_.imag(), ci = comp_.imag();
            add_real(sr, cr, x.real());
            add_real(si, ci, x.imag());
            sum_ = {sr, si};
            comp_ = {cr, ci};
        }
    }
    NeumaierSum& operator+=(const T& x) {
        add(x);
        return *this;
    }
    T value() const { return sum_ + comp_; }

private:
    static void add_real(double& s, double& c, double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    T sum_{};
    T comp_{};
};

inline unsigned default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(hw, 1u, 16u);
}

// Runs f(i) for i in [0, n) on up to `threads` workers with a static
// interleaved partition. f must only write to its own slot.
template <class F>
void parallel_for_index(std::size_t n, F&& f, unsigned threads = default_threads()) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += threads) f(i);
        });
    }
}

inline constexpr std::size_t kSumBlock = 8192;

// Σ_{i<n} term(i). The index range is cut into fixed blocks; each block is
// summed in index order, then the block partials are reduced in block order.
// The partition does not depend on `threads`, so the result is bit-identical
// for any thread count.
template <class T, class F>
T ordered_block_sum(std::size_t n, F&& term, unsigned threads = 1) {
    const std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
    std::vector<T> partial(nblocks);
    parallel_for_index(
        nblocks,
        [&](std::size_t b) {
            NeumaierSum<T> acc;
            const std::size_t lo = b * kSumBlock, hi = std::min(n, lo + kSumBlock);
            for (std::size_t i = lo; i < hi; ++i) acc.add(term(i));
            partial[b] = acc.value();
        },
        threads);
    NeumaierSum<T> total;
    for (const T& p : partial) total.add(p);
    return total.value();
}

struct Extrapolated {
    double value;
    double error_estimate;  // |final - previous diagonal entry|
};

// Richardson table. seq[0] is the coarsest estimate, each next one uses half
// the step; the error expands in powers p0, p0+dp, p0+2dp, ... of the step.
inline Extrapolated richardson(std::span<const double> seq, int p0, int dp) {
    if (seq.empty()) throw domain_error("richardson: empty sequence");
    std::vector<double> row(seq.begin(), seq.end());
    double prev_diag = row.back();
    int p = p0;
    for (std::size_t level = 1; level < seq.size(); ++level) {
        const double f = std::ldexp(1.0, p);
        prev_diag = row.back();
        std::vector<double> next(row.size() - 1);
        for (std::size_t j = 0; j + 1 < row.size(); ++j) next[j] = (f * row[j + 1] - row[j]) / (f - 1.0);
        row.swap(next);
        p += dp;
    }
    return {row.back(), std::abs(row.back() - prev_diag)};
}

struct Derivative {
    double value;
    double disagreement;  // spread between the two finest Richardson estimates
};

// Central-difference ladder h, h/2, h/4 with Richardson (errors in h^2, h^4).
// order = 1 or 2.
template <class F>
Derivative central_derivative(F&& f, double x, double h, int order, double f_at_x = std::nan("")) {
    double d[3];
    double fx = f_at_x;
    if (order == 2 && std::isnan(fx)) fx = f(x);
    for (int i = 0; i < 3; ++i) {
        const double hi = h / static_cast<double>(1 << i);
        const double fp = f(x + hi), fm = f(x - hi);
        d[i] = order == 1 ? (fp - fm) / (2 * hi) : (fp - 2 * fx + fm) / (hi * hi);
    }
    const double r1 = (4 * d[1] - d[0]) / 3, r2 = (4 * d[2] - d[1]) / 3;
    return {(16 * r2 - r1) / 15, std::abs(r2 - r1)};
}

struct Derivatives12 {
    Derivative first, second;
    double f_at_x;
};

// First and second derivative from one shared stencil (7 evaluations).
template <class F>
Derivatives12 central_derivatives12(F&& f, double x, double h) {
    const double fx = f(x);
    double d1[3], d2[3];
    for (int i = 0; i < 3; ++i) {
        const double hi = h / static_cast<double>(1 << i);
        const double fp = f(x + hi), fm = f(x - hi);
        d1[i] = (fp - fm) / (2 * hi);
        d2[i] = (fp - 2 * fx + fm) / (hi * hi);
    }
    auto fold = [](const double* d) {
        const double r1 = (4 * d[1] - d[0]) / 3, r2 = (4 * d[2] - d[1]) / 3;
        return Derivative{(16 * r2 - r1) / 15, std::abs(r2 - r1)};
    };
    return {fold(d1), fold(d2), fx};
}

// Complex-valued variant used for derivatives of analytic functions.
template <class F>
std::complex<double> central_derivative_c(F&& f, double x, double h, double* disagreement = nullptr) {
    std::complex<double> d[3];
    for (int i = 0; i < 3; ++i) {
        const double hi = h / static_cast<double>(1 << i);
        d[i] = (f(x + hi) - f(x - hi)) / (2 * hi);
    }
    const auto r1 = (4.0 * d[1] - d[0]) / 3.0, r2 = (4.0 * d[2] - d[1]) / 3.0;
    if (disagreement) *disagreement = std::abs(r2 - r1);
    return (16.0 * r2 - r1) / 15.0;
}

// Bisection on [a, b] with f(a), f(b) of opposite sign (or one zero).
template <class F>
double bisect(F&& f, double a, double b, double tol, double fa = std::nan(""), double fb = std::nan("")) {
    if (std::isnan(fa)) fa = f(a);
    if (std::isnan(fb)) fb = f(b);
    if (fa == 0) return a;
    if (fb == 0) return b;
    if ((fa > 0) == (fb > 0)) throw domain_error("bisect: no sign change on bracket");
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Adaptive Gauss-Kronrod (61 point) on a finite interval.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12, double* err = nullptr) {
    double e = 0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, rel_tol, &e);
    if (err) *err = e;
    return v;
}

}  // namespace lcrit
