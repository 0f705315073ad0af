#pragma once

#include <cmath>
#include <cstdint>
#include <map>

#include "lcrit/arith/characters.hpp"
#include "lcrit/arith/primes.hpp"
#include "lcrit/errors.hpp"
#include "lcrit/numeric.hpp"

namespace lcrit {

// Li(x) = ∫_2^x dy / ln y. Integrated in u = ln y (integrand e^u / u), which
// is smooth and lets the adaptive rule work on a short interval.
inline double li(double x) {
    if (!(x >= 2)) throw domain_error("li: x must be >= 2");
    if (x == 2) return 0.0;
    const double a = std::log(2.0), b = std::log(x);
    return integrate([](double u) { return std::exp(u) / u; }, a, b, 1e-13);
}

// π(x; h, q) · φ(q) / Li(x) for each reduced class h, using a prebuilt table
// bound to modulus q with p_max >= x.
inline std::map<std::uint32_t, double> pnt_class_ratio(double x, const PrimeTable& table) {
    if (!(x >= 10)) throw domain_error("pnt_class_ratio: x must be >= 10");
    if (static_cast<double>(table.p_max()) < x) throw domain_error("pnt_class_ratio: prime table too short");
    const std::uint64_t q = table.modulus();
    const double norm = static_cast<double>(euler_phi(q)) / li(x);
    std::map<std::uint32_t, double> out;
    for (const auto& [h, ps] : table.class_index()) {
        const auto cnt = std::upper_bound(ps.begin(), ps.end(), x) - ps.begin();
        out[h] = static_cast<double>(cnt) * norm;
    }
    return out;
}

inline std::map<std::uint32_t, double> pnt_class_ratio(double x, std::uint64_t q) {
    if (!(x >= 10)) throw domain_error("pnt_class_ratio: x must be >= 10");
    return pnt_class_ratio(x, sieve_primes(static_cast<std::uint64_t>(x), q));
}

}  // namespace lcrit
