#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "lcrit/arith/phase.hpp"
#include "lcrit/errors.hpp"

namespace lcrit {

// Distinct prime factors of n, ascending.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
    if (n == 0) throw domain_error("euler_phi: n must be positive");
    std::uint64_t r = n;
    for (auto p : prime_factors(n)) r -= r / p;
    return r;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

// One cyclic factor of (Z/qZ)^*, living on the prime-power modulus `modulus`.
// dlog[x] is the discrete log of x (mod modulus) to `generator`, or -1 when x
// is not a unit.
struct CyclicFactor {
    std::uint64_t prime;
    std::uint64_t modulus;
    std::uint64_t generator;
    std::uint64_t order;
    std::vector<std::int64_t> dlog;
};

namespace detail {

inline std::uint64_t smallest_primitive_root(std::uint64_t m, std::uint64_t phi) {
    const auto rs = prime_factors(phi);
    for (std::uint64_t g = 2; g < m; ++g) {
        if (std::gcd(g, m) != 1) continue;
        bool ok = true;
        for (auto r : rs) {
            if (powmod(g, phi / r, m) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    return 1;  // m = 2: trivial group
}

inline std::vector<CyclicFactor> unit_group_factors(std::uint64_t q) {
    std::vector<CyclicFactor> out;
    std::uint64_t rest = q;
    for (auto p : prime_factors(q)) {
        std::uint64_t m = 1;
        int k = 0;
        while (rest % p == 0) {
            rest /= p;
            m *= p;
            ++k;
        }
        if (p == 2) {
            if (k == 1) continue;
            if (k == 2) {
                CyclicFactor f{2, 4, 3, 2, std::vector<std::int64_t>(4, -1)};
                f.dlog[1] = 0;
                f.dlog[3] = 1;
                out.push_back(std::move(f));
                continue;
            }
            // n = (-1)^a 5^b (mod 2^k)
            CyclicFactor fa{2, m, m - 1, 2, std::vector<std::int64_t>(m, -1)};
            CyclicFactor fb{2, m, 5, m / 4, std::vector<std::int64_t>(m, -1)};
            std::uint64_t five_b = 1;
            for (std::uint64_t b = 0; b < m / 4; ++b) {
                for (std::uint64_t a = 0; a < 2; ++a) {
                    const std::uint64_t v = a ? (m - five_b) % m : five_b;
                    fa.dlog[v] = static_cast<std::int64_t>(a);
                    fb.dlog[v] = static_cast<std::int64_t>(b);
                }
                five_b = five_b * 5 % m;
            }
            out.push_back(std::move(fa));
            out.push_back(std::move(fb));
            continue;
        }
        const std::uint64_t phi = m / p * (p - 1);
        CyclicFactor f{p, m, smallest_primitive_root(m, phi), phi, std::vector<std::int64_t>(m, -1)};
        std::uint64_t x = 1;
        for (std::uint64_t i = 0; i < phi; ++i) {
            f.dlog[x] = static_cast<std::int64_t>(i);
            x = mulmod(x, f.generator, m);
        }
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace detail

class DirichletCharacter;
std::pair<std::uint64_t, bool> conductor_and_primitivity(const DirichletCharacter& chi);

// Exact Dirichlet character mod q. Values are stored as rational phases on
// the unit group plus a zero mask.
class DirichletCharacter {
public:
    std::uint64_t modulus() const noexcept { return q_; }
    std::size_t index() const noexcept { return index_; }
    const std::vector<std::int64_t>& exponents() const noexcept { return exps_; }
    const std::vector<std::uint64_t>& factor_orders() const noexcept { return orders_; }

    bool is_unit(std::int64_t n) const { return !zero_mask_[reduce(n)]; }
    bool zero_mask(std::int64_t n) const { return zero_mask_[reduce(n)]; }
    // Phase of χ(n) as a fraction of a turn; zero for non-units (check is_unit).
    RationalPhase phase(std::int64_t n) const { return phases_[reduce(n)]; }
    std::int64_t phase_num(std::int64_t n) const { return phases_[reduce(n)].num(); }
    std::int64_t phase_den(std::int64_t n) const { return phases_[reduce(n)].den(); }
    // ∠χ(n) in [0, 2π).
    double angle(std::int64_t n) const { return phases_[reduce(n)].radians(); }
    std::complex<double> value(std::int64_t n) const {
        const auto r = reduce(n);
        if (zero_mask_[r]) return 0.0;
        return std::polar(1.0, phases_[r].radians());
    }

    std::uint64_t conductor() const noexcept { return conductor_; }
    int parity() const noexcept { return parity_; }
    bool is_principal() const noexcept { return principal_; }
    bool is_primitive() const noexcept { return primitive_; }
    bool is_real() const {
        for (std::size_t n = 0; n < q_; ++n)
            if (!zero_mask_[n] && phases_[n].den() > 2) return false;
        return true;
    }

    DirichletCharacter conjugate() const {
        DirichletCharacter c = *this;
        for (auto& p : c.phases_) p = -p;
        for (std::size_t i = 0; i < c.exps_.size(); ++i)
            c.exps_[i] = (static_cast<std::int64_t>(orders_[i]) - exps_[i]) % static_cast<std::int64_t>(orders_[i]);
        c.index_ = 0;
        for (std::size_t i = 0; i < c.exps_.size(); ++i) c.index_ = c.index_ * orders_[i] + static_cast<std::size_t>(c.exps_[i]);
        return c;
    }

    friend std::vector<DirichletCharacter> enumerate_characters(std::uint64_t q);

private:
    std::size_t reduce(std::int64_t n) const {
        const auto q = static_cast<std::int64_t>(q_);
        std::int64_t r = n % q;
        if (r < 0) r += q;
        return static_cast<std::size_t>(r);
    }

    std::uint64_t q_ = 1;
    std::size_t index_ = 0;
    std::vector<std::int64_t> exps_;
    std::vector<std::uint64_t> orders_;
    std::vector<RationalPhase> phases_;
    std::vector<bool> zero_mask_;
    std::uint64_t conductor_ = 1;
    int parity_ = 0;
    bool principal_ = true;
    bool primitive_ = true;
};

// Smallest d | q such that χ is trivial on units n ≡ 1 (mod d).
inline std::pair<std::uint64_t, bool> conductor_and_primitivity(const DirichletCharacter& chi) {
    const std::uint64_t q = chi.modulus();
    for (std::uint64_t d = 1; d <= q; ++d) {
        if (q % d) continue;
        bool trivial = true;
        for (std::uint64_t n = 1 % d; n < q && trivial; n += d) {
            if (n == 0) continue;
            if (chi.is_unit(static_cast<std::int64_t>(n)) && !chi.phase(static_cast<std::int64_t>(n)).is_zero()) trivial = false;
        }
        if (trivial) return {d, d == q};
    }
    return {q, true};
}

// All φ(q) characters mod q, ordered lexicographically by exponent tuple
// (factors by increasing prime; for 2^k, k >= 3, the -1 factor precedes 5).
inline std::vector<DirichletCharacter> enumerate_characters(std::uint64_t q) {
    if (q == 0) throw domain_error("enumerate_characters: q must be >= 1");
    if (q > 100000) throw resource_error("enumerate_characters: q above 1e5 is outside desk scale");
    const auto factors = detail::unit_group_factors(q);
    std::vector<std::uint64_t> orders;
    for (const auto& f : factors) orders.push_back(f.order);

    std::vector<bool> mask(q);
    for (std::uint64_t n = 0; n < q; ++n) mask[n] = std::gcd(n, q) != 1;
    if (q == 1) mask[0] = false;

    std::vector<DirichletCharacter> out;
    std::vector<std::int64_t> e(factors.size(), 0);
    const std::uint64_t count = euler_phi(q);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        DirichletCharacter c;
        c.q_ = q;
        c.index_ = idx;
        c.exps_ = e;
        c.orders_ = orders;
        c.zero_mask_ = mask;
        c.phases_.assign(q, RationalPhase{});
        for (std::uint64_t n = 0; n < q; ++n) {
            if (mask[n]) continue;
            RationalPhase ph;
            for (std::size_t i = 0; i < factors.size(); ++i) {
                const auto& f = factors[i];
                const auto lg = f.dlog[n % f.modulus];
                ph = ph + RationalPhase(e[i] * lg % static_cast<std::int64_t>(f.order), static_cast<std::int64_t>(f.order));
            }
            c.phases_[n] = ph;
        }
        c.principal_ = true;
        for (std::uint64_t n = 0; n < q; ++n)
            if (!mask[n] && !c.phases_[n].is_zero()) c.principal_ = false;
        c.parity_ = c.phases_[(q - 1) % q].is_zero() ? 0 : 1;
        const auto [cond, prim] = conductor_and_primitivity(c);
        c.conductor_ = cond;
        c.primitive_ = prim;
        out.push_back(std::move(c));
        // next exponent tuple, last factor fastest
        for (std::size_t i = factors.size(); i-- > 0;) {
            if (++e[i] < static_cast<std::int64_t>(orders[i])) break;
            e[i] = 0;
        }
    }
    return out;
}

// τ(χ) = Σ_{m=1}^{q} χ(m) e^{2πim/q}, phases added exactly before conversion.
inline std::complex<double> gauss_sum(const DirichletCharacter& chi) {
    const auto q = static_cast<std::int64_t>(chi.modulus());
    NeumaierSum<std::complex<double>> acc;
    for (std::int64_t m = 1; m <= q; ++m) {
        if (!chi.is_unit(m)) continue;
        const RationalPhase ph = chi.phase(m) + RationalPhase(m, q);
        acc.add(std::polar(1.0, ph.radians()));
    }
    return acc.value();
}

// Σ over reduced residues h of χ(h).
inline std::complex<double> phase_sum_reduced(const DirichletCharacter& chi) {
    const auto q = static_cast<std::int64_t>(chi.modulus());
    NeumaierSum<std::complex<double>> acc;
    for (std::int64_t h = 1; h <= q; ++h)
        if (chi.is_unit(h)) acc.add(chi.value(h));
    return acc.value();
}

// The primitive character mod conductor(χ) that induces χ.
inline DirichletCharacter inducing_primitive(const DirichletCharacter& chi) {
    const std::uint64_t q = chi.modulus(), d = chi.conductor();
    for (auto& psi : enumerate_characters(d)) {
        if (!psi.is_primitive()) continue;
        bool match = true;
        for (std::uint64_t n = 1; n < q && match; ++n) {
            if (!chi.is_unit(static_cast<std::int64_t>(n))) continue;
            if (psi.phase(static_cast<std::int64_t>(n)) != chi.phase(static_cast<std::int64_t>(n))) match = false;
        }
        if (match) return psi;
    }
    throw numerical_error("inducing_primitive: no inducing character found");
}

// Character mod q by index; throws domain_error for a bad index.
inline DirichletCharacter character_at(std::uint64_t q, std::size_t index) {
    auto all = enumerate_characters(q);
    if (index >= all.size()) throw domain_error("character index out of range for this modulus");
    return std::move(all[index]);
}

// Odd primitive characters mod q, in enumeration order.
inline std::vector<DirichletCharacter> odd_primitive_characters(std::uint64_t q) {
    std::vector<DirichletCharacter> out;
    for (auto& c : enumerate_characters(q))
        if (c.is_primitive() && c.parity() == 1) out.push_back(std::move(c));
    return out;
}

}  // namespace lcrit
