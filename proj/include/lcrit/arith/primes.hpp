#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "lcrit/errors.hpp"

namespace lcrit {

struct SieveOptions {
    std::uint64_t memory_budget_bytes = std::uint64_t{1} << 30;
    std::uint64_t segment_size = std::uint64_t{1} << 16;  // odd numbers per segment
};

// Sorted primes <= p_max with an order-preserving partition by residue class
// modulo a bound modulus.
class PrimeTable {
public:
    std::uint64_t p_max() const noexcept { return p_max_; }
    std::uint64_t modulus() const noexcept { return q_; }
    const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }
    const std::map<std::uint32_t, std::vector<std::uint32_t>>& class_index() const noexcept { return classes_; }
    const std::vector<std::uint32_t>& residue_class(std::uint32_t h) const {
        static const std::vector<std::uint32_t> empty;
        auto it = classes_.find(h);
        return it == classes_.end() ? empty : it->second;
    }
    // Number of listed primes <= x.
    std::size_t count_up_to(std::uint64_t x) const {
        return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
    }

    friend PrimeTable sieve_primes(std::uint64_t, std::uint64_t, const SieveOptions&);

private:
    std::uint64_t p_max_ = 0;
    std::uint64_t q_ = 1;
    std::vector<std::uint32_t> primes_;
    std::map<std::uint32_t, std::vector<std::uint32_t>> classes_;
};

// Segmented sieve of Eratosthenes over odd numbers, then a second pass that
// tags each prime with its class h = p mod q (gcd(h, q) = 1).
inline PrimeTable sieve_primes(std::uint64_t p_max, std::uint64_t q = 1, const SieveOptions& opt = {}) {
    if (p_max < 2) throw domain_error("sieve_primes: p_max must be >= 2");
    if (q == 0) throw domain_error("sieve_primes: q must be >= 1");
    if (p_max > 0xffffffffull) throw resource_error("sieve_primes: p_max exceeds 32-bit prime storage");
    // ~ x/ln x primes of 4 bytes, stored twice (list + classes)
    const double expected = 8.0 * 1.1 * static_cast<double>(p_max) / std::log(static_cast<double>(p_max));
    if (expected + static_cast<double>(opt.segment_size) > static_cast<double>(opt.memory_budget_bytes))
        throw resource_error("sieve_primes: p_max exceeds the configured memory budget");

    PrimeTable t;
    t.p_max_ = p_max;
    t.q_ = q;
    auto& out = t.primes_;
    out.push_back(2);

    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(p_max))) + 1;
    std::vector<std::uint32_t> base;
    {
        std::vector<bool> small(root + 1, true);
        for (std::uint64_t i = 3; i <= root; i += 2) {
            if (!small[i]) continue;
            base.push_back(static_cast<std::uint32_t>(i));
            for (std::uint64_t j = i * i; j <= root; j += 2 * i) small[j] = false;
        }
    }
    // Segment covers odd numbers lo, lo+2, ..., lo + 2(seg-1).
    std::vector<char> seg(opt.segment_size);
    for (std::uint64_t lo = 3; lo <= p_max; lo += 2 * opt.segment_size) {
        const std::uint64_t hi = std::min(p_max, lo + 2 * (opt.segment_size - 1));
        const std::uint64_t n = (hi - lo) / 2 + 1;
        std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(n), 1);
        for (auto p : base) {
            const std::uint64_t pp = std::uint64_t{p} * p;
            if (pp > hi) break;
            std::uint64_t start = std::max(pp, (lo + p - 1) / p * p);
            if (start % 2 == 0) start += p;
            for (std::uint64_t j = start; j <= hi; j += 2 * p) seg[(j - lo) / 2] = 0;
        }
        for (std::uint64_t i = 0; i < n; ++i)
            if (seg[i]) out.push_back(static_cast<std::uint32_t>(lo + 2 * i));
    }
    for (auto p : out) {
        const auto h = static_cast<std::uint32_t>(p % q);
        if (std::gcd(std::uint64_t{h}, q) == 1 || q == 1) t.classes_[q == 1 ? 0 : h].push_back(p);
    }
    return t;
}

}  // namespace lcrit
