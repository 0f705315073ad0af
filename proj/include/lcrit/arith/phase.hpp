#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>

#include "lcrit/errors.hpp"
#include "lcrit/numeric.hpp"

namespace lcrit {

// Angle stored as an exact fraction num/den of a full turn, 0 <= num < den,
// gcd(num, den) = 1.
class RationalPhase {
public:
    constexpr RationalPhase() = default;
    RationalPhase(std::int64_t num, std::int64_t den) {
        if (den <= 0) throw domain_error("RationalPhase: denominator must be positive");
        num %= den;
        if (num < 0) num += den;
        const std::int64_t g = std::gcd(num, den);
        num_ = num / g;
        den_ = den / g;
    }

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_ == 0; }

    double turns() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    // Radians in [0, 2π).
    double radians() const noexcept { return 2 * pi * turns(); }

    friend RationalPhase operator+(RationalPhase a, RationalPhase b) {
        const std::int64_t l = std::lcm(a.den_, b.den_);
        return {a.num_ * (l / a.den_) + b.num_ * (l / b.den_), l};
    }
    friend RationalPhase operator-(RationalPhase a) { return {-a.num_, a.den_}; }
    friend RationalPhase operator-(RationalPhase a, RationalPhase b) { return a + (-b); }
    friend RationalPhase operator*(std::int64_t k, RationalPhase a) {
        return {static_cast<std::int64_t>((static_cast<__int128>(k) * a.num_) % a.den_), a.den_};
    }
    friend bool operator==(const RationalPhase&, const RationalPhase&) = default;
    friend auto operator<=>(const RationalPhase& a, const RationalPhase& b) {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }
    friend std::ostream& operator<<(std::ostream& os, const RationalPhase& p) {
        return os << p.num_ << '/' << p.den_;
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace lcrit
