#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lcrit {

// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A pole or vanishing denominator was hit; `where` is the offending
// parameter (a prime, a t value, ...).
class singularity_error : public std::runtime_error {
public:
    singularity_error(const std::string& what, double where)
        : std::runtime_error(what), where_(where) {}
    double where() const noexcept { return where_; }

private:
    double where_;
};

// Finite-difference ladder or iteration failed to settle.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Request exceeds a configured memory or size budget.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Oscillation ledger requested past the prime table; carries the largest k
// for which every class still fits.
class ledger_truncation_error : public std::runtime_error {
public:
    ledger_truncation_error(const std::string& what, std::int64_t largest_valid_k)
        : std::runtime_error(what), largest_valid_k_(largest_valid_k) {}
    std::int64_t largest_valid_k() const noexcept { return largest_valid_k_; }

private:
    std::int64_t largest_valid_k_;
};

}  // namespace lcrit
