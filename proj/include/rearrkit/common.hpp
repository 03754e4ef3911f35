#ifndef REARRKIT_COMMON_HPP
#define REARRKIT_COMMON_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace rearrkit {

// Tolerances and caps shared across modules.
inline constexpr double kTauVal = 1e-12;    // atom value merge tolerance
inline constexpr double kTauMass = 1e-9;    // mass conservation tolerance
inline constexpr double kProductCap = 1e7;  // exact product-enumeration cap
inline constexpr int kKruglovDefaultN = 17; // Poisson tail below 1e-14
inline constexpr unsigned long long kDefaultSeed = 42;

// Invalid argument to an operation (precondition violation).
class argument_error : public std::invalid_argument {
public:
    explicit argument_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Exact enumeration would exceed the product cap; callers fall back to MC.
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A mathematically impossible state was observed (implementation defect).
class check_failure : public std::runtime_error {
public:
    explicit check_failure(const std::string& msg) : std::runtime_error(msg) {}
};

// Value-merge predicate: |a-b| <= kTauVal * max(1, |a|, |b|).
inline bool values_close(double a, double b) {
    double scale = std::fmax(1.0, std::fmax(std::fabs(a), std::fabs(b)));
    return std::fabs(a - b) <= kTauVal * scale;
}

} // namespace rearrkit

#endif
