#ifndef REARRKIT_MEASURE_HPP
#define REARRKIT_MEASURE_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rearrkit/common.hpp"

namespace rearrkit {

// Underlying measure space of a distribution: (0,1) with an implicit zero
// atom filling the slack, or (0,infinity) where zero fills the complement of
// a finite support.
enum class Ambient { UnitInterval, HalfLine };

struct Atom {
    double value; // >= 0
    double mass;  // > 0
};

// Equimeasurability class of a nonnegative function: finitely many
// (value, mass) atoms. Values are strictly decreasing after construction;
// equal values (within kTauVal) are merged by summing masses. A value-0 atom
// is allowed and kept when given explicitly.
class DiscreteDistribution {
public:
    DiscreteDistribution() : total_mass_(0.0), ambient_(Ambient::UnitInterval) {}
    DiscreteDistribution(std::vector<Atom> atoms, Ambient ambient);

    const std::vector<Atom>& atoms() const { return atoms_; }
    double total_mass() const { return total_mass_; }
    Ambient ambient() const { return ambient_; }

    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    // Largest value carrying positive mass (0 when there are no atoms).
    double max_value() const { return atoms_.empty() ? 0.0 : atoms_.front().value; }

    // Mass on strictly positive values.
    double support_mass() const;

    // Copy with the implicit zero atom materialized so total_mass == 1.
    // UnitInterval only.
    DiscreteDistribution with_full_support() const;

    // JSON round trip: {"ambient":"unit"|"halfline","atoms":[[value,mass],...]}.
    std::string to_json() const;
    static DiscreteDistribution from_json(const std::string& text);

private:
    std::vector<Atom> atoms_;
    double total_mass_;
    Ambient ambient_;
};

// Finite nonnegative sequence; carrier for sequence-space evaluations.
class NonnegSequence {
public:
    NonnegSequence() = default;
    explicit NonnegSequence(std::vector<double> entries);

    const std::vector<double>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

private:
    std::vector<double> entries_;
};

// m({f > s}); right-continuous and non-increasing in s. Strict inequality,
// so value-0 atoms never contribute.
double distribution_function(const DiscreteDistribution& d, double s);

// Decreasing rearrangement at t > 0: the right-continuous step function
// inf{lambda >= 0 : d(lambda) <= t}; 0 for t >= total mass.
double rearrangement(const DiscreteDistribution& d, double t);

// (mu(k, f))_{k=0..k_max}; mu(0, f) is the essential sup.
NonnegSequence rearrangement_sequence(const DiscreteDistribution& d, int k_max);

// Disjoint sum: distribution function equals the pointwise sum of the
// inputs'. HalfLine result; value-0 atoms are dropped (zero is the ambient
// default on (0,infinity)).
DiscreteDistribution disjoint_sum(const std::vector<DiscreteDistribution>& ds);

// Dilation: masses scaled by s, values unchanged. UnitInterval survives
// s <= 1; s > 1 promotes to HalfLine.
DiscreteDistribution dilate(const DiscreteDistribution& d, double s);

// Sequence dilation: each entry repeated m times.
NonnegSequence dilate_sequence(const NonnegSequence& a, int m);

// Pointwise p-th power: values raised, masses kept, order preserved.
DiscreteDistribution power(const DiscreteDistribution& d, double p);

// Split at level c: head carries values > c, tail carries values <= c.
std::pair<DiscreteDistribution, DiscreteDistribution>
split_at_level(const DiscreteDistribution& d, double c);

// Exact law of the sum of independent UnitInterval variables (product
// enumeration with zero atoms materialized). total_mass == 1.
DiscreteDistribution sum_of_independent(const std::vector<DiscreteDistribution>& ds);

// Exact law of the max of independent UnitInterval variables via the product
// of CDFs. total_mass == 1.
DiscreteDistribution max_of_independent(const std::vector<DiscreteDistribution>& ds);

// Law equality modulo materialized zero atoms and kTauVal value merging.
bool same_law(const DiscreteDistribution& a, const DiscreteDistribution& b,
              double mass_tol = kTauMass);

// Checks mu(t, g) <= c * mu(t/c, h) for every t > 0. Both sides are
// right-continuous steps, so the union of their breakpoints decides.
bool rearrangement_dominated(const DiscreteDistribution& g,
                             const DiscreteDistribution& h, double c);

// First moment: sum of mass * value.
double mean_of(const DiscreteDistribution& d);

// Law of f restricted to its first unit interval of rearrangement,
// mu(f) * chi_(0,1), as a UnitInterval distribution.
DiscreteDistribution restrict_head(const DiscreteDistribution& d);

// Reinterpret a HalfLine distribution with total mass <= 1 as UnitInterval.
DiscreteDistribution as_unit_interval(const DiscreteDistribution& d);

} // namespace rearrkit

#endif
