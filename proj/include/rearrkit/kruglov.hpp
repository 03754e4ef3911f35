#ifndef REARRKIT_KRUGLOV_HPP
#define REARRKIT_KRUGLOV_HPP

#include <vector>

#include "rearrkit/measure.hpp"
#include "rearrkit/rng.hpp"
#include "rearrkit/spaces.hpp"

namespace rearrkit {

// Exact truncated law of the Kruglov transform: the mixture over n = 0..N of
// n-fold independent-sum laws of the base, the n-th weighted by 1/(e*n!).
struct KruglovLaw {
    DiscreteDistribution base;
    int truncation;
    DiscreteDistribution law;     // UnitInterval, total mass 1 - tail_mass_bound
    double tail_mass_bound;       // sum of weights beyond the truncation
};

KruglovLaw kruglov_distribution(const DiscreteDistribution& f, int N = kKruglovDefaultN);

// One draw equidistributed with the transform: draw n with weight 1/(e*n!),
// then sum n independent draws of f.
double kruglov_sample(const DiscreteDistribution& f, RngStream& rng);

// psi(t) = int_0^t mu(s, K chi_(0,1)) ds as a piecewise-linear table on
// (0, 1]. Natural knots sit at the cumulative Poisson(1) tails; segments are
// subdivided (exactly) until at least `knots` knots are present.
PsiTable psi_table(int N = kKruglovDefaultN, int knots = 1);

// Exact truncated-Poisson p-th norms of K chi_(0,1) next to p/log(ep).
struct MomentProfileRow {
    double p;
    double norm;    // ||K chi||_p
    double profile; // p / log(ep)
};
std::vector<MomentProfileRow> poisson_moment_profile(const std::vector<double>& p_grid);

// Modular bound with the explicit doubling-derived constant: checks
// int Psi(Kf) <= (sum_m m^{c+1}/(e*m!)) * int Psi(f), c = 2*log2(C_Psi).
struct KruglovModularBound {
    double lhs;
    double rhs_constant;
    double rhs;
    bool holds;
};
KruglovModularBound kruglov_modular_bound_check(const OrliczFunction& psi,
                                                const DiscreteDistribution& f);

// Exact-constant check for independent nonnegative summands with total
// support mass <= 1: mu(t, sum f_k) <= 3 * mu(t/3, Kf), where the transform
// is applied to f = the disjoint sum of the f_k viewed on (0,1).
bool sum_kruglov_domination_check(const std::vector<DiscreteDistribution>& fs);

} // namespace rearrkit

#endif
