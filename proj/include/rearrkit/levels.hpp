#ifndef REARRKIT_LEVELS_HPP
#define REARRKIT_LEVELS_HPP

#include <cstdint>
#include <vector>

#include "rearrkit/measure.hpp"
#include "rearrkit/rng.hpp"
#include "rearrkit/spaces.hpp"

namespace rearrkit {

// Doubly stochastic matrix of band masses: P[k][l] is the share of variable
// k attributed to the level band l, with levels (mu(l, f))_{l=0..n} of the
// disjoint sum alongside.
struct LevelMatrix {
    int n = 0;
    std::vector<std::vector<double>> P;
    NonnegSequence levels; // n + 1 entries

    bool doubly_stochastic(double tol = kTauMass) const;
};

// Band-mass matrix of a family of full-support UnitInterval variables.
// Tied levels are resolved by the position coupling: each value's mass is
// spread uniformly over the positions its rearrangement occupies, and cells
// [l, l+1) collect the overlap, so both stochasticity identities hold
// exactly even on intervals of constancy.
LevelMatrix build_level_matrix(const std::vector<DiscreteDistribution>& fs);

// C(l) = ceil(sup_{0<=r<n} #{k : l_k <= r}/(r+1)) >= 1 for a total map l on
// {0..n-1} (0-based; the classical statement indexes prefixes from 1).
int c_of_l(const std::vector<int>& l);

// Exhaustive value of [sum_l (sup_r #{k: l_k <= r}/(r+1))^p prod_k P[k][l_k]]^{1/p}
// over all maps l, pruning zero-weight branches. Capped at n <= 8.
double junge_statistic(const LevelMatrix& M, double p);

// Sampling estimate of the same statistic for larger n: maps drawn from the
// product of the rows, with a delta-method standard error.
struct JungeEstimate {
    double value;
    double stderr_;
};
JungeEstimate junge_statistic_mc(const LevelMatrix& M, double p, long trials, RngStream& rng);

// Moment comparison against the band decomposition with levels a = mu(., f):
// lhs = int_0^1 ||(f_k(t))_k||_E^p dt, rhs = sum_l ||(a_{l_k})_k||_E^p *
// prod_k P[k][l_k]. The inequality lhs <= rhs is what callers assert.
std::pair<double, double> level_moment_upper_check(const std::vector<DiscreteDistribution>& fs,
                                                   const SeqSpaceSpec& E, double p);

// Pointwise dilation domination for one map: the decreasing rearrangement of
// (a_{l_k})_k is dominated entrywise by the C(l)-fold dilation of a.
bool dilation_domination_holds(const NonnegSequence& levels, const std::vector<int>& l);

// Probability of the nested order-statistic event: variables are rounded
// down to the next level strictly below their value, and the k-th largest
// rounded value must reach level x_{4k-3} for every 1 <= k <= floor((n+3)/4).
// Exact via a capped-count dynamic program over the product law.
double xi_eta_construct(const std::vector<DiscreteDistribution>& fs, const NonnegSequence& x);

// Synthetic matrices for inspection and tests (levels filled with n-l).
LevelMatrix make_uniform_matrix(int n);
LevelMatrix make_permutation_matrix(const std::vector<int>& perm);
LevelMatrix make_random_doubly_stochastic(int n, RngStream& rng, int terms = 8);

} // namespace rearrkit

#endif
