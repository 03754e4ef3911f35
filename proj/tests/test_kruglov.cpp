// ============================================================================
// test_kruglov.cpp -- the exact transform law against two closed-form oracles
// (the Poisson pmf for an indicator base, Poisson thinning for a Bernoulli
// base), the weight table psi against an independent integral-form build, the
// moment profile, and the modular bound whose constant collapses to a Bell
// number for power weights.
// ============================================================================
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rearrkit/harness.hpp"
#include "rearrkit/kruglov.hpp"
#include "rearrkit/measure.hpp"
#include "rearrkit/rng.hpp"

using namespace rearrkit;

namespace {

double mass_at(const DiscreteDistribution& d, double value) {
    for (const Atom& a : d.atoms()) {
        if (std::fabs(a.value - value) < 1e-9) return a.mass;
    }
    return 0.0;
}

// Poisson(lambda) tail P(K >= k), summed forward.
double poisson_tail(double lambda, int k) {
    double term = std::exp(-lambda);
    for (int j = 1; j <= k; ++j) term *= lambda / j;
    double tail = 0.0;
    for (int j = k; j < k + 80; ++j) {
        tail += term;
        term *= lambda / (j + 1);
    }
    return tail;
}

} // namespace

TEST_CASE("indicator base: transform law is the Poisson(1) pmf") {
    DiscreteDistribution chi({{1.0, 1.0}}, Ambient::UnitInterval);
    KruglovLaw k = kruglov_distribution(chi);
    CHECK(k.truncation == 17);
    CHECK(k.tail_mass_bound > 0.0);
    CHECK(k.tail_mass_bound < 1e-14);
    double fact = 1.0;
    for (int n = 0; n <= 17; ++n) {
        if (n > 0) fact *= n;
        CHECK(mass_at(k.law, static_cast<double>(n)) ==
              doctest::Approx(std::exp(-1.0) / fact).epsilon(1e-13));
    }
    CHECK(k.law.total_mass() == doctest::Approx(1.0 - k.tail_mass_bound).epsilon(1e-14));
    CHECK(k.law.max_value() == 17.0);
}

TEST_CASE("Bernoulli base: thinning gives a Poisson(p) law") {
    // Mixing n-fold Bernoulli(p) sums with Poisson(1) weights is the classic
    // thinning construction, so the result must be Poisson(p) exactly.
    for (double p : {0.3, 0.7}) {
        DiscreteDistribution f({{1.0, p}}, Ambient::UnitInterval);
        KruglovLaw k = kruglov_distribution(f);
        double fact = 1.0;
        for (int n = 0; n <= 6; ++n) {
            if (n > 0) fact *= n;
            double expect = std::exp(-p) * std::pow(p, n) / fact;
            CHECK(mass_at(k.law, static_cast<double>(n)) ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("transform preserves the mean") {
    RngStream rng = RngStream::from_seed(41);
    FamilySpec fam;
    fam.max_atoms = 2;
    fam.value_min = 0.05;
    fam.value_max = 20.0;
    for (int rep = 0; rep < 6; ++rep) {
        DiscreteDistribution f = draw_family(rng, fam, 1)[0];
        KruglovLaw k = kruglov_distribution(f);
        CHECK(mean_of(k.law) == doctest::Approx(mean_of(f)).epsilon(1e-12));
    }
    DiscreteDistribution half({{2.0, 0.5}}, Ambient::HalfLine);
    CHECK_THROWS_AS(kruglov_distribution(half), argument_error);
    DiscreteDistribution ok({{1.0, 0.5}}, Ambient::UnitInterval);
    CHECK_THROWS_AS(kruglov_distribution(ok, 0), argument_error);
}

TEST_CASE("psi table: knot identities and an integral-form rebuild") {
    PsiTable psi = psi_table();
    // b[k] = P(K >= k) for K ~ Poisson(1).
    std::vector<double> b(20, 0.0);
    for (int k = 0; k < 20; ++k) b[static_cast<std::size_t>(k)] = poisson_tail(1.0, k);
    CHECK(psi(1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(psi(b[1]) == doctest::Approx(1.0).epsilon(1e-13));  // flat past b[1]
    CHECK(psi(b[2]) == doctest::Approx(b[1]).epsilon(1e-13)); // psi(b_k) = b_{k-1}
    CHECK(psi(b[3]) == doctest::Approx(b[2]).epsilon(1e-13));
    CHECK(psi(b[5]) == doctest::Approx(b[4]).epsilon(1e-12));

    // Independent rebuild: psi(t) = sum_k k * |[b_{k+1}, b_k] cap (0, t]|.
    auto psi_oracle = [&](double t) {
        double acc = 0.0;
        for (int k = 1; k <= 18; ++k) {
            double lo = b[static_cast<std::size_t>(k) + 1];
            double hi = b[static_cast<std::size_t>(k)];
            acc += k * std::fmax(0.0, std::fmin(t, hi) - lo);
        }
        return acc;
    };
    PsiTable fine = psi_table(17, 64);
    for (double t : {1e-4, 1e-3, 0.01, 0.1, 0.2637, 0.5, 0.9, 1.0}) {
        CHECK(psi(t) == doctest::Approx(psi_oracle(t)).epsilon(1e-11));
        // Exact subdivision cannot change the function.
        CHECK(fine(t) == doctest::Approx(psi(t)).epsilon(1e-14));
    }
    CHECK(static_cast<int>(fine.knots().size()) >= 64);
}

TEST_CASE("moment profile: first two norms are exact") {
    auto rows = poisson_moment_profile({1.0, 2.0, 8.0});
    CHECK(rows[0].norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rows[0].profile == doctest::Approx(1.0).epsilon(1e-12));
    // E K^2 = 2 for Poisson(1).
    CHECK(rows[1].norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(rows[1].profile == doctest::Approx(2.0 / std::log(2.0 * std::exp(1.0))));
    CHECK(rows[2].norm > rows[1].norm);
    CHECK_THROWS_AS(poisson_moment_profile({0.5}), argument_error);
    CHECK_THROWS_AS(poisson_moment_profile({51.0}), argument_error);
}

TEST_CASE("modular bound: Bell-number constants and a holding instance") {
    DiscreteDistribution f({{1.0, 0.25}, {0.5, 0.25}}, Ambient::UnitInterval);
    // c = 2 log2(2^p); the series sum_m m^(c+1)/(e m!) is the Bell number
    // B_{c+1} by Dobinski: B_3 = 5 for p = 1, B_5 = 52 for p = 2.
    KruglovModularBound b1 = kruglov_modular_bound_check(OrliczFunction::power(1.0), f);
    CHECK(b1.rhs_constant == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(b1.holds);
    // Mean preservation makes the p = 1 ratio exactly the constant.
    CHECK(b1.rhs == doctest::Approx(5.0 * mean_of(f)).epsilon(1e-12));
    CHECK(b1.lhs == doctest::Approx(mean_of(f)).epsilon(1e-12));

    KruglovModularBound b2 = kruglov_modular_bound_check(OrliczFunction::power(2.0), f);
    CHECK(b2.rhs_constant == doctest::Approx(52.0).epsilon(1e-9));
    CHECK(b2.holds);
    CHECK(b2.lhs <= b2.rhs);

    DiscreteDistribution half({{1.0, 0.5}}, Ambient::HalfLine);
    CHECK_THROWS_AS(kruglov_modular_bound_check(OrliczFunction::power(1.0), half),
                    argument_error);
}

TEST_CASE("sampling: deterministic under the seed and Bernoulli-consistent") {
    DiscreteDistribution f({{1.0, 0.3}}, Ambient::UnitInterval);
    RngStream a = RngStream::from_seed(5);
    RngStream b = RngStream::from_seed(5);
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
        double x = kruglov_sample(f, a);
        double y = kruglov_sample(f, b);
        CHECK(x == y);
        // Bernoulli(0.3) summands give nonnegative integer samples.
        CHECK(x == std::floor(x));
        CHECK(x >= 0.0);
        sum += x;
    }
    // Mean 0.3, sd sqrt(0.3): 20000 draws pin the average within 0.02.
    CHECK(sum / 20000.0 == doctest::Approx(0.3).epsilon(0.07));
}

TEST_CASE("sum domination: holds on budgeted families, rejects oversized ones") {
    RngStream rng = RngStream::from_seed(53);
    FamilySpec fam;
    fam.max_atoms = 2;
    fam.shared_budget = true;
    fam.value_min = 0.05;
    fam.value_max = 20.0;
    for (int rep = 0; rep < 5; ++rep) {
        auto fs = draw_family(rng, fam, 2 + rep % 2);
        CHECK(sum_kruglov_domination_check(fs));
    }
    DiscreteDistribution big({{1.0, 0.6}}, Ambient::UnitInterval);
    CHECK_THROWS_AS(sum_kruglov_domination_check({big, big}), argument_error);
    CHECK_THROWS_AS(sum_kruglov_domination_check({}), argument_error);
}
