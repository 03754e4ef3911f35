// ============================================================================
// test_levels.cpp -- band-mass matrices, the prefix-count constant, the
// weighted map statistic with its sampling twin, dilation domination, and the
// order-statistic event probability. The exhaustive evaluators are rebuilt
// here as naive loops and compared outcome by outcome.
// ============================================================================
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rearrkit/harness.hpp"
#include "rearrkit/levels.hpp"
#include "rearrkit/measure.hpp"
#include "rearrkit/rng.hpp"

using namespace rearrkit;

namespace {

// sup_r #{k : l_k <= r}/(r+1) computed directly from the definition.
double naive_map_sup(const std::vector<int>& l) {
    int n = static_cast<int>(l.size());
    double best = 0.0;
    for (int r = 0; r < n; ++r) {
        int count = 0;
        for (int v : l) {
            if (v <= r) ++count;
        }
        best = std::fmax(best, static_cast<double>(count) / (r + 1));
    }
    return best;
}

// Odometer over all n^n maps: calls fn(map, product-of-row-masses).
template <typename Fn>
void for_each_map(const LevelMatrix& M, Fn fn) {
    int n = M.n;
    std::vector<int> l(static_cast<std::size_t>(n), 0);
    while (true) {
        double w = 1.0;
        for (int k = 0; k < n; ++k) {
            w *= M.P[static_cast<std::size_t>(k)][static_cast<std::size_t>(l[static_cast<std::size_t>(k)])];
        }
        if (w > 0.0) fn(l, w);
        int k = 0;
        while (k < n && ++l[static_cast<std::size_t>(k)] == n) {
            l[static_cast<std::size_t>(k)] = 0;
            ++k;
        }
        if (k == n) break;
    }
}

} // namespace

TEST_CASE("band matrix: distinct constant levels give a permutation") {
    DiscreteDistribution f0({{1.0, 1.0}}, Ambient::UnitInterval);
    DiscreteDistribution f1({{2.0, 1.0}}, Ambient::UnitInterval);
    LevelMatrix M = build_level_matrix({f0, f1});
    CHECK(M.n == 2);
    CHECK(M.levels[0] == 2.0);
    CHECK(M.levels[1] == 1.0);
    CHECK(M.levels[2] == 0.0);
    CHECK(M.P[0][0] == doctest::Approx(0.0));
    CHECK(M.P[0][1] == doctest::Approx(1.0));
    CHECK(M.P[1][0] == doctest::Approx(1.0));
    CHECK(M.P[1][1] == doctest::Approx(0.0));
    CHECK(M.doubly_stochastic());
}

TEST_CASE("band matrix: tied levels split by position, not by value") {
    DiscreteDistribution f({{1.0, 0.9}}, Ambient::UnitInterval);
    LevelMatrix M = build_level_matrix({f, f});
    // Value 1 fills (0, 1.8); each variable owns half of every band.
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
            CHECK(M.P[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] ==
                  doctest::Approx(0.5));
        }
    }
    CHECK(M.levels[0] == 1.0);
    CHECK(M.levels[1] == 1.0);
    CHECK(M.levels[2] == 0.0);
    CHECK(M.doubly_stochastic());
}

TEST_CASE("band matrix: doubly stochastic on random families") {
    RngStream rng = RngStream::from_seed(61);
    FamilySpec fam;
    fam.value_min = 0.05;
    fam.value_max = 50.0;
    for (int rep = 0; rep < 10; ++rep) {
        auto fs = draw_family(rng, fam, 2 + rep % 5);
        CHECK(build_level_matrix(fs).doubly_stochastic());
    }
}

TEST_CASE("prefix-count constant: hand values") {
    CHECK(c_of_l({0}) == 1);
    CHECK(c_of_l({0, 1}) == 1);
    CHECK(c_of_l({0, 1, 2}) == 1);
    CHECK(c_of_l({0, 0}) == 2);
    CHECK(c_of_l({0, 0, 0, 0, 0}) == 5);
    CHECK(c_of_l({0, 0, 1}) == 2);
    CHECK(c_of_l({0, 0, 2}) == 2);
    CHECK(c_of_l({1, 1, 2}) == 1);
    CHECK(c_of_l({2, 2, 2}) == 1);
    CHECK_THROWS_AS(c_of_l({}), argument_error);
    CHECK_THROWS_AS(c_of_l({0, 3}), argument_error);
    CHECK_THROWS_AS(c_of_l({-1}), argument_error);
}

TEST_CASE("map statistic: uniform and permutation closed forms") {
    LevelMatrix U = make_uniform_matrix(2);
    CHECK(junge_statistic(U, 1.0) == doctest::Approx(1.25));
    LevelMatrix Pm = make_permutation_matrix({2, 0, 1});
    CHECK(junge_statistic(Pm, 1.0) == doctest::Approx(1.0));
    CHECK(junge_statistic(Pm, 3.0) == doctest::Approx(1.0));
    // Power-mean monotonicity in p (total weight is 1).
    LevelMatrix U4 = make_uniform_matrix(4);
    double s1 = junge_statistic(U4, 1.0);
    double s2 = junge_statistic(U4, 2.0);
    double s4 = junge_statistic(U4, 4.0);
    CHECK(s1 <= s2 + 1e-12);
    CHECK(s2 <= s4 + 1e-12);
    CHECK_THROWS_AS(junge_statistic(U, 0.5), argument_error);
    CHECK_THROWS_AS(junge_statistic(make_uniform_matrix(9), 1.0), capacity_error);
}

TEST_CASE("map statistic: naive odometer oracle and the sampling twin") {
    RngStream rng = RngStream::from_seed(67);
    for (int rep = 0; rep < 4; ++rep) {
        LevelMatrix M = make_random_doubly_stochastic(3, rng);
        CHECK(M.doubly_stochastic());
        for (double p : {1.0, 2.7}) {
            double acc = 0.0;
            for_each_map(M, [&](const std::vector<int>& l, double w) {
                acc += w * std::pow(naive_map_sup(l), p);
            });
            double oracle = std::pow(acc, 1.0 / p);
            CHECK(junge_statistic(M, p) == doctest::Approx(oracle).epsilon(1e-12));

            JungeEstimate est = junge_statistic_mc(M, p, 20000, rng);
            CHECK(est.stderr_ < 0.05);
            CHECK(std::fabs(est.value - oracle) <= 4.0 * est.stderr_ + 1e-9);
        }
    }
    CHECK_THROWS_AS(junge_statistic_mc(make_uniform_matrix(2), 1.0, 1, rng), argument_error);
}

TEST_CASE("level moment comparison: hand case and the upper bound") {
    DiscreteDistribution f({{1.0, 0.5}}, Ambient::UnitInterval);
    auto [lhs, rhs] = level_moment_upper_check({f}, SeqSpaceSpec::ellq(1.0), 1.0);
    CHECK(lhs == doctest::Approx(0.5));
    CHECK(rhs == doctest::Approx(1.0));

    RngStream rng = RngStream::from_seed(71);
    FamilySpec fam;
    fam.max_atoms = 2;
    fam.value_min = 0.1;
    fam.value_max = 10.0;
    for (int rep = 0; rep < 6; ++rep) {
        auto fs = draw_family(rng, fam, 2 + rep % 3);
        for (const SeqSpaceSpec& E :
             {SeqSpaceSpec::ellq(1.0), SeqSpaceSpec::ellq(2.0), SeqSpaceSpec::ellinfty()}) {
            for (double p : {1.0, 2.0}) {
                auto [a, b] = level_moment_upper_check(fs, E, p);
                CHECK(a <= b * (1.0 + 1e-9) + 1e-300);
            }
        }
    }
}

TEST_CASE("dilation domination: every map of every sampled level sequence") {
    RngStream rng = RngStream::from_seed(73);
    for (int rep = 0; rep < 6; ++rep) {
        int n = 2 + rep % 4;
        // Non-increasing levels with deliberate ties.
        std::vector<double> lv;
        double cur = 8.0;
        for (int i = 0; i <= n; ++i) {
            lv.push_back(cur);
            if (rng.next_unit() < 0.6) cur *= 0.3 + 0.6 * rng.next_unit();
        }
        NonnegSequence levels(lv);
        std::vector<int> l(static_cast<std::size_t>(n), 0);
        while (true) {
            CHECK(dilation_domination_holds(levels, l));
            int k = 0;
            while (k < n && ++l[static_cast<std::size_t>(k)] == n) {
                l[static_cast<std::size_t>(k)] = 0;
                ++k;
            }
            if (k == n) break;
        }
    }
    CHECK_THROWS_AS(dilation_domination_holds(NonnegSequence({1.0}), {0, 0}), argument_error);
}

TEST_CASE("order-statistic event: hand probabilities") {
    // Four iid uniform-over-four-values variables: the single condition
    // "some xi reaches the top band" fails only when all four land lower.
    DiscreteDistribution q(
        {{4.0, 0.25}, {3.0, 0.25}, {2.0, 0.25}, {1.0, 0.25}}, Ambient::UnitInterval);
    std::vector<DiscreteDistribution> fs(4, q);
    LevelMatrix M = build_level_matrix(fs);
    CHECK(xi_eta_construct(fs, M.levels) == doctest::Approx(175.0 / 256.0).epsilon(1e-12));

    // A single variable is rounded to exactly the threshold level: certainty.
    DiscreteDistribution solo({{1.0, 0.5}}, Ambient::UnitInterval);
    CHECK(xi_eta_construct({solo}, build_level_matrix({solo}).levels) ==
          doctest::Approx(1.0));

    CHECK_THROWS_AS(xi_eta_construct({solo}, NonnegSequence({1.0})), argument_error);
    CHECK_THROWS_AS(xi_eta_construct({solo}, NonnegSequence({0.5, 1.0})), argument_error);
    CHECK_THROWS_AS(xi_eta_construct({solo}, NonnegSequence({2.0, 0.0})), argument_error);
}

TEST_CASE("order-statistic event: row-enumeration oracle up to n = 5") {
    RngStream rng = RngStream::from_seed(79);
    FamilySpec fam;
    fam.max_atoms = 2;
    fam.value_min = 0.1;
    fam.value_max = 10.0;
    for (int rep = 0; rep < 8; ++rep) {
        int n = 2 + rep % 4;
        auto fs = draw_family(rng, fam, n);
        LevelMatrix M = build_level_matrix(fs);
        const NonnegSequence& x = M.levels;
        int m = (n + 3) / 4;
        double oracle = 0.0;
        for_each_map(M, [&](const std::vector<int>& l, double w) {
            std::vector<double> xi;
            for (int v : l) xi.push_back(x[static_cast<std::size_t>(v) + 1]);
            bool ok = true;
            for (int k = 1; k <= m; ++k) {
                int count = 0;
                for (double v : xi) {
                    if (v >= x[static_cast<std::size_t>(4 * k - 3)]) ++count;
                }
                if (count < k) ok = false;
            }
            if (ok) oracle += w;
        });
        CHECK(xi_eta_construct(fs, x) == doctest::Approx(oracle).epsilon(1e-11));
    }
}

TEST_CASE("matrix builders: validation and shape") {
    LevelMatrix U = make_uniform_matrix(3);
    CHECK(U.doubly_stochastic());
    CHECK(U.levels.size() == 4);
    CHECK(U.levels[0] == 3.0);
    CHECK(U.levels[3] == 0.0);
    CHECK_THROWS_AS(make_uniform_matrix(0), argument_error);
    CHECK_THROWS_AS(make_permutation_matrix({0, 0}), argument_error);
    CHECK_THROWS_AS(make_permutation_matrix({1, 2}), argument_error);
    RngStream rng = RngStream::from_seed(83);
    CHECK(make_random_doubly_stochastic(5, rng).doubly_stochastic());
    CHECK_THROWS_AS(make_random_doubly_stochastic(0, rng), argument_error);
}
