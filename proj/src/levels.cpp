#include "rearrkit/levels.hpp"

#include <algorithm>
#include <cmath>

namespace rearrkit {

bool LevelMatrix::doubly_stochastic(double tol) const {
    for (int k = 0; k < n; ++k) {
        double row = 0.0;
        for (int l = 0; l < n; ++l) row += P[k][l];
        if (std::fabs(row - 1.0) > tol) return false;
    }
    for (int l = 0; l < n; ++l) {
        double col = 0.0;
        for (int k = 0; k < n; ++k) col += P[k][l];
        if (std::fabs(col - 1.0) > tol) return false;
    }
    return true;
}

LevelMatrix build_level_matrix(const std::vector<DiscreteDistribution>& fs) {
    int n = static_cast<int>(fs.size());
    if (n < 1) throw argument_error("build_level_matrix needs a nonempty family");
    for (const DiscreteDistribution& f : fs) {
        if (f.ambient() != Ambient::UnitInterval) {
            throw argument_error("build_level_matrix needs UnitInterval inputs");
        }
    }
    DiscreteDistribution f = disjoint_sum(fs);
    const std::vector<Atom>& merged = f.atoms();
    std::size_t v_count = merged.size();

    // Per-variable mass at each merged value; both lists descend, so a
    // two-pointer sweep aligns them.
    std::vector<std::vector<double>> w(static_cast<std::size_t>(n),
                                       std::vector<double>(v_count, 0.0));
    std::vector<double> zero_mass(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        std::size_t i = 0;
        for (const Atom& a : fs[static_cast<std::size_t>(k)].atoms()) {
            if (a.value <= 0.0) continue;
            while (i < v_count && merged[i].value > a.value &&
                   !values_close(merged[i].value, a.value)) {
                ++i;
            }
            w[static_cast<std::size_t>(k)][i] += a.mass;
        }
        zero_mass[static_cast<std::size_t>(k)] =
            1.0 - fs[static_cast<std::size_t>(k)].support_mass();
    }

    // Position coupling: value i occupies [pos, pos + W_i) on (0, n); each
    // variable's share of the value is spread uniformly over that interval.
    std::vector<std::vector<double>> P(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    auto spread = [&](double pos, double width, auto mass_of) {
        if (width <= 0.0) return;
        int l_first = std::clamp(static_cast<int>(std::floor(pos)), 0, n - 1);
        for (int l = l_first; l < n; ++l) {
            double overlap = std::fmin(pos + width, static_cast<double>(l) + 1.0) -
                             std::fmax(pos, static_cast<double>(l));
            if (overlap <= 0.0) break;
            for (int k = 0; k < n; ++k) {
                P[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] +=
                    mass_of(k) * overlap / width;
            }
        }
    };
    double pos = 0.0;
    for (std::size_t i = 0; i < v_count; ++i) {
        double width = merged[i].mass;
        spread(pos, width, [&](int k) { return w[static_cast<std::size_t>(k)][i]; });
        pos += width;
    }
    spread(pos, static_cast<double>(n) - pos,
           [&](int k) { return zero_mass[static_cast<std::size_t>(k)]; });

    LevelMatrix out;
    out.n = n;
    out.P = std::move(P);
    out.levels = rearrangement_sequence(f, n);
    return out;
}

int c_of_l(const std::vector<int>& l) {
    int n = static_cast<int>(l.size());
    if (n < 1) throw argument_error("c_of_l needs a nonempty map");
    std::vector<int> hist(static_cast<std::size_t>(n), 0);
    for (int v : l) {
        if (v < 0 || v >= n) throw argument_error("c_of_l map must be into {0..n-1}");
        ++hist[static_cast<std::size_t>(v)];
    }
    // sup_r count(l_k <= r)/(r+1) tracked as an exact rational.
    long best_num = 0, best_den = 1;
    long count = 0;
    for (int r = 0; r < n; ++r) {
        count += hist[static_cast<std::size_t>(r)];
        if (count * best_den > best_num * (r + 1)) {
            best_num = count;
            best_den = r + 1;
        }
    }
    return static_cast<int>((best_num + best_den - 1) / best_den);
}

namespace {

void require_exhaustive_size(int n, const char* op) {
    if (n > 8) {
        throw capacity_error(std::string(op) +
                             ": exhaustive map enumeration is capped at n = 8; use the MC path");
    }
}

// Raw sup_r count/(r+1) of a complete map given its histogram prefix counts.
double map_statistic(const std::vector<int>& hist) {
    int n = static_cast<int>(hist.size());
    double best = 0.0;
    int count = 0;
    for (int r = 0; r < n; ++r) {
        count += hist[static_cast<std::size_t>(r)];
        best = std::fmax(best, static_cast<double>(count) / static_cast<double>(r + 1));
    }
    return best;
}

} // namespace

double junge_statistic(const LevelMatrix& M, double p) {
    if (!std::isfinite(p) || p < 1.0) throw argument_error("junge_statistic needs p >= 1");
    require_exhaustive_size(M.n, "junge_statistic");
    int n = M.n;
    std::vector<int> hist(static_cast<std::size_t>(n), 0);
    double sum = 0.0;
    // DFS over maps with zero-weight pruning; leaf order is fixed, so the
    // accumulation is deterministic.
    auto walk = [&](auto&& self, int k, double weight) -> void {
        if (k == n) {
            double s = map_statistic(hist);
            if (s > 0.0) sum += weight * std::pow(s, p);
            return;
        }
        for (int l = 0; l < n; ++l) {
            double w = M.P[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
            if (w <= 0.0) continue;
            ++hist[static_cast<std::size_t>(l)];
            self(self, k + 1, weight * w);
            --hist[static_cast<std::size_t>(l)];
        }
    };
    walk(walk, 0, 1.0);
    return std::pow(sum, 1.0 / p);
}

JungeEstimate junge_statistic_mc(const LevelMatrix& M, double p, long trials, RngStream& rng) {
    if (!std::isfinite(p) || p < 1.0) throw argument_error("junge_statistic_mc needs p >= 1");
    if (trials < 2) throw argument_error("junge_statistic_mc needs trials >= 2");
    int n = M.n;
    std::vector<int> hist(static_cast<std::size_t>(n), 0);
    double sum = 0.0, sumsq = 0.0;
    for (long t = 0; t < trials; ++t) {
        std::fill(hist.begin(), hist.end(), 0);
        for (int k = 0; k < n; ++k) {
            double u = rng.next_unit();
            double cum = 0.0;
            int pick = n - 1;
            for (int l = 0; l < n; ++l) {
                cum += M.P[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
                if (u < cum) {
                    pick = l;
                    break;
                }
            }
            ++hist[static_cast<std::size_t>(pick)];
        }
        double x = std::pow(map_statistic(hist), p);
        sum += x;
        sumsq += x * x;
    }
    double mean = sum / static_cast<double>(trials);
    double var = std::fmax(0.0, sumsq / static_cast<double>(trials) - mean * mean);
    double se_mean = std::sqrt(var / static_cast<double>(trials));
    JungeEstimate est;
    est.value = std::pow(mean, 1.0 / p);
    est.stderr_ = mean > 0.0 ? se_mean * est.value / (p * mean) : 0.0;
    return est;
}

std::pair<double, double> level_moment_upper_check(const std::vector<DiscreteDistribution>& fs,
                                                   const SeqSpaceSpec& E, double p) {
    if (!std::isfinite(p) || p < 1.0) throw argument_error("level_moment_upper_check needs p >= 1");
    int n = static_cast<int>(fs.size());
    require_exhaustive_size(n, "level_moment_upper_check");
    double lhs = orlicz_modular(OrliczFunction::power(p), vector_norm_law(E, fs));
    LevelMatrix M = build_level_matrix(fs);
    std::vector<double> selected(static_cast<std::size_t>(n), 0.0);
    double rhs = 0.0;
    auto walk = [&](auto&& self, int k, double weight) -> void {
        if (k == n) {
            rhs += weight * std::pow(sequence_quasinorm(E, selected), p);
            return;
        }
        for (int l = 0; l < n; ++l) {
            double w = M.P[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
            if (w <= 0.0) continue;
            selected[static_cast<std::size_t>(k)] = M.levels[static_cast<std::size_t>(l)];
            self(self, k + 1, weight * w);
        }
        selected[static_cast<std::size_t>(k)] = 0.0;
    };
    walk(walk, 0, 1.0);
    return {lhs, rhs};
}

bool dilation_domination_holds(const NonnegSequence& levels, const std::vector<int>& l) {
    int n = static_cast<int>(l.size());
    if (static_cast<int>(levels.size()) < n + 1) {
        throw argument_error("dilation_domination_holds needs n+1 levels");
    }
    int c = c_of_l(l);
    std::vector<double> selected;
    selected.reserve(static_cast<std::size_t>(n));
    for (int v : l) selected.push_back(levels[static_cast<std::size_t>(v)]);
    std::sort(selected.begin(), selected.end(), std::greater<double>());
    for (int j = 0; j < n; ++j) {
        if (selected[static_cast<std::size_t>(j)] > levels[static_cast<std::size_t>(j / c)]) {
            return false;
        }
    }
    return true;
}

double xi_eta_construct(const std::vector<DiscreteDistribution>& fs, const NonnegSequence& x) {
    int n = static_cast<int>(fs.size());
    if (n < 1) throw argument_error("xi_eta_construct needs a nonempty family");
    if (static_cast<int>(x.size()) < n + 1) {
        throw argument_error("xi_eta_construct needs n+1 levels");
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (x[i] > x[i - 1] * (1.0 + kTauVal)) {
            throw argument_error("xi_eta_construct needs non-increasing levels");
        }
    }
    // The rounded variables take the band's lower level: xi_k = x_{l+1} with
    // the band-mass row as its law. The position coupling keeps columns
    // summing to 1 even on tied levels, which is what the 1/10 bound needs.
    LevelMatrix M = build_level_matrix(fs);
    for (int l = 0; l <= n; ++l) {
        if (!values_close(M.levels[static_cast<std::size_t>(l)], x[static_cast<std::size_t>(l)])) {
            throw argument_error("xi_eta_construct levels must match mu(l, disjoint sum)");
        }
    }
    int m = (n + 3) / 4;
    std::vector<double> thresholds;
    for (int k = 1; k <= m; ++k) {
        thresholds.push_back(x[static_cast<std::size_t>(4 * k - 3)]);
    }
    // Capped counts of {xi >= threshold_k}; the event needs the k-th count
    // (1-based) to reach k. States are mixed-radix digits.
    std::vector<int> radix(static_cast<std::size_t>(m));
    int states = 1;
    for (int k = 0; k < m; ++k) {
        radix[static_cast<std::size_t>(k)] = k + 2; // counts 0..k+1
        states *= k + 2;
    }
    std::vector<double> prob(static_cast<std::size_t>(states), 0.0);
    prob[0] = 1.0;
    std::vector<double> next(static_cast<std::size_t>(states), 0.0);
    for (int k_var = 0; k_var < n; ++k_var) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int l = 0; l < n; ++l) {
            double mass = M.P[static_cast<std::size_t>(k_var)][static_cast<std::size_t>(l)];
            if (mass <= 0.0) continue;
            double xi = x[static_cast<std::size_t>(l + 1)];
            for (int s = 0; s < states; ++s) {
                if (prob[static_cast<std::size_t>(s)] == 0.0) continue;
                int digits = s;
                int t = 0, base = 1;
                for (int k = 0; k < m; ++k) {
                    int r = radix[static_cast<std::size_t>(k)];
                    int c = digits % r;
                    digits /= r;
                    if (xi >= thresholds[static_cast<std::size_t>(k)] && c < r - 1) ++c;
                    t += c * base;
                    base *= r;
                }
                next[static_cast<std::size_t>(t)] += prob[static_cast<std::size_t>(s)] * mass;
            }
        }
        std::swap(prob, next);
    }
    // Sum the states with every count saturated.
    double event = 0.0;
    for (int s = 0; s < states; ++s) {
        int digits = s;
        bool full = true;
        for (int k = 0; k < m; ++k) {
            int r = radix[static_cast<std::size_t>(k)];
            if (digits % r != r - 1) full = false;
            digits /= r;
        }
        if (full) event += prob[static_cast<std::size_t>(s)];
    }
    return event;
}

LevelMatrix make_uniform_matrix(int n) {
    if (n < 1) throw argument_error("make_uniform_matrix needs n >= 1");
    LevelMatrix M;
    M.n = n;
    M.P.assign(static_cast<std::size_t>(n),
               std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
    std::vector<double> levels;
    for (int l = 0; l <= n; ++l) levels.push_back(static_cast<double>(n - l));
    M.levels = NonnegSequence(std::move(levels));
    return M;
}

LevelMatrix make_permutation_matrix(const std::vector<int>& perm) {
    int n = static_cast<int>(perm.size());
    if (n < 1) throw argument_error("make_permutation_matrix needs a nonempty permutation");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : perm) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
            throw argument_error("make_permutation_matrix needs a permutation of {0..n-1}");
        }
        seen[static_cast<std::size_t>(v)] = true;
    }
    LevelMatrix M;
    M.n = n;
    M.P.assign(static_cast<std::size_t>(n),
               std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int k = 0; k < n; ++k) {
        M.P[static_cast<std::size_t>(k)][static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = 1.0;
    }
    std::vector<double> levels;
    for (int l = 0; l <= n; ++l) levels.push_back(static_cast<double>(n - l));
    M.levels = NonnegSequence(std::move(levels));
    return M;
}

LevelMatrix make_random_doubly_stochastic(int n, RngStream& rng, int terms) {
    if (n < 1 || terms < 1) throw argument_error("make_random_doubly_stochastic needs n, terms >= 1");
    LevelMatrix M;
    M.n = n;
    M.P.assign(static_cast<std::size_t>(n),
               std::vector<double>(static_cast<std::size_t>(n), 0.0));
    // Convex combination of random permutation matrices.
    std::vector<double> weights;
    double total = 0.0;
    for (int t = 0; t < terms; ++t) {
        weights.push_back(0.05 + rng.next_unit());
        total += weights.back();
    }
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int t = 0; t < terms; ++t) {
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i) {
            int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
        for (int k = 0; k < n; ++k) {
            M.P[static_cast<std::size_t>(k)][static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] +=
                weights[static_cast<std::size_t>(t)] / total;
        }
    }
    std::vector<double> levels;
    for (int l = 0; l <= n; ++l) levels.push_back(static_cast<double>(n - l));
    M.levels = NonnegSequence(std::move(levels));
    return M;
}

} // namespace rearrkit
