#include "rearrkit/kruglov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rearrkit {

namespace {

// Mixture weights 1/(e*n!) for n = 0..N.
std::vector<double> mixture_weights(int N) {
    std::vector<double> w(static_cast<std::size_t>(N) + 1);
    w[0] = std::exp(-1.0);
    for (int n = 1; n <= N; ++n) w[n] = w[n - 1] / n;
    return w;
}

// Sum of weights beyond N, summed forward so nothing cancels.
double tail_beyond(int N) {
    double w = std::exp(-1.0);
    for (int n = 1; n <= N; ++n) w /= n;
    double tail = 0.0;
    for (int n = N + 1; n <= N + 64; ++n) {
        w /= n;
        tail += w;
    }
    return tail;
}

DiscreteDistribution convolve_unit(const DiscreteDistribution& a,
                                   const DiscreteDistribution& b) {
    if (static_cast<double>(a.size()) * static_cast<double>(b.size()) > kProductCap) {
        throw capacity_error("kruglov convolution exceeds the enumeration cap");
    }
    std::vector<Atom> out;
    out.reserve(a.size() * b.size());
    for (const Atom& x : a.atoms()) {
        for (const Atom& y : b.atoms()) {
            out.push_back({x.value + y.value, x.mass * y.mass});
        }
    }
    return DiscreteDistribution(std::move(out), Ambient::UnitInterval);
}

} // namespace

KruglovLaw kruglov_distribution(const DiscreteDistribution& f, int N) {
    if (f.ambient() != Ambient::UnitInterval) {
        throw argument_error("kruglov_distribution needs a UnitInterval base");
    }
    if (N < 1) throw argument_error("kruglov_distribution needs N >= 1");
    std::vector<double> w = mixture_weights(N);
    DiscreteDistribution full = f.with_full_support();
    DiscreteDistribution conv({{0.0, 1.0}}, Ambient::UnitInterval);
    std::vector<Atom> mix;
    mix.push_back({0.0, w[0]});
    for (int n = 1; n <= N; ++n) {
        conv = convolve_unit(conv, full);
        for (const Atom& a : conv.atoms()) {
            mix.push_back({a.value, w[n] * a.mass});
        }
    }
    KruglovLaw out;
    out.base = f;
    out.truncation = N;
    out.law = DiscreteDistribution(std::move(mix), Ambient::UnitInterval);
    out.tail_mass_bound = tail_beyond(N);
    return out;
}

double kruglov_sample(const DiscreteDistribution& f, RngStream& rng) {
    if (f.ambient() != Ambient::UnitInterval) {
        throw argument_error("kruglov_sample needs a UnitInterval base");
    }
    double u = rng.next_unit();
    double w = std::exp(-1.0);
    double cum = w;
    int n = 0;
    while (u >= cum && n < 500) {
        ++n;
        w /= n;
        cum += w;
    }
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        double v = rng.next_unit();
        sum += rearrangement(f, std::fmax(v, 0x1.0p-120));
    }
    return sum;
}

PsiTable psi_table(int N, int knots) {
    if (N < 1 || knots < 1) throw argument_error("psi_table needs N >= 1 and knots >= 1");
    std::vector<double> w = mixture_weights(N);
    // b[k] = P(K >= k); the rearrangement of K chi_(0,1) equals k on
    // [b[k+1], b[k]), so psi is linear with slope k there.
    std::vector<double> b(static_cast<std::size_t>(N) + 2, 0.0);
    for (int k = N; k >= 1; --k) b[k] = b[k + 1] + w[k];
    std::vector<std::pair<double, double>> pts;
    double psi_val = static_cast<double>(N) * b[N];
    pts.emplace_back(b[N], psi_val);
    for (int k = N - 1; k >= 1; --k) {
        psi_val += static_cast<double>(k) * (b[k] - b[k + 1]);
        pts.emplace_back(b[k], psi_val);
    }
    pts.emplace_back(1.0, psi_val); // mu vanishes past b[1], so psi is flat to 1
    // Exact subdivision (midpoints of the longest segments) up to the
    // requested knot count.
    while (static_cast<int>(pts.size()) < knots) {
        std::size_t widest = 1;
        for (std::size_t i = 2; i < pts.size(); ++i) {
            if (pts[i].first - pts[i - 1].first > pts[widest].first - pts[widest - 1].first) {
                widest = i;
            }
        }
        double tm = 0.5 * (pts[widest - 1].first + pts[widest].first);
        double vm = 0.5 * (pts[widest - 1].second + pts[widest].second);
        pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(widest), {tm, vm});
    }
    return PsiTable(std::move(pts));
}

std::vector<MomentProfileRow> poisson_moment_profile(const std::vector<double>& p_grid) {
    std::vector<MomentProfileRow> rows;
    for (double p : p_grid) {
        if (!std::isfinite(p) || p < 1.0 || p > 50.0) {
            throw argument_error("poisson_moment_profile needs p in [1, 50]");
        }
        // log-sum-exp over n >= 1 of p*log n - 1 - log(n!).
        double peak = -std::numeric_limits<double>::infinity();
        std::vector<double> logs;
        for (int n = 1; n <= 400; ++n) {
            double lg = p * std::log(static_cast<double>(n)) - 1.0 -
                        std::lgamma(static_cast<double>(n) + 1.0);
            logs.push_back(lg);
            peak = std::fmax(peak, lg);
        }
        double sum = 0.0;
        for (double lg : logs) sum += std::exp(lg - peak);
        double norm = std::exp((peak + std::log(sum)) / p);
        rows.push_back({p, norm, p / std::log(std::exp(1.0) * p)});
    }
    return rows;
}

KruglovModularBound kruglov_modular_bound_check(const OrliczFunction& psi,
                                                const DiscreteDistribution& f) {
    if (f.ambient() != Ambient::UnitInterval) {
        throw argument_error("kruglov_modular_bound_check needs a UnitInterval input");
    }
    double c = 2.0 * std::log2(psi.delta2_constant());
    // sum_m m^{c+1}/(e*m!), summed in log space until it converges.
    double constant = 0.0;
    for (int m = 1; m <= 400; ++m) {
        constant += std::exp((c + 1.0) * std::log(static_cast<double>(m)) - 1.0 -
                             std::lgamma(static_cast<double>(m) + 1.0));
    }
    KruglovModularBound out;
    out.lhs = orlicz_modular(psi, kruglov_distribution(f).law);
    out.rhs_constant = constant;
    out.rhs = constant * orlicz_modular(psi, f);
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-9) + 1e-300;
    return out;
}

bool sum_kruglov_domination_check(const std::vector<DiscreteDistribution>& fs) {
    if (fs.empty()) throw argument_error("sum_kruglov_domination_check needs inputs");
    double support = 0.0;
    for (const DiscreteDistribution& f : fs) {
        if (f.ambient() != Ambient::UnitInterval) {
            throw argument_error("sum_kruglov_domination_check needs UnitInterval inputs");
        }
        support += f.support_mass();
    }
    if (support > 1.0 + kTauMass) {
        throw argument_error("sum_kruglov_domination_check needs total support mass <= 1");
    }
    DiscreteDistribution total = sum_of_independent(fs);
    DiscreteDistribution merged = as_unit_interval(disjoint_sum(fs));
    KruglovLaw k = kruglov_distribution(merged);
    return rearrangement_dominated(total, k.law, 3.0);
}

} // namespace rearrkit
