#include "rearrkit/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace rearrkit {

namespace {

std::string fmt_num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

// Sampled-grid certification shared by the Orlicz factories: Phi(0) = 0,
// strictly increasing, and Phi(2t) <= C * Phi(t) within kTauMass.
void certify_orlicz(const OrliczFunction& phi, double c) {
    if (phi(0.0) != 0.0) throw argument_error("Orlicz function must vanish at 0");
    double prev_t = 0.0, prev_v = 0.0;
    for (int i = 0; i <= 54; ++i) {
        double t = 1e-6 * std::pow(10.0, i / 6.0);
        double v = phi(t);
        if (!std::isfinite(v) || v <= prev_v) {
            throw argument_error("Orlicz function must be strictly increasing (fails near t=" +
                                 fmt_num(prev_t) + ")");
        }
        double doubled = phi(2.0 * t);
        if (doubled > c * v * (1.0 + kTauMass)) {
            throw argument_error("doubling constant certificate fails at t=" + fmt_num(t));
        }
        prev_t = t;
        prev_v = v;
    }
}

} // namespace

OrliczFunction OrliczFunction::power(double p) {
    if (!std::isfinite(p) || p <= 0.0) throw argument_error("power Orlicz needs p > 0");
    OrliczFunction phi;
    phi.kind_ = Kind::Power;
    phi.p_ = p;
    phi.delta2_constant_ = std::pow(2.0, p);
    certify_orlicz(phi, phi.delta2_constant_);
    return phi;
}

OrliczFunction OrliczFunction::power_log(double p, double a) {
    if (!std::isfinite(p) || p <= 0.0) throw argument_error("power_log Orlicz needs p > 0");
    if (!std::isfinite(a) || a < 0.0) throw argument_error("power_log Orlicz needs a >= 0");
    OrliczFunction phi;
    phi.kind_ = Kind::PowerLog;
    phi.p_ = p;
    phi.a_ = a;
    // log(e + 2t) <= (1 + log 2) log(e + t) for t >= 0.
    phi.delta2_constant_ = std::pow(2.0, p) * std::pow(1.0 + std::log(2.0), a);
    certify_orlicz(phi, phi.delta2_constant_);
    return phi;
}

OrliczFunction OrliczFunction::tabulated(std::vector<std::pair<double, double>> knots) {
    if (knots.empty()) throw argument_error("tabulated Orlicz needs at least one knot");
    double prev_t = 0.0, prev_v = 0.0;
    for (const auto& [t, v] : knots) {
        if (!std::isfinite(t) || !std::isfinite(v) || t <= prev_t || v <= prev_v) {
            throw argument_error("tabulated Orlicz knots must be strictly increasing from (0,0)");
        }
        prev_t = t;
        prev_v = v;
    }
    OrliczFunction phi;
    phi.kind_ = Kind::Tabulated;
    phi.knots_ = std::move(knots);
    // Certify the doubling constant on knots, half-knots, and a log grid.
    std::vector<double> samples;
    for (const auto& [t, v] : phi.knots_) {
        samples.push_back(t);
        samples.push_back(t / 2.0);
    }
    double t_last = phi.knots_.back().first;
    for (int i = 0; i <= 40; ++i) {
        samples.push_back(t_last * 2.0 * std::pow(10.0, -6.0 + 6.0 * i / 40.0));
    }
    double c = 2.0; // asymptotic ratio of the linear extension
    for (double t : samples) {
        double v = phi(t);
        if (v > 0.0) c = std::fmax(c, phi(2.0 * t) / v);
    }
    phi.delta2_constant_ = c * (1.0 + 1e-9);
    certify_orlicz(phi, phi.delta2_constant_);
    return phi;
}

double OrliczFunction::operator()(double t) const {
    if (t <= 0.0) return 0.0;
    switch (kind_) {
    case Kind::Power:
        return std::pow(t, p_);
    case Kind::PowerLog:
        return std::pow(t, p_) * std::pow(std::log(std::exp(1.0) + t), a_);
    case Kind::Tabulated: {
        if (t <= knots_.front().first) {
            return knots_.front().second * t / knots_.front().first;
        }
        for (std::size_t i = 1; i < knots_.size(); ++i) {
            if (t <= knots_[i].first) {
                const auto& [t0, v0] = knots_[i - 1];
                const auto& [t1, v1] = knots_[i];
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
            }
        }
        const auto& [t0, v0] = knots_.size() > 1 ? knots_[knots_.size() - 2]
                                                 : std::pair<double, double>{0.0, 0.0};
        const auto& [t1, v1] = knots_.back();
        return v1 + (v1 - v0) / (t1 - t0) * (t - t1);
    }
    }
    return 0.0;
}

std::string OrliczFunction::label() const {
    switch (kind_) {
    case Kind::Power:
        return "power(" + fmt_num(p_) + ")";
    case Kind::PowerLog:
        return "power_log(" + fmt_num(p_) + ";" + fmt_num(a_) + ")";
    case Kind::Tabulated:
        return "tabulated(k=" + std::to_string(knots_.size()) + ")";
    }
    return "";
}

SeqSpaceSpec SeqSpaceSpec::ellq(double q) {
    if (!std::isfinite(q) || q <= 0.0) throw argument_error("ellq needs q > 0");
    SeqSpaceSpec e;
    e.kind_ = Kind::EllQ;
    e.q_ = q;
    return e;
}

SeqSpaceSpec SeqSpaceSpec::ellinfty() {
    SeqSpaceSpec e;
    e.kind_ = Kind::EllInfty;
    return e;
}

SeqSpaceSpec SeqSpaceSpec::weak_ell1() {
    SeqSpaceSpec e;
    e.kind_ = Kind::WeakEll1;
    return e;
}

double SeqSpaceSpec::concavity_modulus() const {
    switch (kind_) {
    case Kind::EllQ:
        return std::fmax(1.0, std::pow(2.0, 1.0 / q_ - 1.0));
    case Kind::EllInfty:
        return 1.0;
    case Kind::WeakEll1:
        return 2.0;
    }
    return 1.0;
}

std::string SeqSpaceSpec::label() const {
    switch (kind_) {
    case Kind::EllQ:
        return "ellq(" + fmt_num(q_) + ")";
    case Kind::EllInfty:
        return "ellinfty";
    case Kind::WeakEll1:
        return "weak_ell1";
    }
    return "";
}

PsiTable::PsiTable(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
    if (knots_.empty()) throw argument_error("PsiTable needs at least one knot");
    if (knots_.front().second <= 0.0) throw argument_error("PsiTable needs psi > 0 at the first knot");
    double prev_t = 0.0, prev_v = 0.0;
    double prev_slope = std::numeric_limits<double>::infinity();
    for (const auto& [t, v] : knots_) {
        if (!std::isfinite(t) || !std::isfinite(v) || t <= prev_t || v < prev_v) {
            throw argument_error("PsiTable knots must increase in t and be non-decreasing in psi");
        }
        double slope = (v - prev_v) / (t - prev_t);
        if (slope > prev_slope * (1.0 + 1e-9) + 1e-300) {
            throw argument_error("PsiTable must be concave on knots");
        }
        prev_slope = slope;
        prev_t = t;
        prev_v = v;
    }
}

double PsiTable::operator()(double t) const {
    if (t <= 0.0) return 0.0;
    if (t <= knots_.front().first) {
        return knots_.front().second * t / knots_.front().first;
    }
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (t <= knots_[i].first) {
            const auto& [t0, v0] = knots_[i - 1];
            const auto& [t1, v1] = knots_[i];
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        }
    }
    const auto& [t0, v0] = knots_.size() > 1 ? knots_[knots_.size() - 2]
                                             : std::pair<double, double>{0.0, 0.0};
    const auto& [t1, v1] = knots_.back();
    return v1 + (v1 - v0) / (t1 - t0) * (t - t1);
}

SpaceSpec SpaceSpec::lp(double p) {
    if (!std::isfinite(p) || p <= 0.0) throw argument_error("Lp needs p > 0");
    SpaceSpec x;
    x.kind_ = Kind::Lp;
    x.p_ = p;
    return x;
}

SpaceSpec SpaceSpec::lp_plus_lq(double p, double q) {
    if (!std::isfinite(p) || !std::isfinite(q) || p <= 0.0 || q <= 0.0 || p > q) {
        throw argument_error("LpPlusLq needs 0 < p <= q");
    }
    SpaceSpec x;
    x.kind_ = Kind::LpPlusLq;
    x.p_ = p;
    x.q_ = q;
    return x;
}

SpaceSpec SpaceSpec::lp_cap_lq(double p, double q) {
    if (!std::isfinite(p) || !std::isfinite(q) || p <= 0.0 || q <= 0.0 || q > p) {
        throw argument_error("LpCapLq needs 0 < q <= p");
    }
    SpaceSpec x;
    x.kind_ = Kind::LpCapLq;
    x.p_ = p;
    x.q_ = q;
    return x;
}

SpaceSpec SpaceSpec::orlicz_lux(OrliczFunction phi) {
    SpaceSpec x;
    x.kind_ = Kind::OrliczLux;
    x.phi_ = std::move(phi);
    return x;
}

SpaceSpec SpaceSpec::marcinkiewicz(PsiTable psi) {
    SpaceSpec x;
    x.kind_ = Kind::Marcinkiewicz;
    x.psi_ = std::move(psi);
    return x;
}

std::string SpaceSpec::label() const {
    switch (kind_) {
    case Kind::Lp:
        return "Lp(" + fmt_num(p_) + ")";
    case Kind::LpPlusLq:
        return "LpPlusLq(" + fmt_num(p_) + ";" + fmt_num(q_) + ")";
    case Kind::LpCapLq:
        return "LpCapLq(" + fmt_num(p_) + ";" + fmt_num(q_) + ")";
    case Kind::OrliczLux:
        return "OrliczLux(" + phi_->label() + ")";
    case Kind::Marcinkiewicz:
        return "Mpsi(k=" + std::to_string(psi_->knots().size()) + ")";
    }
    return "";
}

double sequence_quasinorm(const SeqSpaceSpec& E, const std::vector<double>& a) {
    switch (E.kind()) {
    case SeqSpaceSpec::Kind::EllQ: {
        double m = 0.0;
        for (double x : a) m = std::fmax(m, x);
        if (m == 0.0) return 0.0;
        double sum = 0.0;
        for (double x : a) {
            if (x > 0.0) sum += std::pow(x / m, E.q());
        }
        return m * std::pow(sum, 1.0 / E.q());
    }
    case SeqSpaceSpec::Kind::EllInfty: {
        double m = 0.0;
        for (double x : a) m = std::fmax(m, x);
        return m;
    }
    case SeqSpaceSpec::Kind::WeakEll1: {
        std::vector<double> sorted(a);
        std::sort(sorted.begin(), sorted.end(), std::greater<double>());
        double best = 0.0;
        for (std::size_t k = 0; k < sorted.size(); ++k) {
            best = std::fmax(best, static_cast<double>(k + 1) * sorted[k]);
        }
        return best;
    }
    }
    return 0.0;
}

double sequence_quasinorm(const SeqSpaceSpec& E, const NonnegSequence& a) {
    return sequence_quasinorm(E, a.entries());
}

double lp_norm(const DiscreteDistribution& d, double p) {
    if (!std::isfinite(p) || p <= 0.0) throw argument_error("lp_norm needs p > 0");
    double m = d.max_value();
    if (m == 0.0) return 0.0;
    double sum = 0.0;
    for (const Atom& a : d.atoms()) {
        if (a.value > 0.0) sum += a.mass * std::pow(a.value / m, p);
    }
    return m * std::pow(sum, 1.0 / p);
}

double orlicz_modular(const OrliczFunction& phi, const DiscreteDistribution& d) {
    double sum = 0.0;
    for (const Atom& a : d.atoms()) sum += a.mass * phi(a.value);
    return sum;
}

namespace {

// Luxemburg norm: inf{lambda > 0 : sum mass * Phi(value/lambda) <= 1},
// bracketed by doubling and bisected. Zero distributions return 0.
double luxemburg_norm(const OrliczFunction& phi, const DiscreteDistribution& d) {
    if (d.max_value() == 0.0) return 0.0;
    auto modular_at = [&](double lambda) {
        double sum = 0.0;
        for (const Atom& a : d.atoms()) sum += a.mass * phi(a.value / lambda);
        return sum;
    };
    double hi = 1.0;
    int guard = 0;
    while (modular_at(hi) > 1.0 && guard++ < 300) hi *= 2.0;
    double lo = hi / 2.0;
    while (modular_at(lo) <= 1.0 && lo > 1e-300 && guard++ < 600) {
        hi = lo;
        lo /= 2.0;
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (modular_at(mid) <= 1.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

// int_0^t mu(s, d) ds, piecewise linear in t.
double head_integral(const DiscreteDistribution& d, double t) {
    double cum = 0.0, sum = 0.0;
    for (const Atom& a : d.atoms()) {
        if (cum + a.mass >= t) {
            sum += a.value * (t - cum);
            return sum;
        }
        sum += a.value * a.mass;
        cum += a.mass;
    }
    return sum;
}

double marcinkiewicz_norm(const PsiTable& psi, const DiscreteDistribution& d) {
    double t_end = psi.domain_end();
    // Both int_0^t mu and psi are piecewise linear, so the ratio is extremal
    // at their joint breakpoints.
    std::vector<double> candidates;
    for (const auto& [t, v] : psi.knots()) {
        if (t > 0.0 && t <= t_end) candidates.push_back(t);
    }
    double cum = 0.0;
    for (const Atom& a : d.atoms()) {
        cum += a.mass;
        if (cum > 0.0 && cum < t_end) candidates.push_back(cum);
    }
    candidates.push_back(t_end);
    double best = 0.0;
    for (double t : candidates) {
        double denom = psi(t);
        if (denom > 0.0) best = std::fmax(best, head_integral(d, t) / denom);
    }
    return best;
}

} // namespace

double function_quasinorm(const SpaceSpec& X, const DiscreteDistribution& d) {
    switch (X.kind()) {
    case SpaceSpec::Kind::Lp:
        return lp_norm(d, X.p());
    case SpaceSpec::Kind::LpPlusLq: {
        // Head + integer-tail proxy for the sum norm.
        double head = lp_norm(restrict_head(d), X.p());
        int k_max = static_cast<int>(std::ceil(d.total_mass())) + 1;
        NonnegSequence mu = rearrangement_sequence(d, k_max);
        std::vector<double> tail(mu.entries().begin() + 1, mu.entries().end());
        return head + sequence_quasinorm(SeqSpaceSpec::ellq(X.q()), tail);
    }
    case SpaceSpec::Kind::LpCapLq:
        return std::fmax(lp_norm(d, X.p()), lp_norm(d, X.q()));
    case SpaceSpec::Kind::OrliczLux:
        return luxemburg_norm(X.phi(), d);
    case SpaceSpec::Kind::Marcinkiewicz:
        return marcinkiewicz_norm(X.psi(), d);
    }
    return 0.0;
}

double split_norm_rhs(const SpaceSpec& X, const SeqSpaceSpec& E,
                      const DiscreteDistribution& f, int k_max) {
    if (k_max < static_cast<int>(std::ceil(f.total_mass() - kTauMass))) {
        throw argument_error("split_norm_rhs needs k_max >= ceil(total mass)");
    }
    NonnegSequence mu = rearrangement_sequence(f, k_max);
    std::vector<double> tail(mu.entries().begin() + 1, mu.entries().end());
    return function_quasinorm(X, restrict_head(f)) + sequence_quasinorm(E, tail);
}

double split_modular_rhs(const OrliczFunction& phi, const SeqSpaceSpec& E,
                         const DiscreteDistribution& f, int n) {
    if (n < static_cast<int>(std::ceil(f.total_mass() - kTauMass))) {
        throw argument_error("split_modular_rhs needs n >= ceil(total mass)");
    }
    NonnegSequence mu = rearrangement_sequence(f, n);
    std::vector<double> tail(mu.entries().begin() + 1, mu.entries().end());
    return orlicz_modular(phi, restrict_head(f)) + phi(sequence_quasinorm(E, tail));
}

DiscreteDistribution vector_norm_law(const SeqSpaceSpec& E,
                                     const std::vector<DiscreteDistribution>& fs) {
    if (fs.empty()) throw argument_error("vector_norm_law needs a nonempty list");
    std::vector<std::vector<Atom>> supports;
    double outcomes = 1.0;
    for (const DiscreteDistribution& f : fs) {
        if (f.ambient() != Ambient::UnitInterval) {
            throw argument_error("vector_norm_law needs UnitInterval inputs");
        }
        supports.push_back(f.with_full_support().atoms());
        outcomes *= static_cast<double>(supports.back().size());
        if (outcomes > kProductCap) {
            throw capacity_error("vector_norm_law: product atom count exceeds the cap; use MC");
        }
    }
    std::size_t n = supports.size();
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> values(n, 0.0);
    std::vector<Atom> law;
    auto consolidate = [](std::vector<Atom>& atoms) {
        std::sort(atoms.begin(), atoms.end(),
                  [](const Atom& a, const Atom& b) { return a.value > b.value; });
        std::size_t out = 0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (out > 0 && values_close(atoms[out - 1].value, atoms[i].value)) {
                atoms[out - 1].mass += atoms[i].mass;
            } else {
                atoms[out++] = atoms[i];
            }
        }
        atoms.resize(out);
    };
    while (true) {
        double w = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const Atom& a = supports[k][idx[k]];
            w *= a.mass;
            values[k] = a.value;
        }
        law.push_back({sequence_quasinorm(E, values), w});
        if (law.size() >= (1u << 22)) consolidate(law);
        std::size_t k = 0;
        while (k < n && ++idx[k] == supports[k].size()) {
            idx[k] = 0;
            ++k;
        }
        if (k == n) break;
    }
    return DiscreteDistribution(std::move(law), Ambient::UnitInterval);
}

double mixed_norm_exact(const SpaceSpec& X, const SeqSpaceSpec& E,
                        const std::vector<DiscreteDistribution>& fs) {
    return function_quasinorm(X, vector_norm_law(E, fs));
}

double mixed_modular_exact(const OrliczFunction& phi, const SeqSpaceSpec& E,
                           const std::vector<DiscreteDistribution>& fs) {
    return orlicz_modular(phi, vector_norm_law(E, fs));
}

std::pair<double, double> marcinkiewicz_sup_p_equiv(const DiscreteDistribution& g,
                                                    const PsiTable& psi,
                                                    const std::vector<double>& p_grid) {
    if (p_grid.empty()) throw argument_error("marcinkiewicz_sup_p_equiv needs a p grid");
    double lhs = marcinkiewicz_norm(psi, g);
    double rhs = 0.0;
    for (double p : p_grid) {
        if (p < 1.0) throw argument_error("marcinkiewicz_sup_p_equiv needs p >= 1");
        rhs = std::fmax(rhs, std::log(std::exp(1.0) * p) / p * lp_norm(g, p));
    }
    return {lhs, rhs};
}

namespace {

nlohmann::json parse_text(const std::string& text, const char* what) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw argument_error(std::string(what) + ": malformed JSON");
    return j;
}

std::vector<std::pair<double, double>> knot_list(const nlohmann::json& j, const char* what) {
    std::vector<std::pair<double, double>> knots;
    if (!j.is_array()) throw argument_error(std::string(what) + ": knots must be [[t,y],...]");
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2) {
            throw argument_error(std::string(what) + ": each knot must be a [t, y] pair");
        }
        knots.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return knots;
}

OrliczFunction orlicz_from(const nlohmann::json& j) {
    if (j.is_object() && j.contains("power")) return OrliczFunction::power(j["power"].get<double>());
    if (j.is_object() && j.contains("power_log")) {
        const auto& pa = j["power_log"];
        if (!pa.is_array() || pa.size() != 2) {
            throw argument_error("power_log fragment must be {\"power_log\":[p,a]}");
        }
        return OrliczFunction::power_log(pa[0].get<double>(), pa[1].get<double>());
    }
    if (j.is_object() && j.contains("tabulated")) {
        return OrliczFunction::tabulated(knot_list(j["tabulated"], "tabulated"));
    }
    throw argument_error("unknown Orlicz fragment: " + j.dump());
}

} // namespace

SeqSpaceSpec seq_space_from_json(const std::string& text) {
    nlohmann::json j = parse_text(text, "sequence space");
    if (j.is_string()) {
        if (j == "ellinfty") return SeqSpaceSpec::ellinfty();
        if (j == "weak_ell1") return SeqSpaceSpec::weak_ell1();
        throw argument_error("unknown sequence space: " + j.get<std::string>());
    }
    if (j.is_object() && j.contains("ellq")) return SeqSpaceSpec::ellq(j["ellq"].get<double>());
    throw argument_error("unknown sequence space fragment: " + text);
}

SpaceSpec space_from_json(const std::string& text) {
    nlohmann::json j = parse_text(text, "function space");
    if (j.is_object() && j.contains("Lp")) return SpaceSpec::lp(j["Lp"].get<double>());
    if (j.is_object() && j.contains("LpPlusLq")) {
        const auto& pq = j["LpPlusLq"];
        if (!pq.is_array() || pq.size() != 2) {
            throw argument_error("LpPlusLq fragment must be {\"LpPlusLq\":[p,q]}");
        }
        return SpaceSpec::lp_plus_lq(pq[0].get<double>(), pq[1].get<double>());
    }
    if (j.is_object() && j.contains("LpCapLq")) {
        const auto& pq = j["LpCapLq"];
        if (!pq.is_array() || pq.size() != 2) {
            throw argument_error("LpCapLq fragment must be {\"LpCapLq\":[p,q]}");
        }
        return SpaceSpec::lp_cap_lq(pq[0].get<double>(), pq[1].get<double>());
    }
    if (j.is_object() && j.contains("OrliczLux")) {
        return SpaceSpec::orlicz_lux(orlicz_from(j["OrliczLux"]));
    }
    if (j.is_object() && j.contains("Marcinkiewicz")) {
        const auto& m = j["Marcinkiewicz"];
        if (m.is_object() && m.contains("knots")) {
            return SpaceSpec::marcinkiewicz(PsiTable(knot_list(m["knots"], "Marcinkiewicz")));
        }
        throw argument_error("Marcinkiewicz fragment must carry explicit knots");
    }
    throw argument_error("unknown function space fragment: " + text);
}

OrliczFunction orlicz_from_json(const std::string& text) {
    return orlicz_from(parse_text(text, "Orlicz function"));
}

} // namespace rearrkit
