#include "rearrkit/measure.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace rearrkit {

namespace {

void require_finite_nonneg(double x, const char* what) {
    if (!std::isfinite(x) || x < 0.0) {
        throw argument_error(std::string(what) + " must be finite and nonnegative");
    }
}

// Sort descending by value and merge values within kTauVal.
std::vector<Atom> normalize_atoms(std::vector<Atom> atoms) {
    for (const Atom& a : atoms) {
        require_finite_nonneg(a.value, "atom value");
        if (!std::isfinite(a.mass) || a.mass < 0.0) {
            throw argument_error("atom mass must be finite and nonnegative");
        }
    }
    std::erase_if(atoms, [](const Atom& a) { return a.mass == 0.0; });
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& a, const Atom& b) { return a.value > b.value; });
    std::vector<Atom> merged;
    merged.reserve(atoms.size());
    for (const Atom& a : atoms) {
        if (!merged.empty() && values_close(merged.back().value, a.value)) {
            merged.back().mass += a.mass;
        } else {
            merged.push_back(a);
        }
    }
    return merged;
}

} // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms, Ambient ambient)
    : atoms_(normalize_atoms(std::move(atoms))), total_mass_(0.0), ambient_(ambient) {
    for (const Atom& a : atoms_) total_mass_ += a.mass;
    if (ambient_ == Ambient::UnitInterval && total_mass_ > 1.0 + kTauMass) {
        throw argument_error("UnitInterval distribution has total mass > 1");
    }
}

double DiscreteDistribution::support_mass() const {
    double m = 0.0;
    for (const Atom& a : atoms_) {
        if (a.value > 0.0) m += a.mass;
    }
    return m;
}

DiscreteDistribution DiscreteDistribution::with_full_support() const {
    if (ambient_ != Ambient::UnitInterval) {
        throw argument_error("with_full_support requires a UnitInterval distribution");
    }
    std::vector<Atom> atoms = atoms_;
    double slack = 1.0 - total_mass_;
    if (slack > 0.0) atoms.push_back({0.0, slack});
    return DiscreteDistribution(std::move(atoms), Ambient::UnitInterval);
}

std::string DiscreteDistribution::to_json() const {
    nlohmann::json j;
    j["ambient"] = ambient_ == Ambient::UnitInterval ? "unit" : "halfline";
    nlohmann::json atoms = nlohmann::json::array();
    for (const Atom& a : atoms_) atoms.push_back({a.value, a.mass});
    j["atoms"] = std::move(atoms);
    return j.dump();
}

DiscreteDistribution DiscreteDistribution::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw argument_error(std::string("distribution is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("ambient") || !j.contains("atoms")) {
        throw argument_error("distribution JSON needs \"ambient\" and \"atoms\"");
    }
    try {
        std::string amb = j["ambient"].get<std::string>();
        Ambient ambient;
        if (amb == "unit") {
            ambient = Ambient::UnitInterval;
        } else if (amb == "halfline") {
            ambient = Ambient::HalfLine;
        } else {
            throw argument_error("ambient must be \"unit\" or \"halfline\"");
        }
        std::vector<Atom> atoms;
        for (const auto& pair : j["atoms"]) {
            if (!pair.is_array() || pair.size() != 2) {
                throw argument_error("each atom must be a [value, mass] pair");
            }
            atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
        }
        return DiscreteDistribution(std::move(atoms), ambient);
    } catch (const nlohmann::json::exception& e) {
        throw argument_error(std::string("malformed distribution JSON: ") + e.what());
    }
}

NonnegSequence::NonnegSequence(std::vector<double> entries) : entries_(std::move(entries)) {
    for (double x : entries_) require_finite_nonneg(x, "sequence entry");
}

double distribution_function(const DiscreteDistribution& d, double s) {
    if (!std::isfinite(s) || s < 0.0) {
        throw argument_error("distribution_function needs s >= 0");
    }
    double m = 0.0;
    for (const Atom& a : d.atoms()) {
        if (a.value > s) {
            m += a.mass;
        } else {
            break; // values are sorted descending
        }
    }
    return m;
}

double rearrangement(const DiscreteDistribution& d, double t) {
    if (!std::isfinite(t) || t <= 0.0) {
        throw argument_error("rearrangement needs t > 0");
    }
    double cum = 0.0;
    for (const Atom& a : d.atoms()) {
        cum += a.mass;
        if (t < cum) return a.value;
    }
    return 0.0;
}

NonnegSequence rearrangement_sequence(const DiscreteDistribution& d, int k_max) {
    if (k_max < 0) throw argument_error("rearrangement_sequence needs k_max >= 0");
    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(k_max) + 1);
    entries.push_back(d.max_value()); // mu(0, f) := ess sup
    for (int k = 1; k <= k_max; ++k) {
        entries.push_back(rearrangement(d, static_cast<double>(k)));
    }
    return NonnegSequence(std::move(entries));
}

DiscreteDistribution disjoint_sum(const std::vector<DiscreteDistribution>& ds) {
    if (ds.empty()) throw argument_error("disjoint_sum needs a nonempty list");
    std::vector<Atom> atoms;
    for (const DiscreteDistribution& d : ds) {
        for (const Atom& a : d.atoms()) {
            if (a.value > 0.0) atoms.push_back(a);
        }
    }
    return DiscreteDistribution(std::move(atoms), Ambient::HalfLine);
}

DiscreteDistribution dilate(const DiscreteDistribution& d, double s) {
    if (!std::isfinite(s) || s <= 0.0) throw argument_error("dilate needs s > 0");
    std::vector<Atom> atoms = d.atoms();
    for (Atom& a : atoms) a.mass *= s;
    Ambient ambient = d.ambient();
    if (ambient == Ambient::UnitInterval && s > 1.0) ambient = Ambient::HalfLine;
    return DiscreteDistribution(std::move(atoms), ambient);
}

NonnegSequence dilate_sequence(const NonnegSequence& a, int m) {
    if (m < 1) throw argument_error("dilate_sequence needs m >= 1");
    std::vector<double> entries;
    entries.reserve(a.size() * static_cast<std::size_t>(m));
    for (double x : a) {
        for (int i = 0; i < m; ++i) entries.push_back(x);
    }
    return NonnegSequence(std::move(entries));
}

DiscreteDistribution power(const DiscreteDistribution& d, double p) {
    if (!std::isfinite(p) || p <= 0.0) throw argument_error("power needs p > 0");
    std::vector<Atom> atoms = d.atoms();
    for (Atom& a : atoms) a.value = std::pow(a.value, p);
    return DiscreteDistribution(std::move(atoms), d.ambient());
}

std::pair<DiscreteDistribution, DiscreteDistribution>
split_at_level(const DiscreteDistribution& d, double c) {
    if (!std::isfinite(c) || c < 0.0) throw argument_error("split_at_level needs c >= 0");
    std::vector<Atom> head, tail;
    for (const Atom& a : d.atoms()) {
        (a.value > c ? head : tail).push_back(a);
    }
    return {DiscreteDistribution(std::move(head), d.ambient()),
            DiscreteDistribution(std::move(tail), d.ambient())};
}

namespace {

void require_unit_inputs(const std::vector<DiscreteDistribution>& ds, const char* op) {
    if (ds.empty()) throw argument_error(std::string(op) + " needs a nonempty list");
    for (const DiscreteDistribution& d : ds) {
        if (d.ambient() != Ambient::UnitInterval) {
            throw argument_error(std::string(op) + " needs UnitInterval inputs");
        }
    }
}

void require_product_within_cap(const std::vector<DiscreteDistribution>& ds, const char* op) {
    double product = 1.0;
    for (const DiscreteDistribution& d : ds) {
        product *= static_cast<double>(d.with_full_support().size());
        if (product > kProductCap) {
            throw capacity_error(std::string(op) +
                                 ": product atom count exceeds the exact-enumeration cap; use the MC path");
        }
    }
}

} // namespace

DiscreteDistribution sum_of_independent(const std::vector<DiscreteDistribution>& ds) {
    require_unit_inputs(ds, "sum_of_independent");
    require_product_within_cap(ds, "sum_of_independent");
    DiscreteDistribution cur({{0.0, 1.0}}, Ambient::UnitInterval);
    for (const DiscreteDistribution& d : ds) {
        DiscreteDistribution full = d.with_full_support();
        if (static_cast<double>(cur.size()) * static_cast<double>(full.size()) > kProductCap) {
            throw capacity_error("sum_of_independent: convolution exceeds the enumeration cap");
        }
        std::vector<Atom> next;
        next.reserve(cur.size() * full.size());
        for (const Atom& a : cur.atoms()) {
            for (const Atom& b : full.atoms()) {
                next.push_back({a.value + b.value, a.mass * b.mass});
            }
        }
        cur = DiscreteDistribution(std::move(next), Ambient::UnitInterval);
    }
    return cur;
}

DiscreteDistribution max_of_independent(const std::vector<DiscreteDistribution>& ds) {
    require_unit_inputs(ds, "max_of_independent");
    std::vector<double> candidates{0.0};
    for (const DiscreteDistribution& d : ds) {
        for (const Atom& a : d.atoms()) candidates.push_back(a.value);
    }
    std::sort(candidates.begin(), candidates.end(), std::greater<double>());
    candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                 [](double a, double b) { return values_close(a, b); }),
                     candidates.end());
    // P(max <= v) = product of marginal CDFs at v.
    auto joint_cdf = [&ds](double v) {
        double g = 1.0;
        for (const DiscreteDistribution& d : ds) {
            g *= 1.0 - distribution_function(d, v);
        }
        return g;
    };
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        double here = joint_cdf(candidates[i]);
        double below = (i + 1 < candidates.size()) ? joint_cdf(candidates[i + 1]) : 0.0;
        double mass = here - below;
        if (mass > 0.0) atoms.push_back({candidates[i], mass});
    }
    return DiscreteDistribution(std::move(atoms), Ambient::UnitInterval);
}

bool same_law(const DiscreteDistribution& a, const DiscreteDistribution& b, double mass_tol) {
    // Compare the strictly positive parts; zero atoms are representation detail.
    std::size_t i = 0, j = 0;
    const auto& xa = a.atoms();
    const auto& xb = b.atoms();
    while (i < xa.size() || j < xb.size()) {
        while (i < xa.size() && xa[i].value <= 0.0) ++i;
        while (j < xb.size() && xb[j].value <= 0.0) ++j;
        if (i >= xa.size() && j >= xb.size()) break;
        if (i >= xa.size() || j >= xb.size()) return false;
        if (!values_close(xa[i].value, xb[j].value)) return false;
        if (std::fabs(xa[i].mass - xb[j].mass) > mass_tol) return false;
        ++i;
        ++j;
    }
    return true;
}

bool rearrangement_dominated(const DiscreteDistribution& g,
                             const DiscreteDistribution& h, double c) {
    if (!std::isfinite(c) || c <= 0.0) throw argument_error("rearrangement_dominated needs c > 0");
    if (g.max_value() > c * h.max_value() * (1.0 + kTauVal)) return false;
    // Breakpoints of t -> mu(t, g) and t -> mu(t/c, h); the step on each side
    // of a candidate is covered by also probing one ulp to the right.
    std::vector<double> candidates;
    double cum = 0.0;
    for (const Atom& a : g.atoms()) {
        cum += a.mass;
        candidates.push_back(cum);
    }
    cum = 0.0;
    for (const Atom& a : h.atoms()) {
        cum += a.mass;
        candidates.push_back(c * cum);
    }
    std::sort(candidates.begin(), candidates.end());
    for (double t0 : candidates) {
        for (double t : {t0, t0 * (1.0 + 4e-16)}) {
            if (t <= 0.0) continue;
            double lhs = rearrangement(g, t);
            double rhs = c * rearrangement(h, t / c);
            if (lhs > rhs * (1.0 + kTauVal)) return false;
        }
    }
    return true;
}

double mean_of(const DiscreteDistribution& d) {
    double m = 0.0;
    for (const Atom& a : d.atoms()) m += a.mass * a.value;
    return m;
}

DiscreteDistribution restrict_head(const DiscreteDistribution& d) {
    std::vector<Atom> atoms;
    double cum = 0.0;
    for (const Atom& a : d.atoms()) {
        if (cum >= 1.0) break;
        double piece = std::fmin(a.mass, 1.0 - cum);
        atoms.push_back({a.value, piece});
        cum += piece;
    }
    return DiscreteDistribution(std::move(atoms), Ambient::UnitInterval);
}

DiscreteDistribution as_unit_interval(const DiscreteDistribution& d) {
    if (d.total_mass() > 1.0 + kTauMass) {
        throw argument_error("as_unit_interval needs total mass <= 1");
    }
    return DiscreteDistribution(d.atoms(), Ambient::UnitInterval);
}

} // namespace rearrkit
