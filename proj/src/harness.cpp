// ============================================================================
// harness.cpp
//
// Family generation, experiment evaluation, the exact-constant suite, and
// reporting. Determinism: every instance draws from substreams of a root
// stream keyed only by (seed, instance index), so output is bit-identical
// across runs and thread counts.
// ============================================================================
#include "rearrkit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rearrkit/kruglov.hpp"
#include "rearrkit/levels.hpp"

namespace rearrkit {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
}

void validate_family(const FamilySpec& s, bool need_unit_budget) {
    if (!(s.value_min > 0.0) || !(s.value_max >= s.value_min)) {
        throw argument_error("family needs 0 < value_min <= value_max");
    }
    if (s.max_atoms < 1) throw argument_error("family needs max_atoms >= 1");
    if (!(s.support_budget > 0.0)) throw argument_error("family needs support_budget > 0");
    if (need_unit_budget && !s.shared_budget && s.support_budget > 1.0 + kTauMass) {
        throw argument_error("per-variable support_budget must be <= 1");
    }
    if (s.mass_quantum < 0.0 || s.mass_quantum > 1.0) {
        throw argument_error("mass_quantum must lie in [0, 1]");
    }
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.n < 1) throw argument_error("experiment needs n >= 1");
    if (cfg.instances < 1) throw argument_error("experiment needs instances >= 1");
    if (cfg.threads < 1) throw argument_error("experiment needs threads >= 1");
    validate_family(cfg.family, true);
    if (cfg.mode == RunMode::MonteCarlo && cfg.trials < 1000) {
        throw argument_error("Monte Carlo runs need trials >= 1000");
    }
    if (cfg.theorem == TheoremKind::SumIntersect) {
        if (cfg.X.kind() != SpaceSpec::Kind::LpPlusLq &&
            cfg.X.kind() != SpaceSpec::Kind::LpCapLq) {
            throw argument_error("sum_intersect experiments need X = LpPlusLq or LpCapLq");
        }
    }
    if (cfg.theorem == TheoremKind::NormEquiv && cfg.mode == RunMode::MonteCarlo &&
        cfg.X.kind() != SpaceSpec::Kind::Lp) {
        throw argument_error("Monte Carlo norm_equiv runs support X = Lp only");
    }
}

// Monte Carlo estimate of || ||(f_k)||_E ||_p via the p-th moment, with a
// delta-method standard error for the norm itself.
std::pair<double, double> mc_lp_of_vector_norm(const std::vector<DiscreteDistribution>& fs,
                                               const SeqSpaceSpec& E, double p, long trials,
                                               RngStream& rng) {
    double sum = 0.0, sumsq = 0.0;
    for (long t = 0; t < trials; ++t) {
        std::vector<double> v = sample_independent(fs, rng);
        double g = sequence_quasinorm(E, v);
        double x = std::pow(g, p);
        sum += x;
        sumsq += x * x;
    }
    double mean = sum / static_cast<double>(trials);
    double var = sumsq / static_cast<double>(trials) - mean * mean;
    if (var < 0.0) var = 0.0;
    var *= static_cast<double>(trials) / static_cast<double>(trials - 1);
    double se_mean = std::sqrt(var / static_cast<double>(trials));
    if (mean <= 0.0) return {0.0, 0.0};
    double value = std::pow(mean, 1.0 / p);
    double se = se_mean * value / (p * mean);
    return {value, se};
}

// Monte Carlo estimate of the modular int Phi(||(f_k)||_E): a plain mean.
std::pair<double, double> mc_modular_of_vector_norm(const std::vector<DiscreteDistribution>& fs,
                                                    const OrliczFunction& phi,
                                                    const SeqSpaceSpec& E, long trials,
                                                    RngStream& rng) {
    double sum = 0.0, sumsq = 0.0;
    for (long t = 0; t < trials; ++t) {
        std::vector<double> v = sample_independent(fs, rng);
        double x = phi(sequence_quasinorm(E, v));
        sum += x;
        sumsq += x * x;
    }
    double mean = sum / static_cast<double>(trials);
    double var = sumsq / static_cast<double>(trials) - mean * mean;
    if (var < 0.0) var = 0.0;
    var *= static_cast<double>(trials) / static_cast<double>(trials - 1);
    return {mean, std::sqrt(var / static_cast<double>(trials))};
}

RatioRow evaluate_instance(const ExperimentConfig& cfg, long index, const RngStream& root) {
    RngStream fam_rng = root.substream(2 * static_cast<std::uint64_t>(index));
    RngStream mc_rng = root.substream(2 * static_cast<std::uint64_t>(index) + 1);
    std::vector<DiscreteDistribution> fs = draw_family(fam_rng, cfg.family, cfg.n);

    double lhs = 0.0, se = 0.0;
    if (cfg.mode == RunMode::Exact) {
        switch (cfg.theorem) {
            case TheoremKind::NormEquiv:
                lhs = mixed_norm_exact(cfg.X, cfg.E, fs);
                break;
            case TheoremKind::SumIntersect:
                lhs = mixed_norm_exact(SpaceSpec::lp(cfg.X.p()),
                                       SeqSpaceSpec::ellq(cfg.X.q()), fs);
                break;
            case TheoremKind::Modular:
                lhs = mixed_modular_exact(cfg.Phi, cfg.E, fs);
                break;
        }
    } else {
        switch (cfg.theorem) {
            case TheoremKind::NormEquiv: {
                auto est = mc_lp_of_vector_norm(fs, cfg.E, cfg.X.p(), cfg.trials, mc_rng);
                lhs = est.first;
                se = est.second;
                break;
            }
            case TheoremKind::SumIntersect: {
                auto est = mc_lp_of_vector_norm(fs, SeqSpaceSpec::ellq(cfg.X.q()), cfg.X.p(),
                                                cfg.trials, mc_rng);
                lhs = est.first;
                se = est.second;
                break;
            }
            case TheoremKind::Modular: {
                auto est = mc_modular_of_vector_norm(fs, cfg.Phi, cfg.E, cfg.trials, mc_rng);
                lhs = est.first;
                se = est.second;
                break;
            }
        }
    }

    DiscreteDistribution f = disjoint_sum(fs);
    double rhs = 0.0;
    switch (cfg.theorem) {
        case TheoremKind::NormEquiv:
            rhs = split_norm_rhs(cfg.X, cfg.E, f, cfg.n);
            break;
        case TheoremKind::SumIntersect:
            rhs = function_quasinorm(cfg.X, f);
            break;
        case TheoremKind::Modular:
            rhs = split_modular_rhs(cfg.Phi, cfg.E, f, cfg.n);
            break;
    }

    RatioRow row;
    row.trial = index;
    row.lhs = lhs;
    row.rhs = rhs;
    row.stderr_ = se;
    if (rhs > 0.0) {
        row.ratio = lhs / rhs;
    } else if (lhs <= 3.0 * se + 1e-300) {
        row.ratio = 1.0;
        row.degenerate = true;
    } else {
        throw check_failure("instance with rhs == 0 but lhs = " + fmt17(lhs));
    }
    return row;
}

nlohmann::json space_fragment(const SpaceSpec& X) {
    using nlohmann::json;
    switch (X.kind()) {
        case SpaceSpec::Kind::Lp:
            return json{{"Lp", X.p()}};
        case SpaceSpec::Kind::LpPlusLq:
            return json{{"LpPlusLq", {X.p(), X.q()}}};
        case SpaceSpec::Kind::LpCapLq:
            return json{{"LpCapLq", {X.p(), X.q()}}};
        case SpaceSpec::Kind::OrliczLux: {
            const OrliczFunction& phi = X.phi();
            json inner;
            if (phi.kind() == OrliczFunction::Kind::Power) {
                inner = json{{"power", phi.exponent()}};
            } else if (phi.kind() == OrliczFunction::Kind::PowerLog) {
                inner = json{{"power_log", {phi.exponent(), phi.log_exponent()}}};
            } else {
                inner = json{{"tabulated", phi.knots()}};
            }
            return json{{"OrliczLux", inner}};
        }
        case SpaceSpec::Kind::Marcinkiewicz:
            return json{{"Marcinkiewicz", {{"knots", X.psi().knots()}}}};
    }
    throw argument_error("unknown space kind");
}

nlohmann::json seq_fragment(const SeqSpaceSpec& E) {
    using nlohmann::json;
    switch (E.kind()) {
        case SeqSpaceSpec::Kind::EllQ:
            return json{{"ellq", E.q()}};
        case SeqSpaceSpec::Kind::EllInfty:
            return json("ellinfty");
        case SeqSpaceSpec::Kind::WeakEll1:
            return json("weak_ell1");
    }
    throw argument_error("unknown sequence space kind");
}

nlohmann::json orlicz_fragment(const OrliczFunction& phi) {
    using nlohmann::json;
    switch (phi.kind()) {
        case OrliczFunction::Kind::Power:
            return json{{"power", phi.exponent()}};
        case OrliczFunction::Kind::PowerLog:
            return json{{"power_log", {phi.exponent(), phi.log_exponent()}}};
        case OrliczFunction::Kind::Tabulated:
            return json{{"tabulated", phi.knots()}};
    }
    throw argument_error("unknown Orlicz kind");
}

} // namespace

std::string theorem_label(TheoremKind t) {
    switch (t) {
        case TheoremKind::NormEquiv: return "norm_equiv";
        case TheoremKind::SumIntersect: return "sum_intersect";
        case TheoremKind::Modular: return "modular";
    }
    return "?";
}

std::string mode_label(RunMode m) {
    return m == RunMode::Exact ? "exact" : "mc";
}

double RatioReport::min_ratio() const {
    double out = std::numeric_limits<double>::infinity();
    for (const RatioRow& r : rows) out = std::min(out, r.ratio);
    return out;
}

double RatioReport::max_ratio() const {
    double out = 0.0;
    for (const RatioRow& r : rows) out = std::max(out, r.ratio);
    return out;
}

std::vector<DiscreteDistribution> draw_family(RngStream& rng, const FamilySpec& spec, int n) {
    if (n < 1) throw argument_error("draw_family needs n >= 1");
    validate_family(spec, true);

    // Per-variable support budgets.
    std::vector<double> budget(static_cast<std::size_t>(n));
    if (spec.shared_budget) {
        std::vector<double> e(static_cast<std::size_t>(n));
        double tot = 0.0;
        for (int k = 0; k < n; ++k) {
            double u = rng.next_unit();
            e[static_cast<std::size_t>(k)] = -std::log1p(-u * (1.0 - 1e-12));
            tot += e[static_cast<std::size_t>(k)];
        }
        double shrink = 0.40 + 0.55 * rng.next_unit();
        for (int k = 0; k < n; ++k) {
            double b = spec.support_budget * shrink * e[static_cast<std::size_t>(k)] / tot;
            budget[static_cast<std::size_t>(k)] = std::min(1.0, b);
        }
    } else {
        for (int k = 0; k < n; ++k) {
            budget[static_cast<std::size_t>(k)] =
                spec.support_budget * (0.10 + 0.85 * rng.next_unit());
        }
    }

    double lratio = std::log(spec.value_max / spec.value_min);
    std::vector<DiscreteDistribution> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        int m = 1 + static_cast<int>(rng.next_unit() * spec.max_atoms);
        m = std::min(m, spec.max_atoms);

        // Values are log-uniform, snapped to a 2^-20 exponent grid so equal
        // draws collide exactly and distinct draws stay well separated.
        std::vector<double> values(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            double u = rng.next_unit();
            u = std::round(u * 1048576.0) / 1048576.0;
            values[static_cast<std::size_t>(i)] = spec.value_min * std::exp(lratio * u);
        }
        std::vector<double> w(static_cast<std::size_t>(m));
        double sumw = 0.0;
        for (int i = 0; i < m; ++i) {
            w[static_cast<std::size_t>(i)] = 0.05 + rng.next_unit();
            sumw += w[static_cast<std::size_t>(i)];
        }

        std::vector<Atom> atoms;
        double b = budget[static_cast<std::size_t>(k)];
        if (spec.mass_quantum > 0.0) {
            double q = spec.mass_quantum;
            long units_total = static_cast<long>(std::floor(b / q));
            if (units_total < 1) units_total = 1;
            if (units_total < m) m = static_cast<int>(units_total);
            long rest = units_total - m;
            std::vector<long> units(static_cast<std::size_t>(m), 1);
            long assigned = 0;
            for (int i = 0; i < m; ++i) {
                long extra = static_cast<long>(
                    std::floor(static_cast<double>(rest) * w[static_cast<std::size_t>(i)] / sumw));
                units[static_cast<std::size_t>(i)] += extra;
                assigned += extra;
            }
            for (long r = 0; r < rest - assigned; ++r) {
                units[static_cast<std::size_t>(r % m)] += 1;
            }
            for (int i = 0; i < m; ++i) {
                atoms.push_back({values[static_cast<std::size_t>(i)],
                                 static_cast<double>(units[static_cast<std::size_t>(i)]) * q});
            }
        } else {
            for (int i = 0; i < m; ++i) {
                atoms.push_back(
                    {values[static_cast<std::size_t>(i)], b * w[static_cast<std::size_t>(i)] / sumw});
            }
        }
        out.emplace_back(std::move(atoms), Ambient::UnitInterval);
    }
    return out;
}

std::vector<double> sample_independent(const std::vector<DiscreteDistribution>& fs,
                                       RngStream& rng) {
    std::vector<double> out(fs.size());
    for (std::size_t k = 0; k < fs.size(); ++k) {
        if (fs[k].ambient() != Ambient::UnitInterval) {
            throw argument_error("sample_independent needs UnitInterval inputs");
        }
        // t = 0 is outside the rearrangement domain; the clamp keeps the draw
        // in the top band, matching mu(0+) = ess sup.
        out[k] = rearrangement(fs[k], std::max(rng.next_unit(), 0x1.0p-120));
    }
    return out;
}

void parallel_for(long count, int threads, const std::function<void(long)>& fn) {
    if (count <= 0) return;
    int workers = std::max(1, threads);
    if (workers == 1 || count == 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    workers = static_cast<int>(std::min<long>(workers, count));
    std::atomic<long> next{0};
    std::atomic<bool> bail{false};
    std::mutex err_mu;
    std::exception_ptr err;
    auto body = [&]() {
        for (;;) {
            long i = next.fetch_add(1);
            if (i >= count || bail.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                bail.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (std::thread& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

RatioReport run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    RatioReport rep;
    rep.config = cfg;
    rep.rows.resize(static_cast<std::size_t>(cfg.instances));
    RngStream root = RngStream::from_seed(cfg.seed);
    parallel_for(cfg.instances, cfg.threads, [&](long i) {
        rep.rows[static_cast<std::size_t>(i)] = evaluate_instance(cfg, i, root);
    });
    return rep;
}

bool SuiteReport::all_pass() const {
    for (const SuiteRow& r : rows) {
        if (!r.pass) return false;
    }
    return true;
}

SuiteReport run_exact_constant_suite(std::uint64_t seed, int instances) {
    if (instances < 1) throw argument_error("suite needs instances >= 1");
    SuiteReport rep;
    RngStream root = RngStream::from_seed(seed);

    // Check 1: mu(t, disjoint sum) <= 2 mu(t/2, max), total support <= 1.
    for (int i = 0; i < instances; ++i) {
        RngStream rng = root.substream(0x10000u + static_cast<std::uint64_t>(i));
        FamilySpec fam;
        fam.value_min = 1e-2;
        fam.value_max = 1e2;
        fam.max_atoms = 3;
        fam.shared_budget = true;
        int n = 2 + i % 5;
        auto fs = draw_family(rng, fam, n);
        bool ok = rearrangement_dominated(disjoint_sum(fs), max_of_independent(fs), 2.0);
        rep.rows.push_back({"disjoint-vs-max", i, ok, ok ? "" : "domination failed"});
    }

    // Check 2: mu(sum of independent) <= 3 mu(t/3, K(disjoint sum)), total
    // support <= 1.
    for (int i = 0; i < instances; ++i) {
        RngStream rng = root.substream(0x20000u + static_cast<std::uint64_t>(i));
        int n = 1 + i % 5;
        FamilySpec fam;
        fam.value_min = 0.05;
        fam.value_max = 20.0;
        fam.max_atoms = n <= 3 ? 2 : 1; // keeps the exact convolution small
        fam.shared_budget = true;
        auto fs = draw_family(rng, fam, n);
        bool ok = sum_kruglov_domination_check(fs);
        rep.rows.push_back({"sum-vs-kruglov", i, ok, ok ? "" : "domination failed"});
    }

    // Check 3: moment of the vector norm is bounded by the level-map moment.
    for (int i = 0; i < instances; ++i) {
        RngStream rng = root.substream(0x30000u + static_cast<std::uint64_t>(i));
        FamilySpec fam;
        fam.value_min = 1e-2;
        fam.value_max = 1e2;
        fam.max_atoms = 2;
        int n = 1 + i % 4;
        SeqSpaceSpec E = SeqSpaceSpec::ellq(2.0);
        switch (i % 5) {
            case 0: E = SeqSpaceSpec::ellq(0.5); break;
            case 1: E = SeqSpaceSpec::ellq(1.0); break;
            case 2: E = SeqSpaceSpec::ellq(2.0); break;
            case 3: E = SeqSpaceSpec::ellinfty(); break;
            case 4: E = SeqSpaceSpec::weak_ell1(); break;
        }
        double p = (i % 3 == 0) ? 1.0 : (i % 3 == 1) ? 2.0 : 4.0;
        auto fs = draw_family(rng, fam, n);
        auto [lhs, rhs] = level_moment_upper_check(fs, E, p);
        bool ok = lhs <= rhs * (1.0 + 1e-9) + 1e-12;
        rep.rows.push_back({"level-moment-upper", i, ok,
                            ok ? "" : "lhs " + fmt6(lhs) + " > rhs " + fmt6(rhs)});
    }

    // Check 4: every level map is dominated by the C(l)-dilated level sequence.
    for (int i = 0; i < instances; ++i) {
        RngStream rng = root.substream(0x40000u + static_cast<std::uint64_t>(i));
        FamilySpec fam;
        fam.value_min = 1e-2;
        fam.value_max = 1e2;
        fam.max_atoms = 3;
        int n = 2 + i % 5;
        auto fs = draw_family(rng, fam, n);
        NonnegSequence levels = build_level_matrix(fs).levels;
        bool ok = true;
        std::vector<int> map(static_cast<std::size_t>(n), 0);
        for (;;) {
            if (!dilation_domination_holds(levels, map)) {
                ok = false;
                break;
            }
            int pos = 0;
            while (pos < n && ++map[static_cast<std::size_t>(pos)] == n) {
                map[static_cast<std::size_t>(pos)] = 0;
                ++pos;
            }
            if (pos == n) break;
        }
        rep.rows.push_back({"level-dilation", i, ok, ok ? "" : "a level map escapes dilation"});
    }

    // Check 5: the rounded-level order-statistic event has probability > 1/10.
    for (int i = 0; i < instances; ++i) {
        RngStream rng = root.substream(0x50000u + static_cast<std::uint64_t>(i));
        FamilySpec fam;
        fam.value_min = 1e-2;
        fam.value_max = 1e2;
        fam.max_atoms = 3;
        int n = 1 + i % 8;
        auto fs = draw_family(rng, fam, n);
        NonnegSequence x = rearrangement_sequence(disjoint_sum(fs), n);
        double prob = xi_eta_construct(fs, x);
        bool ok = prob > 0.1;
        rep.rows.push_back({"order-stat-event", i, ok, "p=" + fmt6(prob)});
    }

    return rep;
}

std::string report_csv(const std::vector<RatioReport>& reports) {
    std::ostringstream out;
    out << "theorem,n,X,E,mode,seed,trial,lhs,rhs,ratio,stderr,degenerate\n";
    for (const RatioReport& rep : reports) {
        const ExperimentConfig& c = rep.config;
        std::string xlabel =
            c.theorem == TheoremKind::Modular ? c.Phi.label() : c.X.label();
        std::string elabel = c.theorem == TheoremKind::SumIntersect
                                 ? SeqSpaceSpec::ellq(c.X.q()).label()
                                 : c.E.label();
        for (const RatioRow& r : rep.rows) {
            out << theorem_label(c.theorem) << ',' << c.n << ',' << xlabel << ',' << elabel
                << ',' << mode_label(c.mode) << ',' << c.seed << ',' << r.trial << ','
                << fmt17(r.lhs) << ',' << fmt17(r.rhs) << ',' << fmt17(r.ratio) << ','
                << fmt17(r.stderr_) << ',' << (r.degenerate ? 1 : 0) << '\n';
        }
    }
    return out.str();
}

std::string report_json(const std::vector<RatioReport>& reports) {
    using nlohmann::json;
    json arr = json::array();
    for (const RatioReport& rep : reports) {
        json rows = json::array();
        for (const RatioRow& r : rep.rows) {
            rows.push_back({{"trial", r.trial},
                            {"lhs", r.lhs},
                            {"rhs", r.rhs},
                            {"ratio", r.ratio},
                            {"stderr", r.stderr_},
                            {"degenerate", r.degenerate}});
        }
        arr.push_back({{"config", json::parse(experiment_config_to_json(rep.config))},
                       {"rows", rows}});
    }
    return arr.dump(2) + "\n";
}

void corpus_csv(const std::vector<RatioReport>& reports, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw argument_error("cannot open output file: " + path);
    out << report_csv(reports);
    if (!out) throw argument_error("failed writing output file: " + path);
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw argument_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw argument_error("config must be a JSON object");

    ExperimentConfig cfg;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        if (key == "theorem") {
            std::string s = v.get<std::string>();
            if (s == "norm_equiv") cfg.theorem = TheoremKind::NormEquiv;
            else if (s == "sum_intersect") cfg.theorem = TheoremKind::SumIntersect;
            else if (s == "modular") cfg.theorem = TheoremKind::Modular;
            else throw argument_error("unknown theorem: " + s);
        } else if (key == "n") {
            cfg.n = v.get<int>();
        } else if (key == "X") {
            // poisson_knots asks for the tabulated Poisson-tail weight.
            if (v.is_object() && v.contains("Marcinkiewicz") &&
                v["Marcinkiewicz"].is_object() &&
                v["Marcinkiewicz"].contains("poisson_knots")) {
                int knots = v["Marcinkiewicz"]["poisson_knots"].get<int>();
                cfg.X = SpaceSpec::marcinkiewicz(psi_table(kKruglovDefaultN, knots));
            } else {
                cfg.X = space_from_json(v.dump());
            }
        } else if (key == "E") {
            cfg.E = seq_space_from_json(v.dump());
        } else if (key == "Phi") {
            cfg.Phi = orlicz_from_json(v.dump());
        } else if (key == "family") {
            if (!v.is_object()) throw argument_error("family must be an object");
            for (auto ft = v.begin(); ft != v.end(); ++ft) {
                const std::string& fk = ft.key();
                if (fk == "value_min") cfg.family.value_min = ft.value().get<double>();
                else if (fk == "value_max") cfg.family.value_max = ft.value().get<double>();
                else if (fk == "max_atoms") cfg.family.max_atoms = ft.value().get<int>();
                else if (fk == "support_budget") cfg.family.support_budget = ft.value().get<double>();
                else if (fk == "shared_budget") cfg.family.shared_budget = ft.value().get<bool>();
                else if (fk == "mass_quantum") cfg.family.mass_quantum = ft.value().get<double>();
                else throw argument_error("unknown family key: " + fk);
            }
        } else if (key == "mode") {
            std::string s = v.get<std::string>();
            if (s == "exact") cfg.mode = RunMode::Exact;
            else if (s == "mc") cfg.mode = RunMode::MonteCarlo;
            else throw argument_error("unknown mode: " + s);
        } else if (key == "trials") {
            cfg.trials = v.get<long>();
        } else if (key == "instances") {
            cfg.instances = v.get<int>();
        } else if (key == "seed") {
            cfg.seed = v.get<std::uint64_t>();
        } else if (key == "threads") {
            cfg.threads = v.get<int>();
        } else {
            throw argument_error("unknown config key: " + key);
        }
    }
    validate_config(cfg);
    return cfg;
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
    using nlohmann::json;
    json j;
    j["theorem"] = theorem_label(cfg.theorem);
    j["n"] = cfg.n;
    j["X"] = space_fragment(cfg.X);
    j["E"] = seq_fragment(cfg.E);
    j["Phi"] = orlicz_fragment(cfg.Phi);
    j["family"] = {{"value_min", cfg.family.value_min},
                   {"value_max", cfg.family.value_max},
                   {"max_atoms", cfg.family.max_atoms},
                   {"support_budget", cfg.family.support_budget},
                   {"shared_budget", cfg.family.shared_budget},
                   {"mass_quantum", cfg.family.mass_quantum}};
    j["mode"] = mode_label(cfg.mode);
    j["trials"] = cfg.trials;
    j["instances"] = cfg.instances;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    return j.dump();
}

} // namespace rearrkit
