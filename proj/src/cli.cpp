// ============================================================================
// cli.cpp
//
// Subcommands: verify, experiment, kruglov, junge, psi. Seed precedence is
// flag > REARRKIT_SEED > config file > 42. Machine output (--out) is CSV by
// default or JSON with --format json; fixed seeds make it byte-identical.
// ============================================================================
#include "rearrkit/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rearrkit/harness.hpp"
#include "rearrkit/kruglov.hpp"
#include "rearrkit/levels.hpp"
#include "rearrkit/verify.hpp"

namespace rearrkit {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return std::string(buf);
}

std::optional<std::uint64_t> env_seed() {
    const char* e = std::getenv("REARRKIT_SEED");
    if (e == nullptr || *e == '\0') return std::nullopt;
    char* end = nullptr;
    unsigned long long v = std::strtoull(e, &end, 10);
    if (end == nullptr || *end != '\0') {
        throw argument_error("REARRKIT_SEED is not an unsigned integer");
    }
    return static_cast<std::uint64_t>(v);
}

// flag > environment > config-file value > default 42.
std::uint64_t resolve_seed(bool flag_set, std::uint64_t flag_val,
                           std::optional<std::uint64_t> config_val) {
    if (flag_set) return flag_val;
    if (auto e = env_seed()) return *e;
    if (config_val) return *config_val;
    return kDefaultSeed;
}

void write_machine_output(const std::string& path, const std::string& payload) {
    if (path.empty()) return;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw argument_error("cannot open output file: " + path);
    f << payload;
    if (!f) throw argument_error("failed writing output file: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw argument_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int do_verify(const std::string& suite, std::uint64_t seed, int threads,
              const std::string& format, const std::string& out_path, std::ostream& out) {
    VerifyReport rep = run_verify_suite(suite, seed, threads);
    int passed = 0;
    for (const CheckRow& r : rep.rows) {
        if (r.pass) ++passed;
        out << (r.pass ? "[ ok ] " : "[FAIL] ") << r.suite << "/" << r.check;
        if (!r.note.empty()) out << "  " << r.note;
        out << "\n";
    }
    out << "verify: " << passed << "/" << rep.rows.size() << " checks passed (seed " << seed
        << ")\n";
    std::string payload;
    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const CheckRow& r : rep.rows) {
            arr.push_back({{"suite", r.suite},
                           {"check", r.check},
                           {"pass", r.pass},
                           {"note", r.note}});
        }
        payload = arr.dump(2) + "\n";
    } else {
        std::ostringstream csv;
        csv << "suite,check,pass,note\n";
        for (const CheckRow& r : rep.rows) {
            csv << r.suite << ',' << r.check << ',' << (r.pass ? 1 : 0) << ',' << r.note
                << '\n';
        }
        payload = csv.str();
    }
    write_machine_output(out_path, payload);
    return rep.all_pass() ? 0 : 1;
}

int do_experiment(const ExperimentConfig& cfg, const std::string& format,
                  const std::string& out_path, std::ostream& out) {
    RatioReport rep = run_experiment(cfg);
    out << "experiment: " << theorem_label(cfg.theorem) << " n=" << cfg.n << " "
        << (cfg.theorem == TheoremKind::Modular ? cfg.Phi.label() : cfg.X.label())
        << " E=" << cfg.E.label() << " mode=" << mode_label(cfg.mode)
        << " instances=" << cfg.instances << " seed=" << cfg.seed << "\n";
    for (const RatioRow& r : rep.rows) {
        out << "  trial " << r.trial << ": lhs=" << fmt("%.6g", r.lhs)
            << " rhs=" << fmt("%.6g", r.rhs) << " ratio=" << fmt("%.6g", r.ratio);
        if (cfg.mode == RunMode::MonteCarlo) out << " se=" << fmt("%.3g", r.stderr_);
        if (r.degenerate) out << " (degenerate)";
        out << "\n";
    }
    out << "ratio range [" << fmt("%.6g", rep.min_ratio()) << ", "
        << fmt("%.6g", rep.max_ratio()) << "]\n";
    std::string payload = format == "json" ? report_json({rep}) : report_csv({rep});
    write_machine_output(out_path, payload);
    return 0;
}

int do_kruglov(bool indicator, const std::string& dist_path, int rows_wanted, int truncation,
               const std::string& format, const std::string& out_path, std::ostream& out) {
    DiscreteDistribution base;
    if (indicator) {
        base = DiscreteDistribution({{1.0, 1.0}}, Ambient::UnitInterval);
    } else if (!dist_path.empty()) {
        base = DiscreteDistribution::from_json(read_text_file(dist_path));
        if (base.ambient() == Ambient::HalfLine) base = as_unit_interval(base);
    } else {
        throw argument_error("kruglov needs --indicator or --dist FILE");
    }
    KruglovLaw kl = kruglov_distribution(base, truncation);
    std::vector<Atom> ascending(kl.law.atoms().rbegin(), kl.law.atoms().rend());
    out << "value        mass\n";
    int shown = 0;
    for (const Atom& a : ascending) {
        if (shown > rows_wanted) break;
        out << fmt("%-12.10g", a.value) << " " << fmt("%.6f", a.mass) << "\n";
        ++shown;
    }
    out << "truncation " << kl.truncation << ", tail mass bound "
        << fmt("%.3g", kl.tail_mass_bound) << "\n";
    std::string payload;
    if (format == "json") {
        nlohmann::json j;
        j["law"] = nlohmann::json::parse(kl.law.to_json());
        j["truncation"] = kl.truncation;
        j["tail_mass_bound"] = kl.tail_mass_bound;
        payload = j.dump(2) + "\n";
    } else {
        std::ostringstream csv;
        csv << "value,mass\n";
        for (const Atom& a : ascending) {
            csv << fmt("%.17g", a.value) << ',' << fmt("%.17g", a.mass) << '\n';
        }
        payload = csv.str();
    }
    write_machine_output(out_path, payload);
    return 0;
}

int do_junge(int n, const std::string& matrix, double p, long trials, std::uint64_t seed,
             const std::string& format, const std::string& out_path, std::ostream& out) {
    if (n < 1) throw argument_error("junge needs --n >= 1");
    if (!(p >= 1.0)) throw argument_error("junge needs --p >= 1");
    LevelMatrix M;
    if (matrix == "uniform") {
        M = make_uniform_matrix(n);
    } else if (matrix == "perm") {
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = n - 1 - i;
        M = make_permutation_matrix(perm);
    } else if (matrix == "random") {
        RngStream rng = RngStream::from_seed(seed);
        M = make_random_doubly_stochastic(n, rng);
    } else {
        throw argument_error("unknown --matrix (use uniform|perm|random)");
    }
    double value = 0.0, se = 0.0;
    std::string mode;
    if (trials == 0 && n <= 8) {
        value = junge_statistic(M, p);
        mode = "exact";
    } else {
        long t = trials == 0 ? 100000 : trials;
        RngStream rng = RngStream::from_seed(seed).substream(1);
        JungeEstimate est = junge_statistic_mc(M, p, t, rng);
        value = est.value;
        se = est.stderr_;
        mode = "mc";
    }
    double profile = p / (1.0 + std::log(p));
    out << "statistic " << fmt("%.6g", value);
    if (mode == "mc") out << " (se " << fmt("%.3g", se) << ")";
    out << "\n";
    out << "profile p/(1+log p) = " << fmt("%.6g", profile) << "\n";
    out << "fitted c0 = " << fmt("%.6g", value / profile) << "\n";
    std::string payload;
    if (format == "json") {
        nlohmann::json j = {{"n", n},          {"matrix", matrix},
                            {"p", p},          {"mode", mode},
                            {"statistic", value}, {"stderr", se},
                            {"profile", profile}, {"c0", value / profile}};
        payload = j.dump(2) + "\n";
    } else {
        std::ostringstream csv;
        csv << "n,matrix,p,mode,statistic,stderr,profile,c0\n";
        csv << n << ',' << matrix << ',' << fmt("%.17g", p) << ',' << mode << ','
            << fmt("%.17g", value) << ',' << fmt("%.17g", se) << ','
            << fmt("%.17g", profile) << ',' << fmt("%.17g", value / profile) << '\n';
        payload = csv.str();
    }
    write_machine_output(out_path, payload);
    return 0;
}

int do_psi(int knots, int truncation, const std::string& format, const std::string& out_path,
           std::ostream& out) {
    PsiTable tbl = psi_table(truncation, knots);
    out << "t            psi(t)\n";
    for (const auto& [t, v] : tbl.knots()) {
        out << fmt("%-12.6g", t) << " " << fmt("%.6g", v) << "\n";
    }
    std::string payload;
    if (format == "json") {
        nlohmann::json j = {{"knots", tbl.knots()}};
        payload = j.dump(2) + "\n";
    } else {
        std::ostringstream csv;
        csv << "t,psi\n";
        for (const auto& [t, v] : tbl.knots()) {
            csv << fmt("%.17g", t) << ',' << fmt("%.17g", v) << '\n';
        }
        payload = csv.str();
    }
    write_machine_output(out_path, payload);
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"rearrkit: computable rearrangement-invariant norm equivalences"};
    app.require_subcommand(1);

    // verify
    auto* sv = app.add_subcommand("verify", "run verification suites");
    std::string v_suite = "all";
    std::uint64_t v_seed = kDefaultSeed;
    int v_threads = 1;
    std::string v_format = "csv", v_out;
    {
        std::string names;
        for (const std::string& s : verify_suite_names()) names += s + "|";
        sv->add_option("--suite", v_suite, "suite name (" + names + "all)");
    }
    auto* v_seed_opt = sv->add_option("--seed", v_seed, "RNG seed");
    sv->add_option("--threads", v_threads, "worker threads");
    sv->add_option("--format", v_format, "machine output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sv->add_option("--out", v_out, "machine output path");

    // experiment
    auto* se = app.add_subcommand("experiment", "run a ratio experiment");
    std::string e_config, e_theorem, e_mode, e_format = "csv", e_out;
    int e_n = 0, e_instances = 0, e_threads = 0;
    long e_trials = 0;
    std::uint64_t e_seed = kDefaultSeed;
    se->add_option("--config", e_config, "experiment config JSON file");
    se->add_option("--theorem", e_theorem, "norm_equiv|sum_intersect|modular")
        ->check(CLI::IsMember({"norm_equiv", "sum_intersect", "modular"}));
    se->add_option("--n", e_n, "number of independent variables");
    se->add_option("--mode", e_mode, "exact|mc")->check(CLI::IsMember({"exact", "mc"}));
    se->add_option("--trials", e_trials, "Monte Carlo trials");
    se->add_option("--instances", e_instances, "number of random families");
    auto* e_seed_opt = se->add_option("--seed", e_seed, "RNG seed");
    se->add_option("--threads", e_threads, "worker threads");
    se->add_option("--format", e_format, "machine output format")
        ->check(CLI::IsMember({"csv", "json"}));
    se->add_option("--out", e_out, "machine output path");

    // kruglov
    auto* sk = app.add_subcommand("kruglov", "print the exact transform law");
    bool k_indicator = false;
    std::string k_dist, k_format = "csv", k_out;
    int k_n = 10, k_trunc = kKruglovDefaultN;
    sk->add_flag("--indicator", k_indicator, "use the unit indicator as base");
    sk->add_option("--dist", k_dist, "base distribution JSON file");
    sk->add_option("--n", k_n, "rows of the table to print");
    sk->add_option("--truncation", k_trunc, "mixture truncation");
    sk->add_option("--format", k_format, "machine output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sk->add_option("--out", k_out, "machine output path");

    // junge
    auto* sj = app.add_subcommand("junge", "level-map moment statistic");
    int j_n = 0;
    std::string j_matrix = "uniform", j_format = "csv", j_out;
    double j_p = 1.0;
    long j_trials = 0;
    std::uint64_t j_seed = kDefaultSeed;
    sj->add_option("--n", j_n, "matrix size")->required();
    sj->add_option("--matrix", j_matrix, "uniform|perm|random");
    sj->add_option("--p", j_p, "moment exponent (>= 1)");
    sj->add_option("--trials", j_trials, "sampling trials (0 = exact when n <= 8)");
    auto* j_seed_opt = sj->add_option("--seed", j_seed, "RNG seed");
    sj->add_option("--format", j_format, "machine output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sj->add_option("--out", j_out, "machine output path");

    // psi
    auto* sp = app.add_subcommand("psi", "print the head-integral weight table");
    int p_knots = 32, p_trunc = kKruglovDefaultN;
    std::string p_format = "csv", p_out;
    sp->add_option("--knots", p_knots, "minimum knot count");
    sp->add_option("--truncation", p_trunc, "Poisson tail truncation");
    sp->add_option("--format", p_format, "machine output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sp->add_option("--out", p_out, "machine output path");

    std::vector<const char*> argv;
    argv.push_back("rearrkit");
    for (const std::string& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (sv->parsed()) {
            std::uint64_t seed = resolve_seed(v_seed_opt->count() > 0, v_seed, std::nullopt);
            return do_verify(v_suite, seed, v_threads, v_format, v_out, out);
        }
        if (se->parsed()) {
            ExperimentConfig cfg;
            std::optional<std::uint64_t> config_seed;
            if (!e_config.empty()) {
                cfg = experiment_config_from_json(read_text_file(e_config));
                config_seed = cfg.seed;
            }
            if (!e_theorem.empty()) {
                cfg.theorem = e_theorem == "norm_equiv"      ? TheoremKind::NormEquiv
                              : e_theorem == "sum_intersect" ? TheoremKind::SumIntersect
                                                             : TheoremKind::Modular;
            }
            if (e_n > 0) cfg.n = e_n;
            if (!e_mode.empty()) cfg.mode = e_mode == "exact" ? RunMode::Exact : RunMode::MonteCarlo;
            if (e_trials > 0) cfg.trials = e_trials;
            if (e_instances > 0) cfg.instances = e_instances;
            if (e_threads > 0) cfg.threads = e_threads;
            cfg.seed = resolve_seed(e_seed_opt->count() > 0, e_seed, config_seed);
            return do_experiment(cfg, e_format, e_out, out);
        }
        if (sk->parsed()) {
            return do_kruglov(k_indicator, k_dist, k_n, k_trunc, k_format, k_out, out);
        }
        if (sj->parsed()) {
            std::uint64_t seed = resolve_seed(j_seed_opt->count() > 0, j_seed, std::nullopt);
            return do_junge(j_n, j_matrix, j_p, j_trials, seed, j_format, j_out, out);
        }
        if (sp->parsed()) {
            return do_psi(p_knots, p_trunc, p_format, p_out, out);
        }
        err << "error: no subcommand\n";
        return 2;
    } catch (const argument_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const capacity_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const check_failure& e) {
        err << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return 1;
    }
}

} // namespace rearrkit
