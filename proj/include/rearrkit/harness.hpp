// ============================================================================
// harness.hpp
//
// Experiment harness: random family generation, exact and Monte Carlo
// evaluation of the two sides of each norm identity, the exact-constant
// suite, and CSV/JSON reporting. Every run is a pure function of
// (configuration, seed): instances draw from counter-based substreams, so
// results are bit-identical across runs and thread counts.
// ============================================================================
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rearrkit/common.hpp"
#include "rearrkit/measure.hpp"
#include "rearrkit/rng.hpp"
#include "rearrkit/spaces.hpp"

namespace rearrkit {

// Which identity an experiment probes.
//   NormEquiv:    || ||(f_k)||_E ||_X  vs  head + sequence split of mu(f).
//   SumIntersect: || ||(f_k)||_{lq} ||_{Lp}  vs  one-space norm of mu(f).
//   Modular:      int Phi(||(f_k)||_E)  vs  head integral + Phi of tail seq.
enum class TheoremKind { NormEquiv, SumIntersect, Modular };

enum class RunMode { Exact, MonteCarlo };

std::string theorem_label(TheoremKind t);
std::string mode_label(RunMode m);

// How random families of distributions are drawn.
struct FamilySpec {
    double value_min = 1e-3;     // values are log-uniform in [value_min, value_max]
    double value_max = 1e3;
    int max_atoms = 3;           // atoms per variable, uniform in 1..max_atoms
    double support_budget = 1.0; // per-variable support mass cap (or shared total)
    bool shared_budget = false;  // true: budget is split across the family
    double mass_quantum = 0.0;   // > 0 snaps every atom mass to this grid
};

struct ExperimentConfig {
    TheoremKind theorem = TheoremKind::NormEquiv;
    int n = 2;
    SpaceSpec X = SpaceSpec::lp(2.0);
    SeqSpaceSpec E = SeqSpaceSpec::ellq(2.0);
    OrliczFunction Phi = OrliczFunction::power(2.0); // Modular runs only
    FamilySpec family;
    RunMode mode = RunMode::Exact;
    long trials = 10000; // MonteCarlo only; must be >= 1000
    int instances = 1;
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;
};

ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

// One instance of an experiment: both sides and their ratio.
struct RatioRow {
    long trial = 0;           // instance index
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double stderr_ = 0.0;     // MC standard error of lhs (0 for exact runs)
    bool degenerate = false;  // lhs == rhs == 0, ratio reported as 1
};

struct RatioReport {
    ExperimentConfig config;
    std::vector<RatioRow> rows;
    double min_ratio() const;
    double max_ratio() const;
};

// Draw one family of n independent variables.
std::vector<DiscreteDistribution> draw_family(RngStream& rng, const FamilySpec& spec, int n);

// One joint sample: value of each variable, by inverse transform.
std::vector<double> sample_independent(const std::vector<DiscreteDistribution>& fs,
                                       RngStream& rng);

// Run every instance of an experiment. Throws check_failure if any instance
// has rhs == 0 with lhs > 0 (the equivalence would be violated outright).
RatioReport run_experiment(const ExperimentConfig& cfg);

// Exact-constant suite: inequality checks with pinned constants, evaluated on
// randomly drawn families. Each check runs `instances` times.
struct SuiteRow {
    std::string check;
    long instance = 0;
    bool pass = false;
    std::string note;
};

struct SuiteReport {
    std::vector<SuiteRow> rows;
    bool all_pass() const;
};

SuiteReport run_exact_constant_suite(std::uint64_t seed, int instances = 100);

// CSV with one row per instance; several reports share one header.
std::string report_csv(const std::vector<RatioReport>& reports);
std::string report_json(const std::vector<RatioReport>& reports);
void corpus_csv(const std::vector<RatioReport>& reports, const std::string& path);

// Deterministic helper: run fn(i) for i in [0, count) over `threads` workers.
// Results must be written into per-index slots by fn.
void parallel_for(long count, int threads, const std::function<void(long)>& fn);

} // namespace rearrkit
