#ifndef REARRKIT_SPACES_HPP
#define REARRKIT_SPACES_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rearrkit/measure.hpp"

namespace rearrkit {

// Orlicz function with an evaluable Phi(t) and a certified doubling constant
// C with Phi(2t) <= C * Phi(t). Increasing and Phi(0) = 0 are required;
// convexity is not (powers p < 1 are legal).
class OrliczFunction {
public:
    enum class Kind { Power, PowerLog, Tabulated };

    static OrliczFunction power(double p);
    // Phi(t) = t^p * log(e + t)^a, a >= 0; certified C = 2^p * (1 + log 2)^a.
    static OrliczFunction power_log(double p, double a);
    // Piecewise-linear through (0,0) and the given increasing knots, extended
    // linearly beyond the last knot. The doubling constant is certified on a
    // sampled grid.
    static OrliczFunction tabulated(std::vector<std::pair<double, double>> knots);

    double operator()(double t) const;
    double delta2_constant() const { return delta2_constant_; }
    Kind kind() const { return kind_; }
    double exponent() const { return p_; }
    double log_exponent() const { return a_; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }
    std::string label() const;

private:
    OrliczFunction() = default;

    Kind kind_ = Kind::Power;
    double p_ = 1.0;
    double a_ = 0.0;
    std::vector<std::pair<double, double>> knots_;
    double delta2_constant_ = 2.0;
};

// Symmetric sequence space descriptor with its concavity modulus C_E
// (quasi-triangle constant) and the normalization ||e_k|| = 1.
class SeqSpaceSpec {
public:
    enum class Kind { EllQ, EllInfty, WeakEll1 };

    static SeqSpaceSpec ellq(double q);
    static SeqSpaceSpec ellinfty();
    static SeqSpaceSpec weak_ell1();

    Kind kind() const { return kind_; }
    double q() const { return q_; }
    double concavity_modulus() const;
    std::string label() const;

private:
    Kind kind_ = Kind::EllQ;
    double q_ = 1.0;
};

// Piecewise-linear concave weight on (0, t_last]: knots (t_i, psi(t_i)) with
// psi(0+) = 0, non-decreasing and concave. Evaluation interpolates, runs
// linearly from the origin before the first knot, and extends the last
// segment's slope beyond the last knot.
class PsiTable {
public:
    explicit PsiTable(std::vector<std::pair<double, double>> knots);

    double operator()(double t) const;
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }
    double domain_end() const { return knots_.back().first; }

private:
    std::vector<std::pair<double, double>> knots_;
};

// Function space descriptor.
class SpaceSpec {
public:
    enum class Kind { Lp, LpPlusLq, LpCapLq, OrliczLux, Marcinkiewicz };

    static SpaceSpec lp(double p);
    static SpaceSpec lp_plus_lq(double p, double q); // p <= q
    static SpaceSpec lp_cap_lq(double p, double q);  // q <= p
    static SpaceSpec orlicz_lux(OrliczFunction phi);
    static SpaceSpec marcinkiewicz(PsiTable psi);

    Kind kind() const { return kind_; }
    double p() const { return p_; }
    double q() const { return q_; }
    const OrliczFunction& phi() const { return *phi_; }
    const PsiTable& psi() const { return *psi_; }
    std::string label() const;

private:
    Kind kind_ = Kind::Lp;
    double p_ = 1.0;
    double q_ = 1.0;
    std::optional<OrliczFunction> phi_;
    std::optional<PsiTable> psi_;
};

// Quasi-norm of a finite sequence in E. EllQ: (sum a_k^q)^{1/q}; EllInfty:
// max; WeakEll1: sup_k (k+1) * mu(k, a).
double sequence_quasinorm(const SeqSpaceSpec& E, const NonnegSequence& a);
double sequence_quasinorm(const SeqSpaceSpec& E, const std::vector<double>& a);

// Quasi-norm of a distribution in X. Lp is exact over atoms; LpPlusLq uses
// the head + integer-tail proxy ||mu(f)chi_(0,1)||_p + ||(mu(k,f))_{k>=1}||_q
// (labeled "proxy" in reports); LpCapLq is max of the two norms; OrliczLux
// bisects the Luxemburg functional; Marcinkiewicz takes the sup of
// (int_0^t mu)/psi(t) over knots and breakpoints.
double function_quasinorm(const SpaceSpec& X, const DiscreteDistribution& d);

// L_p norm of a distribution, exact over atoms.
double lp_norm(const DiscreteDistribution& d, double p);

// Orlicz modular: sum of mass * Phi(value).
double orlicz_modular(const OrliczFunction& phi, const DiscreteDistribution& d);

// Right-hand side of the two-sided norm equivalence for a disjoint sum f:
// ||mu(f)chi_(0,1)||_X + ||(mu(k,f))_{k=1..k_max}||_E. Requires k_max >=
// ceil(total mass) so the sequence tail is exhausted.
double split_norm_rhs(const SpaceSpec& X, const SeqSpaceSpec& E,
                      const DiscreteDistribution& f, int k_max);

// Modular right-hand side: int_0^1 Phi(mu(t,f)) dt + Phi(||(mu(k,f))_{k=1..n}||_E).
double split_modular_rhs(const OrliczFunction& phi, const SeqSpaceSpec& E,
                         const DiscreteDistribution& f, int n);

// Exact law of ||(f_k(omega_k))_k||_E under the product measure of
// independent UnitInterval inputs (zero atoms materialized).
DiscreteDistribution vector_norm_law(const SeqSpaceSpec& E,
                                     const std::vector<DiscreteDistribution>& fs);

// || ||(f_k)_k||_E ||_X, exact via product enumeration.
double mixed_norm_exact(const SpaceSpec& X, const SeqSpaceSpec& E,
                        const std::vector<DiscreteDistribution>& fs);

// int Phi(||(f_k)_k||_E), exact via product enumeration.
double mixed_modular_exact(const OrliczFunction& phi, const SeqSpaceSpec& E,
                           const std::vector<DiscreteDistribution>& fs);

// Marcinkiewicz norm of g next to the grid supremum of (log(ep)/p)*||g||_p,
// for ratio reporting.
std::pair<double, double> marcinkiewicz_sup_p_equiv(const DiscreteDistribution& g,
                                                    const PsiTable& psi,
                                                    const std::vector<double>& p_grid);

// JSON fragments used inside experiment configs, e.g. {"ellq":0.5},
// {"Lp":2.0}, {"power":2.0}. Marcinkiewicz accepts explicit knots only at
// this level: {"Marcinkiewicz":{"knots":[[t,psi],...]}}.
SeqSpaceSpec seq_space_from_json(const std::string& text);
SpaceSpec space_from_json(const std::string& text);
OrliczFunction orlicz_from_json(const std::string& text);

} // namespace rearrkit

#endif
