#pragma once

#include "fracback/quadrature.hpp"
#include "fracback/spectral.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace fracback {

// Time-dependent source, seen through its coefficients (f(., s), phi_k).
class SourceTerm {
public:
    virtual ~SourceTerm() = default;
    virtual SpectralField coefficients(double s) const = 0;
    virtual const ModeSetPtr& modeset_ptr() const = 0;
};

using SourcePtr = std::shared_ptr<const SourceTerm>;
using SpaceTimeFn = std::function<double(double x, double y, double s)>;

// f(x, y, s) projected by quadrature at every requested time.
class ProjectedSource final : public SourceTerm {
public:
    ProjectedSource(SpaceTimeFn f, ModeSetPtr modes, const QuadConfig& cfg);

    SpectralField coefficients(double s) const override;
    const ModeSetPtr& modeset_ptr() const override { return projector_.modeset_ptr(); }

    const SpaceTimeFn& function() const { return f_; }
    const QuadConfig& quad() const { return cfg_; }

private:
    SpaceTimeFn f_;
    QuadConfig cfg_;
    Projector projector_;
};

// Source given directly by its per-mode coefficient functions c_k(s).
class SpectralSource final : public SourceTerm {
public:
    using CoeffFn = std::function<double(const Mode&, double s)>;

    SpectralSource(CoeffFn c, ModeSetPtr modes);

    SpectralField coefficients(double s) const override;
    const ModeSetPtr& modeset_ptr() const override { return modes_; }

private:
    CoeffFn c_;
    ModeSetPtr modes_;
};

// base + a time-independent coefficient offset.
class ShiftedSource final : public SourceTerm {
public:
    ShiftedSource(SourcePtr base, SpectralField offset);

    SpectralField coefficients(double s) const override;
    const ModeSetPtr& modeset_ptr() const override { return offset_.modeset_ptr(); }

private:
    SourcePtr base_;
    SpectralField offset_;
};

struct TimeFractionalProblem {
    double alpha = 0.5;  // (0, 1); alpha = 1 is accepted as the classical heat limit
    double tau = 1.0;
    ModeSetPtr modes;
    SourcePtr source;    // null means f = 0
    QuadConfig quad;     // rule and singular-kernel handling for the memory term
    int temporal_subintervals = 8;

    void validate() const;
    // quad with the temporal subinterval count.
    QuadConfig temporal_quad() const;
};

// Same problem with graded substitution and a fine temporal grid; used to
// measure the quadrature error of the memory term.
TimeFractionalProblem refined_variant(const TimeFractionalProblem& prob, int temporal_subintervals = 256);

// (f(., s), phi_mode).
double source_coefficient(const TimeFractionalProblem& prob, const Mode& mode, double s);

// Quadrature weights for the memory term at time t:
//   F_k(t) = sum_j W_j(lambda_k) c_k(s_j),
//   W_j(lambda) = w_j * E_{alpha,alpha}(-lambda (t - s_j)^alpha),
// with the singular factor (t - s_j)^(alpha-1) already inside w_j.
// Kernel values are stored per distinct eigenvalue.
class MemoryKernel {
public:
    MemoryKernel(const TimeFractionalProblem& prob, double t);

    double time() const { return t_; }
    const std::vector<double>& nodes() const { return s_; }

    // Memory terms of every mode for `source` (zeros when null or t = 0).
    std::vector<double> apply(const SourceTerm* source) const;

private:
    ModeSetPtr modes_;
    double t_;
    std::vector<double> s_;
    std::vector<double> w_;  // node-major, one entry per distinct eigenvalue
};

// F_{alpha,mode}(t).
double memory_term(const TimeFractionalProblem& prob, const Mode& mode, double t);
std::vector<double> memory_terms(const TimeFractionalProblem& prob, double t);

// coeff_k(t) = E_{alpha,1}(-lambda_k t^alpha) u0_k + F_k(t); t = 0 returns u0.
SpectralField forward_solve(const TimeFractionalProblem& prob, const SpectralField& u0, double t);
SpectralField final_value(const TimeFractionalProblem& prob, const SpectralField& u0);

struct Reconstruction {
    SpectralField field;
    double t = 0.0;
    // Set for t = 0: the naive inversion without regularization.
    bool unregularized = false;
    std::string note;
};

// Caches F(tau) and E_{alpha,1}(-lambda tau^alpha) so that many
// reconstruction times share them.
class BackwardReconstructor {
public:
    explicit BackwardReconstructor(TimeFractionalProblem prob);

    const TimeFractionalProblem& problem() const { return prob_; }
    const std::vector<double>& memory_at_tau() const { return f_tau_; }

    // Same value as fracback::final_value, reusing the cached F(tau).
    SpectralField final_value(const SpectralField& u0) const;

    // E_{alpha,1}(-lambda t^alpha)(g - F(tau))/E_{alpha,1}(-lambda tau^alpha) + F(t).
    Reconstruction reconstruct(const SpectralField& g, double t) const;

    // As above with the memory terms computed from `source` instead of the
    // problem's source (the noisy-source reconstruction).
    Reconstruction reconstruct(const SpectralField& g, const SourceTerm* source, double t) const;

private:
    TimeFractionalProblem prob_;
    MemoryKernel kernel_tau_;
    std::vector<double> e_tau_;  // per distinct eigenvalue
    std::vector<double> f_tau_;
};

Reconstruction backward_reconstruct(const TimeFractionalProblem& prob, const SpectralField& g, double t);

Reconstruction reconstruct_noisy(const TimeFractionalProblem& prob, const SpectralField& g_noisy,
                                 const SourcePtr& f_noisy, double t);

enum class Growth { bounded, growing };

struct SolvabilityReport {
    // S_K over modes sorted by eigenvalue.
    std::vector<double> partial_sums;
    // (S_K - S_{3K/4}) / S_K over the last quartile.
    double tail_growth = 0.0;
    Growth classification = Growth::bounded;
};

// Partial sums of [(g_k - F_k(tau)) / E_{alpha,1}(-lambda_k tau^alpha)]^2.
// The classification is advisory.
SolvabilityReport solvability_diagnostic(const TimeFractionalProblem& prob, const SpectralField& g);

inline constexpr double kGrowthThreshold = 1e-3;

const char* to_string(Growth g);

// 1 / E_{alpha,1}(-lambda tau^alpha).
double amplification_factor(double lambda, double tau, double alpha);
double amplification_factor(const Mode& mode, double tau, double alpha);

// max_k E_{alpha,1}(-lambda_k t^alpha) / E_{alpha,1}(-lambda_k tau^alpha):
// the Lipschitz constant of g -> reconstruction at time t.
double stability_constant(const TimeFractionalProblem& prob, double t);

struct RegularizationChoice {
    enum class Rule {
        source_condition,  // eta^(1/((p+1) alpha)), param = p in (0, 1]
        plain,             // eta^((1-gamma)/alpha), param = gamma in (0, 1)
        paper_table,       // eta^(1/(2 alpha))
    };
    Rule rule = Rule::paper_table;
    double param = 1.0;
    double eta = 0.0;
};

// Throws ParameterChoiceError when the chosen time is not below tau.
double choose_t(const RegularizationChoice& choice, double alpha, double tau = 1.0);

}  // namespace fracback
