#include "fracback/solver.hpp"

#include "fracback/errors.hpp"
#include "fracback/special_fn.hpp"
#include "fracback/summation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace fracback {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void check_time(const TimeFractionalProblem& prob, double t, const char* where) {
    if (!(t >= 0.0 && t <= prob.tau)) {
        throw DomainError(std::string(where) + ": time " + fmt(t) + " outside [0, " + fmt(prob.tau) + "]");
    }
}

void check_field(const TimeFractionalProblem& prob, const SpectralField& f, const char* where) {
    if (!f.modeset().same_as(*prob.modes)) {
        throw DomainError(std::string(where) + ": field does not live on the problem's mode set");
    }
}

// E_{alpha,1}(-lambda t^alpha) for each distinct eigenvalue.
std::vector<double> decay_factors(const ModeSet& ms, double alpha, double t) {
    const auto& lam = ms.distinct_eigenvalues();
    std::vector<double> e(lam.size());
    const double ta = std::pow(t, alpha);
    for (std::size_t c = 0; c < lam.size(); ++c) {
        e[c] = mittag_leffler(alpha, 1.0, -lam[c] * ta);
    }
    return e;
}

std::string mode_name(const Mode& m) {
    return m.n == 0 ? "(" + std::to_string(m.m) + ")"
                    : "(" + std::to_string(m.m) + "," + std::to_string(m.n) + ")";
}

}  // namespace

ProjectedSource::ProjectedSource(SpaceTimeFn f, ModeSetPtr modes, const QuadConfig& cfg)
    : f_(std::move(f)), cfg_(cfg), projector_(std::move(modes), cfg) {
    if (!f_) {
        throw DomainError("ProjectedSource: empty function");
    }
}

SpectralField ProjectedSource::coefficients(double s) const {
    return projector_([&](double x, double y) { return f_(x, y, s); });
}

SpectralSource::SpectralSource(CoeffFn c, ModeSetPtr modes) : c_(std::move(c)), modes_(std::move(modes)) {
    if (!c_ || !modes_) {
        throw DomainError("SpectralSource: empty coefficient function or mode set");
    }
}

SpectralField SpectralSource::coefficients(double s) const {
    SpectralField out(modes_);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = c_(modes_->mode(k), s);
    }
    return out;
}

ShiftedSource::ShiftedSource(SourcePtr base, SpectralField offset)
    : base_(std::move(base)), offset_(std::move(offset)) {
    if (base_ && !base_->modeset_ptr()->same_as(offset_.modeset())) {
        throw DomainError("ShiftedSource: offset lives on a different mode set");
    }
}

SpectralField ShiftedSource::coefficients(double s) const {
    if (!base_) {
        return offset_;
    }
    return base_->coefficients(s) + offset_;
}

void TimeFractionalProblem::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("TimeFractionalProblem: alpha must lie in (0, 1), got " + fmt(alpha));
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw DomainError("TimeFractionalProblem: tau must be positive, got " + fmt(tau));
    }
    if (!modes) {
        throw DomainError("TimeFractionalProblem: mode set missing");
    }
    if (source && !source->modeset_ptr()->same_as(*modes)) {
        throw DomainError("TimeFractionalProblem: source lives on a different mode set");
    }
    if (temporal_subintervals < 1) {
        throw DomainError("TimeFractionalProblem: temporal subinterval count must be >= 1");
    }
    quad.validate();
}

QuadConfig TimeFractionalProblem::temporal_quad() const {
    QuadConfig q = quad;
    q.subintervals = temporal_subintervals;
    return q;
}

TimeFractionalProblem refined_variant(const TimeFractionalProblem& prob, int temporal_subintervals) {
    TimeFractionalProblem out = prob;
    out.quad.singular_mode = SingularMode::graded_substitution;
    out.temporal_subintervals = temporal_subintervals;
    return out;
}

double source_coefficient(const TimeFractionalProblem& prob, const Mode& mode, double s) {
    prob.validate();
    check_time(prob, s, "source_coefficient");
    const std::size_t k = prob.modes->index_of(mode.m, mode.n);
    if (!prob.source) {
        return 0.0;
    }
    return prob.source->coefficients(s)[k];
}

MemoryKernel::MemoryKernel(const TimeFractionalProblem& prob, double t) : modes_(prob.modes), t_(t) {
    prob.validate();
    check_time(prob, t, "memory_term");
    if (t == 0.0) {
        return;
    }
    const NodeSet ns = singular_nodes(t, prob.alpha, prob.temporal_quad());
    const auto& lam = modes_->distinct_eigenvalues();
    const std::size_t nc = lam.size();
    s_ = ns.x;
    w_.resize(s_.size() * nc);
    for (std::size_t j = 0; j < s_.size(); ++j) {
        const double da = std::pow(t - s_[j], prob.alpha);
        for (std::size_t c = 0; c < nc; ++c) {
            w_[j * nc + c] = ns.w[j] * mittag_leffler(prob.alpha, prob.alpha, -lam[c] * da);
        }
    }
}

std::vector<double> MemoryKernel::apply(const SourceTerm* source) const {
    const std::size_t nm = modes_->size();
    std::vector<double> out(nm, 0.0);
    if (!source || s_.empty()) {
        return out;
    }
    const std::size_t nc = modes_->distinct_eigenvalues().size();
    std::vector<CompensatedSum> acc(nm);
    for (std::size_t j = 0; j < s_.size(); ++j) {
        const SpectralField c = source->coefficients(s_[j]);
        const double* w = &w_[j * nc];
        for (std::size_t k = 0; k < nm; ++k) {
            acc[k].add(w[modes_->eigen_class(k)] * c[k]);
        }
    }
    for (std::size_t k = 0; k < nm; ++k) {
        out[k] = acc[k].value();
    }
    return out;
}

std::vector<double> memory_terms(const TimeFractionalProblem& prob, double t) {
    return MemoryKernel(prob, t).apply(prob.source.get());
}

double memory_term(const TimeFractionalProblem& prob, const Mode& mode, double t) {
    prob.validate();
    const std::size_t k = prob.modes->index_of(mode.m, mode.n);
    return memory_terms(prob, t)[k];
}

SpectralField forward_solve(const TimeFractionalProblem& prob, const SpectralField& u0, double t) {
    prob.validate();
    check_field(prob, u0, "forward_solve");
    check_time(prob, t, "forward_solve");
    if (t == 0.0) {
        return u0;
    }
    const ModeSet& ms = *prob.modes;
    const std::vector<double> e = decay_factors(ms, prob.alpha, t);
    const std::vector<double> f = memory_terms(prob, t);
    SpectralField out(prob.modes);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = e[ms.eigen_class(k)] * u0[k] + f[k];
    }
    return out;
}

SpectralField final_value(const TimeFractionalProblem& prob, const SpectralField& u0) {
    return forward_solve(prob, u0, prob.tau);
}

BackwardReconstructor::BackwardReconstructor(TimeFractionalProblem prob)
    : prob_(std::move(prob)), kernel_tau_(prob_, prob_.tau) {
    const ModeSet& ms = *prob_.modes;
    e_tau_ = decay_factors(ms, prob_.alpha, prob_.tau);
    for (std::size_t k = 0; k < ms.size(); ++k) {
        if (e_tau_[ms.eigen_class(k)] == 0.0) {
            throw NumericalError("backward_reconstruct: E_{alpha,1}(-lambda tau^alpha) underflows to 0 for mode " +
                                 mode_name(ms.mode(k)) + " (lambda = " + fmt(ms.eigenvalue(k)) + ")");
        }
    }
    f_tau_ = kernel_tau_.apply(prob_.source.get());
}

SpectralField BackwardReconstructor::final_value(const SpectralField& u0) const {
    check_field(prob_, u0, "final_value");
    const ModeSet& ms = *prob_.modes;
    SpectralField out(prob_.modes);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = e_tau_[ms.eigen_class(k)] * u0[k] + f_tau_[k];
    }
    return out;
}

Reconstruction BackwardReconstructor::reconstruct(const SpectralField& g, double t) const {
    return reconstruct(g, prob_.source.get(), t);
}

Reconstruction BackwardReconstructor::reconstruct(const SpectralField& g, const SourceTerm* source,
                                                  double t) const {
    check_field(prob_, g, "backward_reconstruct");
    check_time(prob_, t, "backward_reconstruct");
    if (source && !source->modeset_ptr()->same_as(*prob_.modes)) {
        throw DomainError("backward_reconstruct: source lives on a different mode set");
    }
    if (t == prob_.tau) {
        return {g, t, false, ""};
    }
    const ModeSet& ms = *prob_.modes;
    const std::vector<double> f_tau =
        source == prob_.source.get() ? f_tau_ : kernel_tau_.apply(source);

    SpectralField out(prob_.modes);
    if (t == 0.0) {
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] = (g[k] - f_tau[k]) / e_tau_[ms.eigen_class(k)];
        }
        return {std::move(out), t, true, "unregularized inversion"};
    }
    const std::vector<double> e_t = decay_factors(ms, prob_.alpha, t);
    const std::vector<double> f_t = MemoryKernel(prob_, t).apply(source);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const std::size_t c = ms.eigen_class(k);
        out[k] = e_t[c] * (g[k] - f_tau[k]) / e_tau_[c] + f_t[k];
    }
    return {std::move(out), t, false, ""};
}

Reconstruction backward_reconstruct(const TimeFractionalProblem& prob, const SpectralField& g, double t) {
    prob.validate();
    check_field(prob, g, "backward_reconstruct");
    check_time(prob, t, "backward_reconstruct");
    if (t == prob.tau) {
        return {g, t, false, ""};
    }
    return BackwardReconstructor(prob).reconstruct(g, t);
}

Reconstruction reconstruct_noisy(const TimeFractionalProblem& prob, const SpectralField& g_noisy,
                                 const SourcePtr& f_noisy, double t) {
    TimeFractionalProblem noisy = prob;
    noisy.source = f_noisy;
    return backward_reconstruct(noisy, g_noisy, t);
}

SolvabilityReport solvability_diagnostic(const TimeFractionalProblem& prob, const SpectralField& g) {
    prob.validate();
    check_field(prob, g, "solvability_diagnostic");
    const ModeSet& ms = *prob.modes;
    const std::vector<double> e = decay_factors(ms, prob.alpha, prob.tau);
    const std::vector<double> f = memory_terms(prob, prob.tau);
    SolvabilityReport rep;
    rep.partial_sums.reserve(ms.size());
    CompensatedSum acc;
    for (std::size_t k : ms.eigenvalue_order()) {
        const double v = (g[k] - f[k]) / e[ms.eigen_class(k)];
        acc.add(v * v);
        rep.partial_sums.push_back(acc.value());
    }
    const std::size_t K = rep.partial_sums.size();
    const double last = rep.partial_sums.back();
    const double quarter = rep.partial_sums[std::max<std::size_t>(1, (3 * K) / 4) - 1];
    rep.tail_growth = last > 0.0 ? (last - quarter) / last : 0.0;
    rep.classification = rep.tail_growth > kGrowthThreshold ? Growth::growing : Growth::bounded;
    return rep;
}

const char* to_string(Growth g) { return g == Growth::bounded ? "bounded" : "growing"; }

double amplification_factor(double lambda, double tau, double alpha) {
    if (!(tau > 0.0)) {
        throw DomainError("amplification_factor: tau must be positive");
    }
    if (!(lambda >= 0.0)) {
        throw DomainError("amplification_factor: eigenvalue must be non-negative");
    }
    const double e = mittag_leffler(alpha, 1.0, -lambda * std::pow(tau, alpha));
    if (e == 0.0) {
        throw NumericalError("amplification_factor: E_{alpha,1} underflows at lambda = " + fmt(lambda));
    }
    return 1.0 / e;
}

double amplification_factor(const Mode& mode, double tau, double alpha) {
    return amplification_factor(eigenvalue(mode), tau, alpha);
}

double stability_constant(const TimeFractionalProblem& prob, double t) {
    prob.validate();
    check_time(prob, t, "stability_constant");
    const ModeSet& ms = *prob.modes;
    const std::vector<double> et = decay_factors(ms, prob.alpha, t);
    const std::vector<double> eT = decay_factors(ms, prob.alpha, prob.tau);
    double k = 0.0;
    for (std::size_t c = 0; c < et.size(); ++c) {
        k = std::max(k, et[c] / eT[c]);
    }
    return k;
}

double choose_t(const RegularizationChoice& choice, double alpha, double tau) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("choose_t: alpha must lie in (0, 1)");
    }
    if (!(choice.eta > 0.0) || !std::isfinite(choice.eta)) {
        throw DomainError("choose_t: noise level eta must be positive, got " + fmt(choice.eta));
    }
    double exponent = 0.0;
    switch (choice.rule) {
        case RegularizationChoice::Rule::source_condition:
            if (!(choice.param > 0.0 && choice.param <= 1.0)) {
                throw DomainError("choose_t: source-condition exponent p must lie in (0, 1]");
            }
            exponent = 1.0 / ((choice.param + 1.0) * alpha);
            break;
        case RegularizationChoice::Rule::plain:
            if (!(choice.param > 0.0 && choice.param < 1.0)) {
                throw DomainError("choose_t: gamma must lie in (0, 1)");
            }
            exponent = (1.0 - choice.param) / alpha;
            break;
        case RegularizationChoice::Rule::paper_table:
            exponent = 1.0 / (2.0 * alpha);
            break;
    }
    const double t = std::pow(choice.eta, exponent);
    if (!(t < tau)) {
        throw ParameterChoiceError("choose_t: eta = " + fmt(choice.eta) + " gives t = " + fmt(t) +
                                   " >= tau = " + fmt(tau) + "; reduce eta or change the rule");
    }
    return t;
}

}  // namespace fracback
