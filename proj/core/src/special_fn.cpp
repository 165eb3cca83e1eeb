#include "fracback/special_fn.hpp"

#include "fracback/errors.hpp"
#include "fracback/summation.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace fracback {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kGammaMaxArg = 171.62437695630271;

// Regions in r = z^(1/alpha): power series below, asymptotic series above,
// integral representation in between.
constexpr double kSeriesMaxR = 4.0;
constexpr double kAsymptoticMinR = 50.0;
// Kummer series for alpha == 1 up to this |x|.
constexpr double kKummerMaxZ = 50.0;

std::string describe(double alpha, double beta, double z) {
    std::ostringstream os;
    os.precision(17);
    os << "E_{" << alpha << "," << beta << "}(" << -z << ")";
    return os.str();
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// log|1/Gamma(x)| and its sign; sign == 0 at the poles of Gamma.
struct LogRgamma {
    double log_abs;
    int sign;
};

LogRgamma log_rgamma(double x) {
    if (is_nonpositive_integer(x)) {
        return {-std::numeric_limits<double>::infinity(), 0};
    }
    if (x > 0.0) {
        return {-std::lgamma(x), 1};
    }
    // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    const double s = boost::math::sin_pi(x);
    return {std::lgamma(1.0 - x) + std::log(std::fabs(s)) - std::log(kPi), s > 0 ? 1 : -1};
}

double ml_series(double alpha, double beta, double z) {
    CompensatedSum sum;
    double prev_abs = std::numeric_limits<double>::infinity();
    const double log_z = std::log(z);
    for (int k = 0; k < 4000; ++k) {
        const double arg = alpha * k + beta;
        double mag;
        if (arg < 170.0) {
            mag = std::pow(z, k) / std::tgamma(arg);
        } else {
            mag = std::exp(k * log_z - std::lgamma(arg));
        }
        const double term = (k % 2 == 0) ? mag : -mag;
        sum.add(term);
        const bool past_peak = mag <= prev_abs;
        prev_abs = mag;
        if (k > 0 && past_peak && mag <= 1e-17 * std::fabs(sum.value())) {
            return sum.value();
        }
        if (k > 0 && mag == 0.0) {
            return sum.value();
        }
    }
    throw NumericalError("mittag_leffler: power series did not converge for " +
                         describe(alpha, beta, z));
}

// Optimally truncated asymptotic expansion
//   E_{a,b}(-z) ~ sum_{k>=1} (-1)^{k+1} z^{-k} / Gamma(b - a k).
// Returns NaN when the smallest term is too large to meet the target.
double ml_asymptotic(double alpha, double beta, double z) {
    CompensatedSum sum;
    const double log_z = std::log(z);
    double min_env = std::numeric_limits<double>::infinity();
    double prev_env = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 4000; ++k) {
        const double arg = beta - alpha * k;
        const LogRgamma rg = log_rgamma(arg);
        // Smooth envelope of |term|, free of the zeros of sin(pi x).
        const double log_env = arg > 0.0 ? rg.log_abs - k * log_z
                                         : std::lgamma(1.0 - arg) - std::log(kPi) - k * log_z;
        const double env = std::exp(log_env);
        if (arg < -1.0 && env > prev_env) {
            // Envelope passed its minimum: further terms only diverge.
            if (min_env <= 1e-15 * std::fabs(sum.value())) {
                return sum.value();
            }
            return std::numeric_limits<double>::quiet_NaN();
        }
        prev_env = env;
        min_env = std::min(min_env, env);
        if (rg.sign != 0) {
            const double mag = std::exp(rg.log_abs - k * log_z);
            const double term = ((k % 2 == 1) ? 1.0 : -1.0) * rg.sign * mag;
            sum.add(term);
        }
        const double s = std::fabs(sum.value());
        if (s > 0.0 && env <= 1e-17 * s) {
            return sum.value();
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// Integral representation valid for 0 < alpha < 1, 0 < beta < 1 + alpha
// (used for beta <= 1 only):
//   E_{a,b}(-z) = 1/(a pi) int_0^inf chi^{(1-b)/a} exp(-chi^{1/a})
//                 (chi sin(pi(1-b)) + z sin(pi(1-b+a))) / (chi^2 + 2 chi z cos(pi a) + z^2) dchi
double ml_integral(double alpha, double beta, double z) {
    const double s1 = boost::math::sin_pi(1.0 - beta);
    const double s2 = boost::math::sin_pi(1.0 - beta + alpha);
    const double c = std::cos(kPi * alpha);
    const double p = (1.0 - beta) / alpha;
    const double inv_a = 1.0 / alpha;

    auto kernel = [&](double chi) {
        if (chi <= 0.0) {
            return 0.0;
        }
        const double decay = std::exp(-std::pow(chi, inv_a));
        if (decay == 0.0) {
            return 0.0;
        }
        const double num = chi * s1 + z * s2;
        const double den = chi * chi + 2.0 * chi * z * c + z * z;
        return std::pow(chi, p) * decay * num / den;
    };

    // exp(-chi^(1/a)) is below double precision beyond chi = 745^a.
    const double chi_max = std::pow(745.0, alpha);
    const double split = alpha > 0.5 ? -z * c : z;

    boost::math::quadrature::tanh_sinh<double> integrator(12);
    const double tol = 1e-15;
    double total = 0.0;
    double err_total = 0.0;
    double l1_total = 0.0;
    auto piece = [&](double a, double b) {
        if (!(b > a)) {
            return;
        }
        double err = 0.0;
        double l1 = 0.0;
        // Two-argument form: xc is the signed distance to the nearer endpoint.
        auto f = [&](double, double xc) { return kernel(xc < 0.0 ? a - xc : b - xc); };
        total += integrator.integrate(f, a, b, tol, &err, &l1);
        err_total += err * l1;
        l1_total += l1;
    };
    if (split > 0.0 && split < chi_max) {
        piece(0.0, split);
        piece(split, chi_max);
    } else {
        piece(0.0, chi_max);
    }
    const double value = total / (alpha * kPi);
    const double abs_err = err_total / (alpha * kPi);
    if (!std::isfinite(value) || abs_err > 1e-11 * std::fabs(value)) {
        std::ostringstream os;
        os.precision(3);
        os << "mittag_leffler: integral representation inaccurate for "
           << describe(alpha, beta, z) << " (estimated relative error "
           << abs_err / std::fabs(value) << ")";
        throw NumericalError(os.str());
    }
    return value;
}

double ml_alpha_one(double beta, double z) {
    if (beta == 1.0) {
        return std::exp(-z);
    }
    if (z <= kKummerMaxZ) {
        if (beta < 1.0) {
            // E_{1,b}(x) = 1/Gamma(b) + x E_{1,b+1}(x)
            return rgamma(beta) - z * ml_alpha_one(beta + 1.0, z);
        }
        // Kummer: 1F1(1; b; -z) = exp(-z) 1F1(b-1; b; z), all terms positive.
        CompensatedSum sum;
        double power = 1.0;  // z^k / k!
        for (int k = 0; k < 2000; ++k) {
            if (k > 0) {
                power *= z / k;
            }
            const double term = (beta - 1.0) / (beta - 1.0 + k) * power;
            sum.add(term);
            if (k > z && term <= 1e-17 * sum.value()) {
                return std::exp(-z) * rgamma(beta) * sum.value();
            }
        }
        throw NumericalError("mittag_leffler: Kummer series did not converge for " +
                             describe(1.0, beta, z));
    }
    const double v = ml_asymptotic(1.0, beta, z);
    if (std::isnan(v)) {
        throw NumericalError("mittag_leffler: asymptotic series inaccurate for " +
                             describe(1.0, beta, z));
    }
    return v;
}

double ml_positive(double alpha, double beta, double z) {
    if (z == 0.0) {
        return rgamma(beta);
    }
    if (alpha == 1.0) {
        return ml_alpha_one(beta, z);
    }
    const double r = std::pow(z, 1.0 / alpha);
    if (r <= kSeriesMaxR) {
        return ml_series(alpha, beta, z);
    }
    if (r >= kAsymptoticMinR) {
        const double v = ml_asymptotic(alpha, beta, z);
        if (!std::isnan(v)) {
            return v;
        }
    }
    if (beta > 1.0) {
        // E_{a,b}(-z) = (1/Gamma(b-a) - E_{a,b-a}(-z)) / z; keeps the
        // integrand of the integral route bounded at chi = 0.
        return (rgamma(beta - alpha) - ml_positive(alpha, beta - alpha, z)) / z;
    }
    return ml_integral(alpha, beta, z);
}

}  // namespace

void validate(const MLQuery& q) {
    if (!(q.alpha > 0.0 && q.alpha <= 1.0)) {
        throw DomainError("mittag_leffler: alpha must lie in (0, 1], got " + std::to_string(q.alpha));
    }
    if (!(q.beta > 0.0) || !std::isfinite(q.beta)) {
        throw DomainError("mittag_leffler: beta must be a finite positive number, got " +
                          std::to_string(q.beta));
    }
    if (!(q.x <= 0.0) || !std::isfinite(q.x)) {
        throw DomainError("mittag_leffler: x must be finite and <= 0, got " + std::to_string(q.x));
    }
}

double gamma_fn(double x) {
    if (std::isnan(x)) {
        throw DomainError("gamma_fn: argument is NaN");
    }
    if (is_nonpositive_integer(x)) {
        throw DomainError("gamma_fn: pole at non-positive integer " + std::to_string(x));
    }
    if (x > kGammaMaxArg) {
        throw OverflowError("gamma_fn: result overflows for x = " + std::to_string(x));
    }
    return std::tgamma(x);
}

double rgamma(double x) {
    if (std::isnan(x)) {
        throw DomainError("rgamma: argument is NaN");
    }
    if (is_nonpositive_integer(x)) {
        return 0.0;
    }
    if (x > 0.0 && x < 170.0) {
        return 1.0 / std::tgamma(x);
    }
    const LogRgamma rg = log_rgamma(x);
    return rg.sign * std::exp(rg.log_abs);
}

double mittag_leffler(const MLQuery& q) {
    validate(q);
    const double v = ml_positive(q.alpha, q.beta, -q.x);
    if (!std::isfinite(v)) {
        throw NumericalError("mittag_leffler: non-finite result for " +
                             describe(q.alpha, q.beta, -q.x));
    }
    return v;
}

MLEnvelope ml_two_sided_envelope(double alpha, double x_lo, double x_hi, int points) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("ml_two_sided_envelope: alpha must lie in (0, 1)");
    }
    if (!(x_lo > 0.0 && x_hi > x_lo) || points < 2) {
        throw DomainError("ml_two_sided_envelope: need 0 < x_lo < x_hi and points >= 2");
    }
    const double g = std::tgamma(1.0 - alpha);
    MLEnvelope env{std::numeric_limits<double>::infinity(), 0.0};
    const double step = std::log(x_hi / x_lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        const double x = x_lo * std::exp(step * i);
        const double r = mittag_leffler(alpha, 1.0, -x) * g * (1.0 + x);
        env.r_min = std::min(env.r_min, r);
        env.r_max = std::max(env.r_max, r);
    }
    return env;
}

double ml_decay_bound(double alpha, double x_hi, int points) {
    if (!(alpha > 0.0 && alpha <= 1.0) || !(x_hi > 0.0) || points < 2) {
        throw DomainError("ml_decay_bound: need alpha in (0, 1], x_hi > 0, points >= 2");
    }
    double sup = rgamma(alpha + 1.0);
    const double x_lo = 1e-6;
    const double step = std::log(x_hi / x_lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        const double x = x_lo * std::exp(step * i);
        sup = std::max(sup, (1.0 + x) * mittag_leffler(alpha, alpha + 1.0, -x));
    }
    return sup;
}

}  // namespace fracback
