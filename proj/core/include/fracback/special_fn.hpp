#pragma once

namespace fracback {

// Argument triple for E_{alpha,beta}(x) on the non-positive real axis.
struct MLQuery {
    double alpha = 1.0;  // in (0, 1]
    double beta = 1.0;   // > 0
    double x = 0.0;      // <= 0
};

// Throws DomainError naming the violated constraint.
void validate(const MLQuery& q);

// Gamma function. Throws DomainError at non-positive integers and
// OverflowError when the result exceeds the double range (x > ~171.62).
double gamma_fn(double x);

// 1/Gamma(x); an entire function, zero at the poles of Gamma.
double rgamma(double x);

// Mittag-Leffler function E_{alpha,beta}(x), x <= 0.
// Throws DomainError for invalid queries and NumericalError when no
// evaluation route reaches the accuracy target.
double mittag_leffler(const MLQuery& q);

inline double mittag_leffler(double alpha, double beta, double x) {
    return mittag_leffler(MLQuery{alpha, beta, x});
}

// Empirical range of E_{alpha,1}(-x) * Gamma(1-alpha) * (1+x) over a
// logarithmic grid on [x_lo, x_hi]. Requires 0 < alpha < 1.
struct MLEnvelope {
    double r_min = 0.0;
    double r_max = 0.0;
};
MLEnvelope ml_two_sided_envelope(double alpha, double x_lo, double x_hi, int points);

// sup over a logarithmic grid on [0, x_hi] of (1+x) * E_{alpha,alpha+1}(-x).
double ml_decay_bound(double alpha, double x_hi, int points);

}  // namespace fracback
