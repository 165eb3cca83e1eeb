#include "fracback/errors.hpp"
#include "fracback/quadrature.hpp"

#include "oracle/mpfr_oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace fracback;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite rule for int_0^pi sin from oracle nodes, accumulated in long double.
double composite_reference(int n, int panels) {
    const oracle::Legendre ref = oracle::legendre_rule(n);
    const long double h = static_cast<long double>(kPi) / panels;
    long double sum = 0.0L;
    for (int p = 0; p < panels; ++p) {
        for (int i = 0; i < n; ++i) {
            const long double x = h * (p + 0.5L * (ref.nodes[i] + 1.0L));
            sum += 0.5L * h * ref.weights[i] * std::sin(x);
        }
    }
    return static_cast<double>(sum);
}

}  // namespace

TEST(GaussLegendre, FourPointNodes) {
    const QuadRule r = gauss_legendre(4);
    ASSERT_EQ(r.n, 4);
    EXPECT_DOUBLE_EQ(r.nodes[0], -0.86113631159405258);
    EXPECT_DOUBLE_EQ(r.nodes[1], -0.33998104358485626);
    EXPECT_DOUBLE_EQ(r.nodes[2], 0.33998104358485626);
    EXPECT_DOUBLE_EQ(r.nodes[3], 0.86113631159405258);
    EXPECT_DOUBLE_EQ(r.weights[0], 0.34785484513745386);
    EXPECT_DOUBLE_EQ(r.weights[1], 0.65214515486254614);
}

TEST(GaussLegendre, TwoPoint) {
    const QuadRule r = gauss_legendre(2);
    EXPECT_DOUBLE_EQ(r.nodes[1], 1.0 / std::sqrt(3.0));
    EXPECT_DOUBLE_EQ(r.nodes[0], -1.0 / std::sqrt(3.0));
    EXPECT_DOUBLE_EQ(r.weights[0], 1.0);
    EXPECT_DOUBLE_EQ(r.weights[1], 1.0);
}

TEST(GaussLegendre, TablesMatchRootFinder) {
    for (int n = 2; n <= 8; ++n) {
        const QuadRule r = gauss_legendre(n);
        const oracle::Legendre ref = oracle::legendre_rule(n);
        ASSERT_EQ(r.nodes.size(), static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            EXPECT_NEAR(r.nodes[i], ref.nodes[i], 2e-16) << n << ':' << i;
            EXPECT_NEAR(r.weights[i], ref.weights[i], 4e-16) << n << ':' << i;
        }
    }
}

TEST(GaussLegendre, Invariants) {
    for (int n = 2; n <= 8; ++n) {
        const QuadRule r = gauss_legendre(n);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            EXPECT_GT(r.weights[i], 0.0);
            EXPECT_GT(r.nodes[i], -1.0);
            EXPECT_LT(r.nodes[i], 1.0);
            if (i > 0) {
                EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
            }
            EXPECT_EQ(r.nodes[i], -r.nodes[n - 1 - i]);
            sum += r.weights[i];
        }
        EXPECT_NEAR(sum, 2.0, 1e-14);
    }
}

TEST(GaussLegendre, PolynomialExactness) {
    for (int n = 2; n <= 8; ++n) {
        const QuadRule r = gauss_legendre(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double q = 0.0;
            for (int i = 0; i < n; ++i) {
                q += r.weights[i] * std::pow(r.nodes[i], k);
            }
            const double want = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
            EXPECT_NEAR(q, want, 1e-12) << n << ' ' << k;
        }
    }
}

TEST(GaussLegendre, OutOfRange) {
    EXPECT_THROW(gauss_legendre(1), DomainError);
    EXPECT_THROW(gauss_legendre(9), DomainError);
    EXPECT_THROW(make_quad(4, 0), DomainError);
}

TEST(Integrate1d, Examples) {
    const QuadConfig cfg;
    EXPECT_NEAR(integrate_1d([](double) { return 1.0; }, 0.0, kPi, cfg), kPi, 1e-14);
    EXPECT_NEAR(integrate_1d([](double x) { return std::pow(x, 7); }, -1.0, 1.0, make_quad(4, 1)), 0.0, 1e-15);
}

// The 4-point rule on 4 panels misses int_0^pi sin by 1.66e-10, so compare
// with the same rule built from the root-finder's nodes in long double.
TEST(Integrate1d, SineMatchesReferenceRule) {
    const double got = integrate_1d([](double x) { return std::sin(x); }, 0.0, kPi, QuadConfig{});
    EXPECT_NEAR(got, composite_reference(4, 4), 1e-15);
    EXPECT_NEAR(got, 2.0, 2e-10);
    EXPECT_NEAR(integrate_1d([](double x) { return std::sin(x); }, 0.0, kPi, make_quad(4, 8)), 2.0, 1e-12);
}

TEST(Integrate1d, Errors) {
    const QuadConfig cfg;
    EXPECT_THROW(integrate_1d([](double) { return 1.0; }, 1.0, 0.0, cfg), DomainError);
    EXPECT_THROW(integrate_1d([](double) { return std::nan(""); }, 0.0, 1.0, cfg), NumericalError);
}

TEST(Integrate2d, Examples) {
    const QuadConfig cfg;
    EXPECT_NEAR(integrate_2d([](double, double) { return 1.0; }, cfg), kPi * kPi, 1e-13);
    const double one_d = composite_reference(4, 4);
    EXPECT_NEAR(integrate_2d([](double x, double y) { return std::sin(x) * std::sin(y); }, cfg), one_d * one_d,
                1e-14);
    EXPECT_NEAR(integrate_2d([](double x, double y) { return std::sin(x) * std::sin(y); }, make_quad(4, 8)), 4.0,
                1e-11);
    EXPECT_NEAR(integrate_2d(
                    [](double x, double y) {
                        const double s = std::sin(x) * std::sin(y);
                        return s * s;
                    },
                    cfg),
                kPi * kPi / 4.0, 1e-10);
}

TEST(CompositeRule, RefinementDoesNotIncreaseError) {
    struct Case {
        std::function<double(double)> f;
        double a, b, exact;
    };
    const Case cases[] = {
        {[](double) { return 1.0; }, 0.0, kPi, kPi},
        {[](double x) { return std::sin(x); }, 0.0, kPi, 2.0},
        {[](double x) { return std::exp(-x) * std::cos(3 * x); }, 0.0, 2.0,
         (1.0 - std::exp(-2.0) * (std::cos(6.0) - 3 * std::sin(6.0))) / 10.0},
    };
    for (const Case& c : cases) {
        double prev = std::abs(integrate_1d(c.f, c.a, c.b, make_quad(4, 1)) - c.exact);
        for (int N = 2; N <= 64; N *= 2) {
            const double err = std::abs(integrate_1d(c.f, c.a, c.b, make_quad(4, N)) - c.exact);
            EXPECT_LE(err, 1.01 * prev + 1e-15) << N;
            prev = err;
        }
    }
}

TEST(Singular, ConstantIntegrand) {
    for (double a : {0.2, 0.5, 0.8}) {
        for (double t : {1e-3, 0.3, 1.0}) {
            const double exact = std::pow(t, a) / a;
            const double graded = integrate_singular([](double) { return 1.0; }, t, a,
                                                     make_quad(4, 4, SingularMode::graded_substitution));
            EXPECT_NEAR(graded, exact, 1e-12 * exact);
            const double direct = integrate_singular([](double) { return 1.0; }, t, a, QuadConfig{});
            // the plain rule underestimates a weakly singular integral but stays finite
            EXPECT_TRUE(std::isfinite(direct));
            EXPECT_LT(direct, exact);
            EXPECT_GT(direct, 0.5 * exact);
        }
    }
}

TEST(Singular, ClassicalLimit) {
    const double want = 1.0 - std::exp(-1.0);
    for (SingularMode m : {SingularMode::paper_direct, SingularMode::graded_substitution}) {
        EXPECT_NEAR(integrate_singular([](double s) { return std::exp(-s); }, 1.0, 1.0, make_quad(4, 4, m)), want,
                    1e-10);
    }
}

TEST(Singular, ModesAgreeWithoutSingularity) {
    auto g = [](double s) { return std::cos(2 * s) + s * s; };
    for (double t : {0.1, 0.7, 1.0}) {
        const double a = integrate_singular(g, t, 1.0, make_quad(4, 4, SingularMode::paper_direct));
        const double b = integrate_singular(g, t, 1.0, make_quad(4, 4, SingularMode::graded_substitution));
        EXPECT_NEAR(a, b, 1e-10);
    }
}

TEST(Singular, VanishingInterval) {
    double prev = 1.0;
    for (double t : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const double v = integrate_singular([](double s) { return 1.0 + s; }, t, 0.5, QuadConfig{});
        EXPECT_LT(v, prev);
        prev = v;
    }
    EXPECT_LT(prev, 1e-3);
    EXPECT_THROW(integrate_singular([](double) { return 1.0; }, 0.0, 0.5, QuadConfig{}), DomainError);
}

TEST(Singular, NodesStayBelowT) {
    for (SingularMode m : {SingularMode::paper_direct, SingularMode::graded_substitution}) {
        const NodeSet ns = singular_nodes(0.5, 0.3, make_quad(4, 8, m));
        for (std::size_t i = 0; i < ns.x.size(); ++i) {
            EXPECT_GE(ns.x[i], 0.0);
            EXPECT_LT(ns.x[i], 0.5);
            EXPECT_GT(ns.w[i], 0.0);
            if (i > 0) {
                EXPECT_LT(ns.x[i - 1], ns.x[i]);
            }
        }
    }
}
