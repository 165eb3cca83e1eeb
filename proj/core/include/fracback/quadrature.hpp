#pragma once

#include <functional>
#include <vector>

namespace fracback {

// Gauss-Legendre rule on [-1, 1].
struct QuadRule {
    int n = 0;
    std::vector<double> nodes;    // strictly increasing
    std::vector<double> weights;  // positive
};

// Precomputed tables for 2 <= n <= 8 (17 significant digits).
QuadRule gauss_legendre(int n);

enum class SingularMode {
    paper_direct,         // composite rule applied to (t-s)^(alpha-1) g(s)
    graded_substitution,  // u = (t-s)^alpha removes the singularity
};

struct QuadConfig {
    QuadRule rule = gauss_legendre(4);
    int subintervals = 4;
    SingularMode singular_mode = SingularMode::paper_direct;

    void validate() const;
};

QuadConfig make_quad(int points, int subintervals,
                     SingularMode mode = SingularMode::paper_direct);

// Abscissae and weights of a composite rule, ordered ascending over
// subintervals and then over nodes.
struct NodeSet {
    std::vector<double> x;
    std::vector<double> w;
};

NodeSet composite_nodes(double a, double b, const QuadConfig& cfg);

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadConfig& cfg);

struct Box {
    double x0 = 0.0;
    double x1 = 3.14159265358979323846;
    double y0 = 0.0;
    double y1 = 3.14159265358979323846;
};

// Tensor-product composite rule; default box is [0, pi]^2.
double integrate_2d(const std::function<double(double, double)>& f, const QuadConfig& cfg,
                    const Box& box = Box{});

// Nodes s_j in [0, t) and effective weights W_j with
//   int_0^t (t-s)^(alpha-1) g(s) ds  ~  sum_j W_j g(s_j).
// The kernel factor is folded into W_j; ordering follows the composite rule.
NodeSet singular_nodes(double t, double alpha, const QuadConfig& cfg);

double integrate_singular(const std::function<double(double)>& g, double t, double alpha,
                          const QuadConfig& cfg);

}  // namespace fracback
