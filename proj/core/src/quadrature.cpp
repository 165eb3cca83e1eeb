#include "fracback/quadrature.hpp"

#include "fracback/errors.hpp"
#include "fracback/summation.hpp"

#include <array>
#include <cmath>
#include <string>

namespace fracback {

namespace {

struct Table {
    std::array<double, 8> x;
    std::array<double, 8> w;
};

// Positive half of each rule, descending in x; the rule is symmetric.
constexpr Table kTables[7] = {
    // n = 2
    {{5.7735026918962576e-1}, {1.0000000000000000}},
    // n = 3
    {{7.7459666924148338e-1, 0.0}, {0.55555555555555556, 0.88888888888888889}},
    // n = 4
    {{8.6113631159405258e-1, 3.3998104358485626e-1}, {0.34785484513745386, 0.65214515486254614}},
    // n = 5
    {{9.0617984593866399e-1, 5.3846931010568309e-1, 0.0},
     {0.23692688505618909, 0.47862867049936647, 0.56888888888888889}},
    // n = 6
    {{9.3246951420315203e-1, 6.6120938646626451e-1, 2.3861918608319691e-1},
     {0.17132449237917035, 0.36076157304813861, 0.46791393457269105}},
    // n = 7
    {{9.4910791234275852e-1, 7.4153118559939444e-1, 4.0584515137739717e-1, 0.0},
     {0.12948496616886969, 0.27970539148927667, 0.38183005050511894, 0.41795918367346939}},
    // n = 8
    {{9.6028985649753623e-1, 7.9666647741362674e-1, 5.2553240991632899e-1, 1.8343464249564980e-1},
     {0.10122853629037626, 0.22238103445337447, 0.31370664587788729, 0.36268378337836198}},
};

void check_finite(double v, const char* where) {
    if (std::isnan(v)) {
        throw NumericalError(std::string(where) + ": integrand returned NaN");
    }
}

}  // namespace

QuadRule gauss_legendre(int n) {
    if (n < 2 || n > 8) {
        throw DomainError("gauss_legendre: point count must lie in [2, 8], got " + std::to_string(n));
    }
    const Table& t = kTables[n - 2];
    QuadRule rule;
    rule.n = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        rule.nodes[i] = -t.x[i];
        rule.weights[i] = t.w[i];
        rule.nodes[n - 1 - i] = t.x[i];
        rule.weights[n - 1 - i] = t.w[i];
    }
    return rule;
}

void QuadConfig::validate() const {
    if (subintervals < 1) {
        throw DomainError("QuadConfig: subinterval count must be >= 1, got " +
                          std::to_string(subintervals));
    }
    if (rule.n < 1 || rule.nodes.size() != static_cast<std::size_t>(rule.n) ||
        rule.weights.size() != rule.nodes.size()) {
        throw DomainError("QuadConfig: malformed quadrature rule");
    }
}

QuadConfig make_quad(int points, int subintervals, SingularMode mode) {
    QuadConfig cfg{gauss_legendre(points), subintervals, mode};
    cfg.validate();
    return cfg;
}

NodeSet composite_nodes(double a, double b, const QuadConfig& cfg) {
    cfg.validate();
    if (!(a <= b)) {
        throw DomainError("composite_nodes: require a <= b");
    }
    const int n = cfg.rule.n;
    const int N = cfg.subintervals;
    NodeSet out;
    out.x.reserve(static_cast<std::size_t>(n) * N);
    out.w.reserve(static_cast<std::size_t>(n) * N);
    const double h = (b - a) / N;
    for (int i = 0; i < N; ++i) {
        const double lo = a + i * h;
        const double mid = lo + 0.5 * h;
        for (int j = 0; j < n; ++j) {
            out.x.push_back(mid + 0.5 * h * cfg.rule.nodes[j]);
            out.w.push_back(0.5 * h * cfg.rule.weights[j]);
        }
    }
    return out;
}

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadConfig& cfg) {
    if (a > b) {
        throw DomainError("integrate_1d: lower limit exceeds upper limit");
    }
    const NodeSet ns = composite_nodes(a, b, cfg);
    CompensatedSum sum;
    for (std::size_t k = 0; k < ns.x.size(); ++k) {
        const double v = f(ns.x[k]);
        check_finite(v, "integrate_1d");
        sum.add(ns.w[k] * v);
    }
    return sum.value();
}

double integrate_2d(const std::function<double(double, double)>& f, const QuadConfig& cfg,
                    const Box& box) {
    if (box.x0 > box.x1 || box.y0 > box.y1) {
        throw DomainError("integrate_2d: malformed box");
    }
    const NodeSet nx = composite_nodes(box.x0, box.x1, cfg);
    const NodeSet ny = composite_nodes(box.y0, box.y1, cfg);
    CompensatedSum outer;
    for (std::size_t i = 0; i < nx.x.size(); ++i) {
        CompensatedSum inner;
        for (std::size_t j = 0; j < ny.x.size(); ++j) {
            const double v = f(nx.x[i], ny.x[j]);
            check_finite(v, "integrate_2d");
            inner.add(ny.w[j] * v);
        }
        outer.add(nx.w[i] * inner.value());
    }
    return outer.value();
}

NodeSet singular_nodes(double t, double alpha, const QuadConfig& cfg) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("integrate_singular: t must be positive");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("integrate_singular: alpha must lie in (0, 1]");
    }
    if (cfg.singular_mode == SingularMode::paper_direct) {
        NodeSet ns = composite_nodes(0.0, t, cfg);
        for (std::size_t k = 0; k < ns.x.size(); ++k) {
            ns.w[k] *= std::pow(t - ns.x[k], alpha - 1.0);
        }
        return ns;
    }
    // u = (t-s)^alpha on [0, t^alpha]: int g(t - u^(1/alpha)) du / alpha.
    // Emitted with s ascending (u descending) to match the direct mode.
    const NodeSet nu = composite_nodes(0.0, std::pow(t, alpha), cfg);
    NodeSet ns;
    const std::size_t m = nu.x.size();
    ns.x.resize(m);
    ns.w.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t src = m - 1 - k;
        ns.x[k] = t - std::pow(nu.x[src], 1.0 / alpha);
        ns.w[k] = nu.w[src] / alpha;
    }
    return ns;
}

double integrate_singular(const std::function<double(double)>& g, double t, double alpha,
                          const QuadConfig& cfg) {
    const NodeSet ns = singular_nodes(t, alpha, cfg);
    CompensatedSum sum;
    for (std::size_t k = 0; k < ns.x.size(); ++k) {
        const double v = g(ns.x[k]);
        check_finite(v, "integrate_singular");
        sum.add(ns.w[k] * v);
    }
    return sum.value();
}

}  // namespace fracback
