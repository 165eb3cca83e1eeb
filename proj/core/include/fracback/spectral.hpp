#pragma once

#include "fracback/quadrature.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace fracback {

// Eigen-index of the Dirichlet Laplacian on (0, pi)^d.
// n == 0 marks a one-dimensional mode.
struct Mode {
    int m = 1;
    int n = 0;

    friend bool operator==(const Mode&, const Mode&) = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// m^2 + n^2 (d = 2) or m^2 (d = 1).
double eigenvalue(const Mode& mode);

// (2/pi) sin(mx) sin(ny), or sqrt(2/pi) sin(mx) in one dimension.
// Throws DomainError for points outside the closed box.
double eigenfunction_eval(const Mode& mode, const Point& p);

// Ordered modes with eigenvalues and eigenfunctions.
class EigenSystem {
public:
    virtual ~EigenSystem() = default;
    virtual int dimension() const = 0;
    virtual std::size_t size() const = 0;
    virtual const Mode& mode(std::size_t k) const = 0;
    virtual double eigenvalue(std::size_t k) const = 0;
    virtual double eigenfunction(std::size_t k, const Point& p) const = 0;
};

// Truncated box eigen-system: m, n in 1..M, lexicographic order.
class ModeSet final : public EigenSystem {
public:
    ModeSet(int dimension, int truncation);

    static std::shared_ptr<const ModeSet> create(int dimension, int truncation);

    int dimension() const override { return dim_; }
    std::size_t size() const override { return modes_.size(); }
    const Mode& mode(std::size_t k) const override { return modes_.at(k); }
    double eigenvalue(std::size_t k) const override { return lambda_.at(k); }
    double eigenfunction(std::size_t k, const Point& p) const override;

    int truncation() const { return M_; }
    const std::vector<Mode>& modes() const { return modes_; }
    const std::vector<double>& eigenvalues() const { return lambda_; }
    std::size_t index_of(int m, int n = 0) const;

    // Distinct eigenvalues in ascending order and, per mode, the position
    // of its eigenvalue in that list.
    const std::vector<double>& distinct_eigenvalues() const { return distinct_; }
    std::size_t eigen_class(std::size_t k) const { return cls_.at(k); }

    // Mode indices stably sorted by eigenvalue.
    std::vector<std::size_t> eigenvalue_order() const;

    bool same_as(const ModeSet& other) const { return dim_ == other.dim_ && M_ == other.M_; }

private:
    int dim_;
    int M_;
    std::vector<Mode> modes_;
    std::vector<double> lambda_;
    std::vector<double> distinct_;
    std::vector<std::size_t> cls_;
};

using ModeSetPtr = std::shared_ptr<const ModeSet>;

// Coefficients of a function in the orthonormal sine basis.
class SpectralField {
public:
    explicit SpectralField(ModeSetPtr modes);
    SpectralField(ModeSetPtr modes, std::vector<double> coeffs);

    static SpectralField unit(ModeSetPtr modes, std::size_t k);

    const ModeSet& modeset() const { return *modes_; }
    const ModeSetPtr& modeset_ptr() const { return modes_; }
    std::size_t size() const { return c_.size(); }

    double operator[](std::size_t k) const { return c_[k]; }
    double& operator[](std::size_t k) { return c_[k]; }
    double coeff(int m, int n = 0) const { return c_[modes_->index_of(m, n)]; }
    const std::vector<double>& coeffs() const { return c_; }

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);

private:
    ModeSetPtr modes_;
    std::vector<double> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// Throws DomainError unless both fields live on the same mode set.
void require_same_modes(const SpectralField& a, const SpectralField& b, const char* where);

using SpatialFn = std::function<double(double x, double y)>;

// Quadrature projection onto a mode set. The sine tables for the
// composite nodes are computed once; each coefficient is reduced in a
// fixed order so results do not depend on the caller's threading.
class Projector {
public:
    Projector(ModeSetPtr modes, const QuadConfig& cfg);

    // In one dimension f is called with y = 0.
    SpectralField operator()(const SpatialFn& f) const;

    // Project samples f(x_i, y_j) given row-major (i over x, j over y)
    // on the composite grid returned by nodes(); length nodes().x.size() in 1D.
    SpectralField from_grid(const std::vector<double>& values) const;

    const NodeSet& nodes() const { return nodes_; }
    const ModeSetPtr& modeset_ptr() const { return modes_; }

private:
    ModeSetPtr modes_;
    NodeSet nodes_;
    std::vector<double> sines_;  // sin(m x_i), m-major
};

SpectralField project(const SpatialFn& f, ModeSetPtr modes, const QuadConfig& cfg);

double synthesize(const SpectralField& field, const Point& p);

double l2_norm(const SpectralField& field);
double l2_error(const SpectralField& a, const SpectralField& b);
// sqrt(sum lambda_k^(2p) c_k^2), p >= 0 real.
double hp_norm(const SpectralField& field, double p);

// CSV with header "m,n,coeff" (d = 2) or "m,coeff" (d = 1), rows in
// mode-set order, 17 significant digits.
void write_csv(const SpectralField& field, std::ostream& os);
void write_csv(const SpectralField& field, const std::string& path);
// Reads a complete field; dimension and truncation are inferred.
SpectralField read_csv(std::istream& is);
SpectralField read_csv_file(const std::string& path);

}  // namespace fracback
