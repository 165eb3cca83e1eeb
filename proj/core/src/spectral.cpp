#include "fracback/spectral.hpp"

#include "fracback/errors.hpp"
#include "fracback/format.hpp"
#include "fracback/summation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace fracback {

namespace {

constexpr double kPi = std::numbers::pi;

void check_point(const Point& p, bool two_d) {
    const bool in_x = p.x >= 0.0 && p.x <= kPi;
    const bool in_y = !two_d || (p.y >= 0.0 && p.y <= kPi);
    if (!in_x || !in_y) {
        std::ostringstream os;
        os << "eigenfunction_eval: point (" << p.x;
        if (two_d) {
            os << ", " << p.y;
        }
        os << ") lies outside [0, pi]^" << (two_d ? 2 : 1);
        throw DomainError(os.str());
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) {
        out.push_back(cur);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

int parse_index(const std::string& s, int line_no) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size() || v < 1) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw IoError("read_csv: bad mode index '" + s + "' on line " + std::to_string(line_no));
    }
}

}  // namespace

double eigenvalue(const Mode& mode) {
    return static_cast<double>(mode.m) * mode.m + static_cast<double>(mode.n) * mode.n;
}

double eigenfunction_eval(const Mode& mode, const Point& p) {
    const bool two_d = mode.n != 0;
    check_point(p, two_d);
    if (two_d) {
        return (2.0 / kPi) * std::sin(mode.m * p.x) * std::sin(mode.n * p.y);
    }
    return std::sqrt(2.0 / kPi) * std::sin(mode.m * p.x);
}

ModeSet::ModeSet(int dimension, int truncation) : dim_(dimension), M_(truncation) {
    if (dimension != 1 && dimension != 2) {
        throw DomainError("ModeSet: dimension must be 1 or 2");
    }
    if (truncation < 1) {
        throw DomainError("ModeSet: truncation must be >= 1");
    }
    if (dim_ == 1) {
        for (int m = 1; m <= M_; ++m) {
            modes_.push_back({m, 0});
        }
    } else {
        for (int m = 1; m <= M_; ++m) {
            for (int n = 1; n <= M_; ++n) {
                modes_.push_back({m, n});
            }
        }
    }
    lambda_.reserve(modes_.size());
    for (const Mode& md : modes_) {
        lambda_.push_back(fracback::eigenvalue(md));
    }
    distinct_ = lambda_;
    std::sort(distinct_.begin(), distinct_.end());
    distinct_.erase(std::unique(distinct_.begin(), distinct_.end()), distinct_.end());
    cls_.reserve(modes_.size());
    for (double l : lambda_) {
        cls_.push_back(static_cast<std::size_t>(
            std::lower_bound(distinct_.begin(), distinct_.end(), l) - distinct_.begin()));
    }
}

std::shared_ptr<const ModeSet> ModeSet::create(int dimension, int truncation) {
    return std::make_shared<const ModeSet>(dimension, truncation);
}

double ModeSet::eigenfunction(std::size_t k, const Point& p) const {
    return eigenfunction_eval(mode(k), p);
}

std::size_t ModeSet::index_of(int m, int n) const {
    const bool ok = dim_ == 1 ? (m >= 1 && m <= M_ && n == 0)
                              : (m >= 1 && m <= M_ && n >= 1 && n <= M_);
    if (!ok) {
        throw DomainError("ModeSet: mode (" + std::to_string(m) + "," + std::to_string(n) +
                          ") is not in the truncated set");
    }
    return dim_ == 1 ? static_cast<std::size_t>(m - 1)
                     : static_cast<std::size_t>(m - 1) * M_ + static_cast<std::size_t>(n - 1);
}

std::vector<std::size_t> ModeSet::eigenvalue_order() const {
    std::vector<std::size_t> idx(modes_.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        idx[k] = k;
    }
    std::stable_sort(idx.begin(), idx.end(),
                     [this](std::size_t a, std::size_t b) { return lambda_[a] < lambda_[b]; });
    return idx;
}

SpectralField::SpectralField(ModeSetPtr modes) : modes_(std::move(modes)) {
    if (!modes_) {
        throw DomainError("SpectralField: null mode set");
    }
    c_.assign(modes_->size(), 0.0);
}

SpectralField::SpectralField(ModeSetPtr modes, std::vector<double> coeffs)
    : modes_(std::move(modes)), c_(std::move(coeffs)) {
    if (!modes_) {
        throw DomainError("SpectralField: null mode set");
    }
    if (c_.size() != modes_->size()) {
        throw DomainError("SpectralField: coefficient count " + std::to_string(c_.size()) +
                          " does not match mode count " + std::to_string(modes_->size()));
    }
    for (double v : c_) {
        if (!std::isfinite(v)) {
            throw NumericalError("SpectralField: non-finite coefficient");
        }
    }
}

SpectralField SpectralField::unit(ModeSetPtr modes, std::size_t k) {
    SpectralField f(std::move(modes));
    if (k >= f.size()) {
        throw DomainError("SpectralField::unit: index out of range");
    }
    f.c_[k] = 1.0;
    return f;
}

void require_same_modes(const SpectralField& a, const SpectralField& b, const char* where) {
    if (!a.modeset().same_as(b.modeset())) {
        throw DomainError(std::string(where) + ": fields live on different mode sets");
    }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_same_modes(*this, other, "SpectralField::operator+=");
    for (std::size_t k = 0; k < c_.size(); ++k) {
        c_[k] += other.c_[k];
    }
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_same_modes(*this, other, "SpectralField::operator-=");
    for (std::size_t k = 0; k < c_.size(); ++k) {
        c_[k] -= other.c_[k];
    }
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (double& v : c_) {
        v *= s;
    }
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

Projector::Projector(ModeSetPtr modes, const QuadConfig& cfg)
    : modes_(std::move(modes)), nodes_(composite_nodes(0.0, kPi, cfg)) {
    if (!modes_) {
        throw DomainError("Projector: null mode set");
    }
    const int M = modes_->truncation();
    const std::size_t q = nodes_.x.size();
    sines_.resize(static_cast<std::size_t>(M) * q);
    for (int m = 1; m <= M; ++m) {
        for (std::size_t i = 0; i < q; ++i) {
            sines_[static_cast<std::size_t>(m - 1) * q + i] = std::sin(m * nodes_.x[i]);
        }
    }
}

SpectralField Projector::operator()(const SpatialFn& f) const {
    const std::size_t q = nodes_.x.size();
    std::vector<double> values;
    if (modes_->dimension() == 1) {
        values.resize(q);
        for (std::size_t i = 0; i < q; ++i) {
            values[i] = f(nodes_.x[i], 0.0);
        }
    } else {
        values.resize(q * q);
        for (std::size_t i = 0; i < q; ++i) {
            for (std::size_t j = 0; j < q; ++j) {
                values[i * q + j] = f(nodes_.x[i], nodes_.x[j]);
            }
        }
    }
    return from_grid(values);
}

SpectralField Projector::from_grid(const std::vector<double>& values) const {
    const std::size_t q = nodes_.x.size();
    const int M = modes_->truncation();
    const double* w = nodes_.w.data();
    for (double v : values) {
        if (std::isnan(v)) {
            throw NumericalError("project: function returned NaN");
        }
    }
    SpectralField out(modes_);
    if (modes_->dimension() == 1) {
        if (values.size() != q) {
            throw DomainError("Projector::from_grid: expected " + std::to_string(q) + " samples");
        }
        const double norm = std::sqrt(2.0 / kPi);
        for (int m = 1; m <= M; ++m) {
            const double* s = &sines_[static_cast<std::size_t>(m - 1) * q];
            CompensatedSum acc;
            for (std::size_t i = 0; i < q; ++i) {
                acc.add(w[i] * s[i] * values[i]);
            }
            out[static_cast<std::size_t>(m - 1)] = norm * acc.value();
        }
        return out;
    }
    if (values.size() != q * q) {
        throw DomainError("Projector::from_grid: expected " + std::to_string(q * q) + " samples");
    }
    // Separable reduction: x first (per column j), then y.
    std::vector<double> partial(static_cast<std::size_t>(M) * q);
    for (int m = 1; m <= M; ++m) {
        const double* s = &sines_[static_cast<std::size_t>(m - 1) * q];
        for (std::size_t j = 0; j < q; ++j) {
            CompensatedSum acc;
            for (std::size_t i = 0; i < q; ++i) {
                acc.add(w[i] * s[i] * values[i * q + j]);
            }
            partial[static_cast<std::size_t>(m - 1) * q + j] = acc.value();
        }
    }
    const double norm = 2.0 / kPi;
    std::size_t k = 0;
    for (int m = 1; m <= M; ++m) {
        const double* a = &partial[static_cast<std::size_t>(m - 1) * q];
        for (int n = 1; n <= M; ++n, ++k) {
            const double* s = &sines_[static_cast<std::size_t>(n - 1) * q];
            CompensatedSum acc;
            for (std::size_t j = 0; j < q; ++j) {
                acc.add(w[j] * s[j] * a[j]);
            }
            out[k] = norm * acc.value();
        }
    }
    return out;
}

SpectralField project(const SpatialFn& f, ModeSetPtr modes, const QuadConfig& cfg) {
    return Projector(std::move(modes), cfg)(f);
}

double synthesize(const SpectralField& field, const Point& p) {
    const ModeSet& ms = field.modeset();
    CompensatedSum acc;
    for (std::size_t k = 0; k < field.size(); ++k) {
        acc.add(field[k] * ms.eigenfunction(k, p));
    }
    return acc.value();
}

double l2_norm(const SpectralField& field) {
    CompensatedSum acc;
    for (double v : field.coeffs()) {
        acc.add(v * v);
    }
    return std::sqrt(acc.value());
}

double l2_error(const SpectralField& a, const SpectralField& b) {
    require_same_modes(a, b, "l2_error");
    CompensatedSum acc;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        acc.add(d * d);
    }
    return std::sqrt(acc.value());
}

double hp_norm(const SpectralField& field, double p) {
    if (!(p >= 0.0)) {
        throw DomainError("hp_norm: p must be >= 0");
    }
    const ModeSet& ms = field.modeset();
    CompensatedSum acc;
    for (std::size_t k = 0; k < field.size(); ++k) {
        const double wgt = std::pow(ms.eigenvalue(k), p);
        const double v = wgt * field[k];
        acc.add(v * v);
    }
    return std::sqrt(acc.value());
}

void write_csv(const SpectralField& field, std::ostream& os) {
    const ModeSet& ms = field.modeset();
    const bool two_d = ms.dimension() == 2;
    os << (two_d ? "m,n,coeff\n" : "m,coeff\n");
    for (std::size_t k = 0; k < field.size(); ++k) {
        const Mode& md = ms.mode(k);
        os << md.m << ',';
        if (two_d) {
            os << md.n << ',';
        }
        os << repr17(field[k]) << '\n';
    }
}

void write_csv(const SpectralField& field, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_csv(field, os);
    os.flush();
    if (!os) {
        throw IoError("write to '" + path + "' failed");
    }
}

SpectralField read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw IoError("read_csv: empty input");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    int dim;
    if (line == "m,n,coeff") {
        dim = 2;
    } else if (line == "m,coeff") {
        dim = 1;
    } else {
        throw IoError("read_csv: unexpected header '" + line + "'");
    }
    struct Row {
        int m, n;
        double c;
    };
    std::vector<Row> rows;
    int M = 0;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto cols = split_csv(line);
        if (static_cast<int>(cols.size()) != dim + 1) {
            throw IoError("read_csv: wrong column count on line " + std::to_string(line_no));
        }
        Row r{parse_index(cols[0], line_no), dim == 2 ? parse_index(cols[1], line_no) : 0, 0.0};
        try {
            r.c = parse_double(cols[static_cast<std::size_t>(dim)], "coeff");
        } catch (const DomainError& e) {
            throw IoError(std::string("read_csv: line ") + std::to_string(line_no) + ": " + e.what());
        }
        M = std::max({M, r.m, r.n});
        rows.push_back(r);
    }
    if (M == 0) {
        throw IoError("read_csv: no coefficient rows");
    }
    auto modes = ModeSet::create(dim, M);
    if (rows.size() != modes->size()) {
        throw IoError("read_csv: expected " + std::to_string(modes->size()) +
                      " rows for truncation " + std::to_string(M) + ", found " +
                      std::to_string(rows.size()));
    }
    std::vector<double> c(modes->size(), 0.0);
    std::vector<bool> seen(modes->size(), false);
    for (const Row& r : rows) {
        const std::size_t k = modes->index_of(r.m, r.n);
        if (seen[k]) {
            throw IoError("read_csv: duplicate mode (" + std::to_string(r.m) + "," +
                          std::to_string(r.n) + ")");
        }
        seen[k] = true;
        c[k] = r.c;
    }
    return SpectralField(modes, std::move(c));
}

SpectralField read_csv_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return read_csv(is);
}

}  // namespace fracback
