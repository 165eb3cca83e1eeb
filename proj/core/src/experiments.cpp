#include "fracback/experiments.hpp"

#include "fracback/errors.hpp"
#include "fracback/format.hpp"
#include "fracback/parallel.hpp"
#include "fracback/summation.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

namespace fracback {

namespace {

constexpr double kPi = std::numbers::pi;

// Keeps the data and source noise streams apart for one user seed.
constexpr std::uint64_t kSourceSeedOffset = 0x9E3779B97F4A7C15ull;

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) {
            out += ' ';
        }
        out += shortest_repr(v[i]);
    }
    return out;
}

const char* mode_name(SingularMode m) {
    return m == SingularMode::paper_direct ? "paper" : "graded";
}

const char* noise_name(NoiseMode m) {
    return m == NoiseMode::paper_constant ? "paper_constant" : "seeded_random";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    os << text;
    os.flush();
    if (!os) {
        throw IoError("write to '" + path + "' failed");
    }
}

// Exact coefficients of the constant c: (2/pi) c (2/m)(2/n) for odd m, n.
SpectralField constant_coefficients(const ModeSetPtr& modes, double c) {
    SpectralField out(modes);
    const bool two_d = modes->dimension() == 2;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const Mode& md = modes->mode(k);
        if (md.m % 2 == 0 || (two_d && md.n % 2 == 0)) {
            continue;
        }
        out[k] = two_d ? (2.0 / kPi) * c * (2.0 / md.m) * (2.0 / md.n)
                       : std::sqrt(2.0 / kPi) * c * (2.0 / md.m);
    }
    return out;
}

TimeFractionalProblem make_problem(const ExperimentConfig& cfg, ModeSetPtr modes, SourcePtr source,
                                   double alpha) {
    TimeFractionalProblem p;
    p.alpha = alpha;
    p.tau = cfg.tau;
    p.modes = std::move(modes);
    p.source = std::move(source);
    p.quad = source_quad(cfg);
    p.temporal_subintervals = cfg.temporal_subintervals;
    p.validate();
    return p;
}

std::vector<double> sweep_levels(TableId id, const ExperimentConfig& cfg) {
    std::vector<double> levels = cfg.levels.empty() ? default_levels(id) : cfg.levels;
    std::sort(levels.begin(), levels.end(), std::greater<>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

ErrorTable run_sweep(TableId id, const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<double> levels = sweep_levels(id, cfg);
    for (double l : levels) {
        if (!(l > 0.0)) {
            throw DomainError(std::string(to_string(id)) + ": sweep levels must be positive");
        }
    }
    const std::size_t na = cfg.alphas.size();
    const std::size_t nl = levels.size();

    auto modes = ModeSet::create(2, cfg.truncation);
    SourcePtr source = std::make_shared<ProjectedSource>(paper_source, modes, source_quad(cfg));
    const QuadConfig dquad = data_quad(cfg);
    const SpectralField u0 = project(paper_initial, modes, dquad);
    const NoiseSpec spec{cfg.noise_mode, cfg.seed};
    const bool noisy_f = id != TableId::table1;
    const bool noisy_g = id == TableId::table3 || id == TableId::fig4;

    std::vector<std::unique_ptr<BackwardReconstructor>> recon(na);
    std::vector<std::optional<SpectralField>> g(na);
    parallel_for(na, cfg.threads, [&](std::size_t i) {
        recon[i] = std::make_unique<BackwardReconstructor>(make_problem(cfg, modes, source, cfg.alphas[i]));
        g[i] = recon[i]->final_value(u0);
    });

    std::vector<SourcePtr> f_eps(nl, source);
    if (noisy_f) {
        for (std::size_t j = 0; j < nl; ++j) {
            f_eps[j] = noisy_source(source, levels[j], spec);
        }
    }

    std::vector<double> err(na * nl, 0.0);
    parallel_for(na * nl, cfg.threads, [&](std::size_t cell) {
        const std::size_t j = cell / na;
        const std::size_t i = cell % na;
        const double alpha = cfg.alphas[i];
        double t = levels[j];
        if (noisy_f) {
            try {
                t = choose_t({RegularizationChoice::Rule::paper_table, 1.0, levels[j]}, alpha, cfg.tau);
            } catch (const ParameterChoiceError& e) {
                throw ParameterChoiceError(std::string(to_string(id)) + ": level " + shortest_repr(levels[j]) +
                                           " with alpha " + shortest_repr(alpha) + ": " + e.what());
            }
        }
        const SpectralField data = noisy_g ? noisy_data(*g[i], levels[j], spec, dquad) : *g[i];
        const Reconstruction rec = recon[i]->reconstruct(data, f_eps[j].get(), t);
        err[cell] = l2_error(rec.field, u0);
    });

    ErrorTable table;
    table.id = id;
    table.alphas = cfg.alphas;
    for (std::size_t j = 0; j < nl; ++j) {
        ErrorRow row;
        row.level = levels[j];
        row.errors.assign(err.begin() + static_cast<std::ptrdiff_t>(j * na),
                          err.begin() + static_cast<std::ptrdiff_t>((j + 1) * na));
        for (double e : row.errors) {
            if (!std::isfinite(e)) {
                throw NumericalError(std::string(to_string(id)) + ": non-finite error at level " +
                                     shortest_repr(levels[j]));
            }
        }
        table.rows.push_back(std::move(row));
    }
    table.metadata.emplace_back("table", to_string(id));
    for (auto& kv : describe(cfg)) {
        if (kv.first == "levels") {
            kv.second = join(levels);
        }
        table.metadata.push_back(std::move(kv));
    }
    if (noisy_f && cfg.noise_mode == NoiseMode::paper_constant) {
        // Actual L2 norms of the constant shifts; they exceed the nominal level.
        for (double l : levels) {
            const NoiseAudit audit = noise_audit(l, dquad);
            std::string v = "source_shift=" + shortest_repr(audit.source_shift_norm);
            if (noisy_g) {
                v += " data_shift=" + shortest_repr(audit.data_shift_norm);
            }
            table.metadata.emplace_back("noise_norm@" + shortest_repr(l), v);
        }
    }
    table.content_hash = git_blob_sha1(to_csv(table));
    table.metadata.emplace_back("content_sha1", table.content_hash);
    return table;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (alphas.empty()) {
        throw DomainError("ExperimentConfig: alphas must not be empty");
    }
    for (double a : alphas) {
        if (!(a > 0.0 && a <= 1.0)) {
            throw DomainError("ExperimentConfig: alpha " + shortest_repr(a) + " outside (0, 1]");
        }
    }
    if (!(tau > 0.0)) {
        throw DomainError("ExperimentConfig: tau must be positive");
    }
    if (truncation < 1 || spatial_subintervals < 1 || temporal_subintervals < 1 || data_subintervals < 1) {
        throw DomainError("ExperimentConfig: truncation and subinterval counts must be >= 1");
    }
    if (quad_points < 2 || quad_points > 8) {
        throw DomainError("ExperimentConfig: quad_points must lie in [2, 8]");
    }
}

Metadata describe(const ExperimentConfig& cfg) {
    return {
        {"alphas", join(cfg.alphas)},
        {"tau", shortest_repr(cfg.tau)},
        {"truncation", std::to_string(cfg.truncation)},
        {"spatial_subintervals", std::to_string(cfg.spatial_subintervals)},
        {"quad_points", std::to_string(cfg.quad_points)},
        {"temporal_subintervals", std::to_string(cfg.temporal_subintervals)},
        {"data_subintervals", std::to_string(cfg.data_subintervals)},
        {"singular_mode", mode_name(cfg.singular_mode)},
        {"levels", join(cfg.levels)},
        {"noise_mode", noise_name(cfg.noise_mode)},
        {"seed", std::to_string(cfg.seed)},
    };
}

double paper_initial(double x, double y) { return std::sin(x) * std::sin(y); }

double paper_source(double x, double y, double t) {
    return (2.0 - kPi * kPi) * std::sin(x) * std::sin(y) * std::exp(-kPi * kPi * t);
}

QuadConfig source_quad(const ExperimentConfig& cfg) {
    return make_quad(cfg.quad_points, cfg.spatial_subintervals, cfg.singular_mode);
}

QuadConfig data_quad(const ExperimentConfig& cfg) {
    return make_quad(cfg.quad_points, cfg.data_subintervals, cfg.singular_mode);
}

TimeFractionalProblem paper_template(const ExperimentConfig& cfg, double alpha) {
    cfg.validate();
    auto modes = ModeSet::create(2, cfg.truncation);
    auto source = std::make_shared<ProjectedSource>(paper_source, modes, source_quad(cfg));
    return make_problem(cfg, modes, source, alpha);
}

PaperProblem paper_problem(const ExperimentConfig& cfg) {
    TimeFractionalProblem base = paper_template(cfg, cfg.alphas.front());
    SpectralField u0 = project(paper_initial, base.modes, data_quad(cfg));
    std::vector<std::optional<SpectralField>> g(cfg.alphas.size());
    parallel_for(cfg.alphas.size(), cfg.threads, [&](std::size_t i) {
        TimeFractionalProblem p = base;
        p.alpha = cfg.alphas[i];
        g[i] = final_value(p, u0);
    });
    PaperProblem out{base, u0, {}};
    for (auto& v : g) {
        out.g.push_back(std::move(*v));
    }
    return out;
}

SpectralField random_field(ModeSetPtr modes, double level, std::uint64_t seed) {
    if (!(level >= 0.0)) {
        throw DomainError("random_field: level must be >= 0");
    }
    std::mt19937_64 rng(seed);
    SpectralField out(modes);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        out[k] = 2.0 * u - 1.0;
    }
    const double n = l2_norm(out);
    if (n > 0.0) {
        out *= level / n;
    }
    return out;
}

SourcePtr noisy_source(const SourcePtr& f, double eps, const NoiseSpec& spec) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
        throw DomainError("noisy_source: eps must be >= 0");
    }
    if (eps == 0.0) {
        return f;
    }
    if (!f) {
        throw DomainError("noisy_source: null source");
    }
    if (spec.mode == NoiseMode::seeded_random) {
        return std::make_shared<ShiftedSource>(f, random_field(f->modeset_ptr(), eps, spec.seed + kSourceSeedOffset));
    }
    if (const auto* ps = dynamic_cast<const ProjectedSource*>(f.get())) {
        SpaceTimeFn base = ps->function();
        const double shift = 0.5 * eps;
        return std::make_shared<ProjectedSource>(
            [base, shift](double x, double y, double s) { return base(x, y, s) + shift; },
            ps->modeset_ptr(), ps->quad());
    }
    return std::make_shared<ShiftedSource>(f, constant_coefficients(f->modeset_ptr(), 0.5 * eps));
}

SpectralField noisy_data(const SpectralField& g, double delta, const NoiseSpec& spec, const QuadConfig& quad) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw DomainError("noisy_data: delta must be >= 0");
    }
    if (delta == 0.0) {
        return g;
    }
    if (spec.mode == NoiseMode::seeded_random) {
        return g + random_field(g.modeset_ptr(), delta, spec.seed);
    }
    const double shift = 0.5 * delta;
    return g + project([shift](double, double) { return shift; }, g.modeset_ptr(), quad);
}

NoiseAudit noise_audit(double level, const QuadConfig& quad) {
    if (!(level >= 0.0)) {
        throw DomainError("noise_audit: level must be >= 0");
    }
    const double c = 0.5 * level;
    const double norm = std::sqrt(integrate_2d([c](double, double) { return c * c; }, quad));
    return {level, norm, norm};
}

const char* to_string(TableId id) {
    switch (id) {
        case TableId::table1: return "table1";
        case TableId::table2: return "table2";
        case TableId::table3: return "table3";
        case TableId::fig4: return "fig4";
    }
    return "unknown";
}

std::vector<double> default_levels(TableId id) {
    if (id == TableId::table1) {
        return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9};
    }
    return {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9};
}

ErrorTable run_table1(const ExperimentConfig& cfg) { return run_sweep(TableId::table1, cfg); }
ErrorTable run_table2(const ExperimentConfig& cfg) { return run_sweep(TableId::table2, cfg); }
ErrorTable run_table3(const ExperimentConfig& cfg) { return run_sweep(TableId::table3, cfg); }

ErrorTable run_fig4(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    const bool has_08 = std::find(cfg.alphas.begin(), cfg.alphas.end(), 0.8) != cfg.alphas.end();
    c.alphas = {has_08 || cfg.alphas.empty() ? 0.8 : cfg.alphas.back()};
    return run_sweep(TableId::fig4, c);
}

ErrorTable run_table(TableId id, const ExperimentConfig& cfg) {
    switch (id) {
        case TableId::table1: return run_table1(cfg);
        case TableId::table2: return run_table2(cfg);
        case TableId::table3: return run_table3(cfg);
        case TableId::fig4: return run_fig4(cfg);
    }
    throw DomainError("run_table: unknown table id");
}

FitResult fit_rate(const ErrorTable& table, FitModel model, std::size_t last_rows) {
    if (table.rows.size() < 3) {
        throw DomainError("fit_rate: need at least 3 rows, got " + std::to_string(table.rows.size()));
    }
    const std::size_t n = last_rows == 0 ? table.rows.size() : std::min(last_rows, table.rows.size());
    if (n < 2) {
        throw DomainError("fit_rate: need at least 2 rows in the fit window");
    }
    const std::size_t first = table.rows.size() - n;
    FitResult out;
    out.model = model;
    out.alphas = table.alphas;
    for (std::size_t a = 0; a < table.alphas.size(); ++a) {
        if (model == FitModel::power_law) {
            double mx = 0.0;
            double my = 0.0;
            std::vector<double> xs;
            std::vector<double> ys;
            for (std::size_t r = first; r < table.rows.size(); ++r) {
                const double lvl = table.rows[r].level;
                const double e = table.rows[r].errors.at(a);
                if (!(lvl > 0.0 && e > 0.0)) {
                    throw NumericalError("fit_rate: power law needs positive levels and errors");
                }
                xs.push_back(std::log10(lvl));
                ys.push_back(std::log10(e));
                mx += xs.back();
                my += ys.back();
            }
            mx /= static_cast<double>(n);
            my /= static_cast<double>(n);
            double sxy = 0.0;
            double sxx = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                sxy += (xs[i] - mx) * (ys[i] - my);
                sxx += (xs[i] - mx) * (xs[i] - mx);
            }
            if (sxx == 0.0) {
                throw NumericalError("fit_rate: degenerate levels");
            }
            out.values.push_back(sxy / sxx);
        } else {
            CompensatedSum num;
            CompensatedSum den;
            for (std::size_t r = first; r < table.rows.size(); ++r) {
                const double lvl = table.rows[r].level;
                if (!(lvl > 0.0)) {
                    throw NumericalError("fit_rate: sqrt model needs positive levels");
                }
                num.add(table.rows[r].errors.at(a) * std::sqrt(lvl));
                den.add(lvl);
            }
            out.values.push_back(num.value() / den.value());
        }
    }
    return out;
}

std::string to_csv(const ErrorTable& table) {
    std::string out = "level";
    for (double a : table.alphas) {
        out += ",alpha_" + shortest_repr(a);
    }
    out += '\n';
    for (const ErrorRow& row : table.rows) {
        out += shortest_repr(row.level);
        for (double e : row.errors) {
            out += ',' + shortest_repr(e);
        }
        out += '\n';
    }
    return out;
}

std::string git_blob_sha1(const std::string& content) {
    const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1) {
        throw NumericalError("git_blob_sha1: digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

void emit_csv(const ErrorTable& table, const std::string& path) { write_text(path, to_csv(table)); }

void emit_metadata(const ErrorTable& table, const std::string& path) {
    std::string out;
    for (const auto& [k, v] : table.metadata) {
        out += k + '=' + v + '\n';
    }
    write_text(path, out);
}

void emit_plot_script(const ErrorTable& table, const std::string& path, const std::string& csv_name,
                      const FitResult* sqrt_fit) {
    const std::string name = to_string(table.id);
    const char* xlabel = table.id == TableId::table1 ? "t" : table.id == TableId::table2 ? "epsilon" : "eta";
    std::ostringstream os;
    os << "# gnuplot script; run from the directory holding " << csv_name << "\n"
       << "set terminal pngcairo size 900,600\n"
       << "set output '" << name << ".png'\n"
       << "set datafile separator ','\n"
       << "set logscale xy\n"
       << "set format x '10^{%L}'\n"
       << "set format y '10^{%L}'\n"
       << "set key top left\n"
       << "set grid\n"
       << "set xlabel '" << xlabel << "'\n"
       << "set ylabel 'L^2 error'\n";
    os << "plot ";
    for (std::size_t a = 0; a < table.alphas.size(); ++a) {
        if (a) {
            os << ", \\\n     ";
        }
        os << "'" << csv_name << "' using 1:" << a + 2 << " skip 1 with linespoints title 'alpha = "
           << shortest_repr(table.alphas[a]) << "'";
    }
    if (sqrt_fit && !sqrt_fit->values.empty()) {
        os << ", \\\n     " << shortest_repr(sqrt_fit->values.back()) << "*sqrt(x) with lines dashtype 2 title '"
           << shortest_repr(std::round(sqrt_fit->values.back() * 100.0) / 100.0) << " sqrt(" << xlabel << ")'";
    }
    os << "\n";
    write_text(path, os.str());
}

void emit_surface(const SpectralField& field, const std::string& path, int grid) {
    if (grid < 2) {
        throw DomainError("emit_surface: grid must have at least 2 points per axis");
    }
    const ModeSet& ms = field.modeset();
    const int M = ms.truncation();
    std::vector<double> xs(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i) {
        xs[static_cast<std::size_t>(i)] = kPi * i / (grid - 1);
    }
    // sin(m x_i), m-major
    std::vector<double> s(static_cast<std::size_t>(M) * grid);
    for (int m = 1; m <= M; ++m) {
        for (int i = 0; i < grid; ++i) {
            s[static_cast<std::size_t>(m - 1) * grid + i] = std::sin(m * xs[static_cast<std::size_t>(i)]);
        }
    }
    std::string out;
    if (ms.dimension() == 1) {
        out = "x,u\n";
        for (int i = 0; i < grid; ++i) {
            CompensatedSum acc;
            for (int m = 1; m <= M; ++m) {
                acc.add(field[static_cast<std::size_t>(m - 1)] * s[static_cast<std::size_t>(m - 1) * grid + i]);
            }
            out += shortest_repr(xs[static_cast<std::size_t>(i)]) + ',' +
                   shortest_repr(std::sqrt(2.0 / kPi) * acc.value()) + '\n';
        }
        write_text(path, out);
        return;
    }
    out = "x,y,u\n";
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            CompensatedSum acc;
            for (int m = 1; m <= M; ++m) {
                const double sm = s[static_cast<std::size_t>(m - 1) * grid + i];
                for (int n = 1; n <= M; ++n) {
                    acc.add(field.coeff(m, n) * sm * s[static_cast<std::size_t>(n - 1) * grid + j]);
                }
            }
            out += shortest_repr(xs[static_cast<std::size_t>(i)]) + ',' + shortest_repr(xs[static_cast<std::size_t>(j)]) +
                   ',' + shortest_repr((2.0 / kPi) * acc.value()) + '\n';
        }
        out += '\n';
    }
    write_text(path, out);
}

void emit_surface_script(const std::string& path, const std::vector<std::string>& data_files,
                         const std::vector<std::string>& titles) {
    if (data_files.size() != titles.size() || data_files.empty()) {
        throw DomainError("emit_surface_script: need one title per data file");
    }
    std::ostringstream os;
    os << "# gnuplot script; run from the directory holding the surface files\n"
       << "set terminal pngcairo size " << 500 * data_files.size() << ",450\n"
       << "set output 'surfaces.png'\n"
       << "set datafile separator ','\n"
       << "set multiplot layout 1," << data_files.size() << "\n"
       << "set pm3d\n"
       << "set hidden3d\n"
       << "set xlabel 'x'\n"
       << "set ylabel 'y'\n"
       << "set xrange [0:pi]\n"
       << "set yrange [0:pi]\n";
    for (std::size_t i = 0; i < data_files.size(); ++i) {
        os << "set title '" << titles[i] << "'\n"
           << "splot '" << data_files[i] << "' using 1:2:3 skip 1 with pm3d notitle\n";
    }
    os << "unset multiplot\n";
    write_text(path, os.str());
}

}  // namespace fracback
