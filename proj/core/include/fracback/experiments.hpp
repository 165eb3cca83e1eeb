#pragma once

#include "fracback/quadrature.hpp"
#include "fracback/solver.hpp"
#include "fracback/spectral.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fracback {

enum class NoiseMode { paper_constant, seeded_random };

struct ExperimentConfig {
    std::vector<double> alphas{0.2, 0.4, 0.6, 0.8};
    double tau = 1.0;
    int truncation = 30;
    int spatial_subintervals = 4;   // projection of the source f
    int quad_points = 4;
    int temporal_subintervals = 8;  // memory-term quadrature
    int data_subintervals = 128;    // projection of u0 and of the data noise
    SingularMode singular_mode = SingularMode::paper_direct;
    std::vector<double> levels;     // empty: the table's default sweep
    NoiseMode noise_mode = NoiseMode::paper_constant;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    void validate() const;
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

// Key/value echo of every field, in declaration order.
Metadata describe(const ExperimentConfig& cfg);

// u0(x, y) = sin x sin y.
double paper_initial(double x, double y);
// f(x, y, t) = (2 - pi^2) sin x sin y exp(-pi^2 t).
double paper_source(double x, double y, double t);

QuadConfig source_quad(const ExperimentConfig& cfg);
QuadConfig data_quad(const ExperimentConfig& cfg);

// Problem with the test source projected by source_quad(cfg).
TimeFractionalProblem paper_template(const ExperimentConfig& cfg, double alpha);

struct PaperProblem {
    TimeFractionalProblem base;   // alpha = cfg.alphas.front()
    SpectralField u0;
    std::vector<SpectralField> g; // final values, one per cfg.alphas entry
};

PaperProblem paper_problem(const ExperimentConfig& cfg);

struct NoiseSpec {
    NoiseMode mode = NoiseMode::paper_constant;
    std::uint64_t seed = 0;
};

// paper_constant: f + eps/2 pointwise before projection.
// seeded_random: a time-independent random field with L2 norm eps.
SourcePtr noisy_source(const SourcePtr& f, double eps, const NoiseSpec& spec);

// paper_constant: g + projection of the constant delta/2 with `quad`.
// seeded_random: g + random field with L2 norm delta.
SpectralField noisy_data(const SpectralField& g, double delta, const NoiseSpec& spec, const QuadConfig& quad);

// Zero-mean random coefficients scaled to L2 norm `level`.
SpectralField random_field(ModeSetPtr modes, double level, std::uint64_t seed);

// Actual L2(Omega) norms of the constant shifts next to the nominal level.
struct NoiseAudit {
    double nominal = 0.0;
    double source_shift_norm = 0.0;  // ||eps/2||, constant in time
    double data_shift_norm = 0.0;    // ||delta/2||
};
NoiseAudit noise_audit(double level, const QuadConfig& quad);

enum class TableId { table1, table2, table3, fig4 };

const char* to_string(TableId id);

struct ErrorRow {
    double level = 0.0;
    std::vector<double> errors;  // one per alpha
};

struct ErrorTable {
    TableId id = TableId::table1;
    std::vector<double> alphas;
    std::vector<ErrorRow> rows;  // descending level
    Metadata metadata;
    std::string content_hash;    // git blob SHA-1 of to_csv(table)
};

// t_i = 10^-(i+1), i = 1..8 for Table 1; 10^-(i+2), i = 1..7 otherwise.
std::vector<double> default_levels(TableId id);

ErrorTable run_table1(const ExperimentConfig& cfg);
ErrorTable run_table2(const ExperimentConfig& cfg);
ErrorTable run_table3(const ExperimentConfig& cfg);
// Table 3 restricted to alpha = 0.8 unless cfg.alphas says otherwise.
ErrorTable run_fig4(const ExperimentConfig& cfg);
ErrorTable run_table(TableId id, const ExperimentConfig& cfg);

enum class FitModel { power_law, sqrt_const };

struct FitResult {
    FitModel model = FitModel::power_law;
    std::vector<double> alphas;
    std::vector<double> values;  // slope per alpha, or C per alpha
};

// power_law: least-squares slope of log10(error) against log10(level).
// sqrt_const: C minimising sum (error - C sqrt(level))^2.
// last_rows = 0 uses every row.
FitResult fit_rate(const ErrorTable& table, FitModel model, std::size_t last_rows = 0);

// "level,alpha_<a>,..." header, shortest round-trip values, LF endings.
std::string to_csv(const ErrorTable& table);

std::string git_blob_sha1(const std::string& content);

void emit_csv(const ErrorTable& table, const std::string& path);
// Sidecar with the configuration echo and the content hash.
void emit_metadata(const ErrorTable& table, const std::string& path);
// gnuplot script reading `csv_name` relative to its own directory.
void emit_plot_script(const ErrorTable& table, const std::string& path, const std::string& csv_name,
                      const FitResult* sqrt_fit = nullptr);

// Samples of the synthesized field on a uniform grid x 0..pi, y 0..pi,
// as "x,y,u" rows with a blank line between x blocks.
void emit_surface(const SpectralField& field, const std::string& path, int grid = 64);
void emit_surface_script(const std::string& path, const std::vector<std::string>& data_files,
                         const std::vector<std::string>& titles);

}  // namespace fracback
