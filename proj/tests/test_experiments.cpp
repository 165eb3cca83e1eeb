#include "fracback/errors.hpp"
#include "fracback/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace fracback;

namespace {

constexpr double kPi = std::numbers::pi;

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.alphas = {0.4, 0.8};
    cfg.truncation = 10;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("fracback_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST(PaperProblem, InitialProjection) {
    const PaperProblem pp = paper_problem(ExperimentConfig{});
    EXPECT_NEAR(pp.u0.coeff(1, 1), kPi / 2, 1e-12);
    for (std::size_t k = 1; k < pp.u0.size(); ++k) {
        EXPECT_NEAR(pp.u0[k], 0.0, 1e-12);
    }
    EXPECT_EQ(pp.g.size(), 4u);
}

// With the source projected accurately the final data stays on mode (1,1).
TEST(PaperProblem, FinalDataSingleMode) {
    ExperimentConfig cfg;
    cfg.spatial_subintervals = 32;
    const PaperProblem pp = paper_problem(cfg);
    for (const SpectralField& g : pp.g) {
        EXPECT_GT(std::abs(g.coeff(1, 1)), 1e-3);
        for (std::size_t k = 1; k < g.size(); ++k) {
            EXPECT_LT(std::abs(g[k]), 1e-9) << k;
        }
    }
}

TEST(PaperProblem, ClassicalFinalValue) {
    ExperimentConfig cfg;
    cfg.alphas = {1.0};
    cfg.spatial_subintervals = 32;
    TimeFractionalProblem p = refined_variant(paper_template(cfg, 1.0));
    const SpectralField u0 = project(paper_initial, p.modes, data_quad(cfg));
    const double want = (kPi / 2) * std::exp(-kPi * kPi);
    EXPECT_LE(std::abs(final_value(p, u0).coeff(1, 1) - want), 1e-6 * want);
}

TEST(Noise, ConstantShiftCoefficients) {
    const ExperimentConfig cfg;
    const auto ms = ModeSet::create(2, 30);
    const SpectralField zero(ms);
    const double delta = 1e-3;
    const SpectralField g = noisy_data(zero, delta, {}, data_quad(cfg));
    EXPECT_NEAR(g.coeff(1, 3), 4.0 * delta / (3.0 * kPi), 1e-15);
    EXPECT_NEAR(g.coeff(1, 1), (delta / 2) * (2 / kPi) * 4.0, 1e-15);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Mode m = ms->mode(k);
        if (m.m % 2 == 0 || m.n % 2 == 0) {
            EXPECT_NEAR(g[k], 0.0, 1e-17);
        }
    }
}

TEST(Noise, SourceShift) {
    const ExperimentConfig cfg;
    const TimeFractionalProblem p = paper_template(cfg, 0.5);
    EXPECT_EQ(noisy_source(p.source, 0.0, {}), p.source);
    const SourcePtr f = noisy_source(p.source, 1e-3, {});
    const SpectralField d = f->coefficients(0.4) - p.source->coefficients(0.4);
    EXPECT_NEAR(d.coeff(1, 1), (0.5e-3) * (2 / kPi) * 4.0, 1e-12);
    EXPECT_NEAR(d.coeff(2, 1), 0.0, 1e-15);
    EXPECT_THROW(noisy_source(p.source, -1.0, {}), DomainError);
    EXPECT_THROW(noisy_data(SpectralField(p.modes), -1.0, {}, data_quad(cfg)), DomainError);
}

TEST(Noise, SeededRandomIsDeterministicAndScaled) {
    const auto ms = ModeSet::create(2, 12);
    const NoiseSpec spec{NoiseMode::seeded_random, 77};
    const SpectralField zero(ms);
    const SpectralField a = noisy_data(zero, 1e-4, spec, QuadConfig{});
    const SpectralField b = noisy_data(zero, 1e-4, spec, QuadConfig{});
    const SpectralField c = noisy_data(zero, 1e-4, {NoiseMode::seeded_random, 78}, QuadConfig{});
    EXPECT_EQ(a.coeffs(), b.coeffs());
    EXPECT_NE(a.coeffs(), c.coeffs());
    EXPECT_LE(l2_norm(a), 1e-4 * (1 + 1e-12));
    double mean = 0.0;
    for (double v : a.coeffs()) {
        mean += v;
    }
    EXPECT_LT(std::abs(mean / a.size()), 0.2 * 1e-4);
}

TEST(Noise, AuditReportsActualNorm) {
    const NoiseAudit au = noise_audit(1e-3, data_quad(ExperimentConfig{}));
    EXPECT_EQ(au.nominal, 1e-3);
    EXPECT_NEAR(au.data_shift_norm, 0.5e-3 * kPi, 1e-15);
    EXPECT_NEAR(au.source_shift_norm, 0.5e-3 * kPi, 1e-15);
}

TEST(Tables, Table1ShapeAndMonotone) {
    const ErrorTable t = run_table1(small_config());
    ASSERT_EQ(t.rows.size(), 8u);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        ASSERT_EQ(t.rows[r].errors.size(), 2u);
        EXPECT_NEAR(t.rows[r].level, std::pow(10.0, -2.0 - static_cast<double>(r)), 1e-20);
        for (std::size_t a = 0; a < 2; ++a) {
            EXPECT_TRUE(std::isfinite(t.rows[r].errors[a]));
            EXPECT_GE(t.rows[r].errors[a], 0.0);
            if (r > 0) {
                EXPECT_LT(t.rows[r].errors[a], t.rows[r - 1].errors[a]);
            }
        }
    }
    const std::string csv = to_csv(t);
    EXPECT_EQ(csv.rfind("level,alpha_0.4,alpha_0.8\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
    EXPECT_EQ(t.content_hash, git_blob_sha1(csv));
}

TEST(Tables, NoisyTablesMonotoneAndClose) {
    ExperimentConfig cfg;
    cfg.alphas = {0.8};
    const ErrorTable t2 = run_table2(cfg);
    const ErrorTable t3 = run_table3(cfg);
    ASSERT_EQ(t2.rows.size(), 7u);
    ASSERT_EQ(t3.rows.size(), 7u);
    for (std::size_t r = 1; r < 7; ++r) {
        EXPECT_LT(t2.rows[r].errors[0], t2.rows[r - 1].errors[0]);
        EXPECT_LT(t3.rows[r].errors[0], t3.rows[r - 1].errors[0]);
    }
    for (std::size_t r = 3; r < 7; ++r) {  // eta <= 1e-6
        const double a = t2.rows[r].errors[0];
        const double b = t3.rows[r].errors[0];
        EXPECT_LT(std::abs(a - b) / a, 0.01) << t2.rows[r].level;
    }
}

TEST(Tables, TooLargeNoiseLevelIsParameterChoiceError) {
    ExperimentConfig cfg = small_config();
    cfg.levels = {2.0, 1e-3, 1e-4};
    EXPECT_THROW(run_table2(cfg), ParameterChoiceError);
}

TEST(Tables, ThreadCountDoesNotChangeBytes) {
    ExperimentConfig one = small_config();
    ExperimentConfig many = small_config();
    many.threads = 3;
    for (TableId id : {TableId::table1, TableId::table3}) {
        const ErrorTable a = run_table(id, one);
        const ErrorTable b = run_table(id, many);
        EXPECT_EQ(to_csv(a), to_csv(b));
        EXPECT_EQ(a.content_hash, b.content_hash);
    }
}

TEST(Fit, SyntheticRows) {
    ErrorTable t;
    t.alphas = {1.0};
    for (int i = 2; i <= 6; ++i) {
        const double lvl = std::pow(10.0, -i);
        t.rows.push_back({lvl, {lvl}});
    }
    EXPECT_NEAR(fit_rate(t, FitModel::power_law).values[0], 1.0, 1e-12);
    EXPECT_NEAR(fit_rate(t, FitModel::power_law, 3).values[0], 1.0, 1e-12);
    for (ErrorRow& r : t.rows) {
        r.errors[0] = 15.2 * std::sqrt(r.level);
    }
    EXPECT_NEAR(fit_rate(t, FitModel::sqrt_const).values[0], 15.2, 1e-12);
    t.rows.resize(2);
    EXPECT_THROW(fit_rate(t, FitModel::power_law), DomainError);
}

TEST(Fit, DegenerateRows) {
    ErrorTable t;
    t.alphas = {0.5};
    t.rows = {{1e-3, {1.0}}, {1e-4, {0.0}}, {1e-5, {0.1}}};
    EXPECT_THROW(fit_rate(t, FitModel::power_law), NumericalError);
}

TEST(Emit, EmptyTableIsHeaderOnly) {
    ErrorTable t;
    t.alphas = {0.2, 0.4, 0.6, 0.8};
    EXPECT_EQ(to_csv(t), "level,alpha_0.2,alpha_0.4,alpha_0.6,alpha_0.8\n");
}

TEST(Emit, ReEmitIsByteIdentical) {
    const auto dir = scratch_dir("emit");
    ExperimentConfig cfg = small_config();
    const ErrorTable a = run_table1(cfg);
    const ErrorTable b = run_table1(cfg);
    emit_csv(a, (dir / "a.csv").string());
    emit_csv(b, (dir / "b.csv").string());
    emit_metadata(a, (dir / "a.meta").string());
    emit_metadata(b, (dir / "b.meta").string());
    EXPECT_EQ(slurp((dir / "a.csv").string()), slurp((dir / "b.csv").string()));
    EXPECT_EQ(slurp((dir / "a.meta").string()), slurp((dir / "b.meta").string()));
    EXPECT_EQ(slurp((dir / "a.csv").string()), to_csv(a));

    emit_plot_script(a, (dir / "a.gp").string(), "a.csv");
    const std::string gp = slurp((dir / "a.gp").string());
    EXPECT_NE(gp.find("'a.csv'"), std::string::npos);
    EXPECT_EQ(gp.find("/tmp"), std::string::npos);
    EXPECT_THROW(emit_csv(a, (dir / "missing" / "x.csv").string()), IoError);
}

TEST(Emit, MetadataEchoesConfig) {
    const ErrorTable t = run_table1(small_config());
    bool has_hash = false;
    bool has_truncation = false;
    for (const auto& [k, v] : t.metadata) {
        has_hash |= (k == "content_sha1" && v == t.content_hash);
        has_truncation |= (k == "truncation" && v == "10");
    }
    EXPECT_TRUE(has_hash);
    EXPECT_TRUE(has_truncation);
}

TEST(Emit, GitBlobHash) {
    // git hash-object of an empty file and of "hello\n"
    EXPECT_EQ(git_blob_sha1(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    EXPECT_EQ(git_blob_sha1("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST(Emit, SurfaceGrid) {
    const auto dir = scratch_dir("surface");
    const PaperProblem pp = paper_problem(small_config());
    emit_surface(pp.u0, (dir / "u0.dat").string(), 8);
    std::ifstream in(dir / "u0.dat");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        rows += !line.empty() && !line.starts_with("x");
    }
    EXPECT_EQ(rows, 64);
}
