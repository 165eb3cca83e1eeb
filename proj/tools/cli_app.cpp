#include "cli_app.hpp"

#include "cli_config.hpp"

#include "fracback/errors.hpp"
#include "fracback/experiments.hpp"
#include "fracback/format.hpp"
#include "fracback/solver.hpp"
#include "fracback/special_fn.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fracback::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config_path;
    std::string out_flag;
    std::optional<unsigned> threads;
    std::string singular_mode;
    int verbose = 0;

    // ml
    double ml_alpha = 0.0;
    double ml_beta = 1.0;
    double ml_x = 0.0;

    // forward / backward / diagnose
    double alpha = 0.8;
    std::optional<double> t;
    double eps = 0.0;
    double delta = 0.0;
    std::string input;
    bool surface = false;

    // table / fig4
    int table_id = 1;
    std::vector<double> alphas;
};

std::string format15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string format_sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4e", v);
    return buf;
}

class Runner {
public:
    Runner(const Options& o, std::ostream& out, std::ostream& err, const char* env_out)
        : o_(o), out_(out), err_(err) {
        if (!o.config_path.empty()) {
            cfg_ = load_config(o.config_path);
        }
        if (o.threads) {
            cfg_.experiment.threads = *o.threads;
        }
        if (!o.singular_mode.empty()) {
            cfg_.experiment.singular_mode = parse_singular_mode(o.singular_mode);
        }
        cfg_.verbosity = std::max(cfg_.verbosity, o.verbose);
        out_dir_ = resolve_out_dir(o.out_flag, cfg_.out_dir, env_out);
    }

    int ml() {
        const double v = mittag_leffler(o_.ml_alpha, o_.ml_beta, o_.ml_x);
        out_ << format15(v) << '\n';
        return kOk;
    }

    int forward() {
        const ExperimentConfig& ex = cfg_.experiment;
        const TimeFractionalProblem prob = paper_template(ex, o_.alpha);
        const SpectralField u0 = project(paper_initial, prob.modes, data_quad(ex));
        const SpectralField u = forward_solve(prob, u0, *o_.t);
        ensure_out_dir();
        write_csv(u0, path("u0.csv"));
        write_csv(u, path("forward.csv"));
        if (o_.surface) {
            emit_surface(u0, path("u0_surface.csv"));
            emit_surface(u, path("forward_surface.csv"));
            emit_surface_script(path("forward_surfaces.gp"), {"u0_surface.csv", "forward_surface.csv"},
                                {"u_0", "u(t = " + shortest_repr(*o_.t) + ")"});
        }
        out_ << "forward: alpha=" << shortest_repr(o_.alpha) << " t=" << shortest_repr(*o_.t)
             << " l2_norm=" << format_sci(l2_norm(u)) << '\n';
        return kOk;
    }

    int backward() {
        const ExperimentConfig& ex = cfg_.experiment;
        const TimeFractionalProblem prob = paper_template(ex, o_.alpha);
        const SpectralField u0 = project(paper_initial, prob.modes, data_quad(ex));
        const NoiseSpec spec{ex.noise_mode, ex.seed};

        SpectralField g = o_.input.empty() ? final_value(prob, u0) : read_csv_file(o_.input);
        if (!g.modeset().same_as(*prob.modes)) {
            throw DomainError("backward: input field truncation does not match the configured truncation " +
                              std::to_string(ex.truncation));
        }
        g = noisy_data(g, o_.delta, spec, data_quad(ex));
        const SourcePtr f = noisy_source(prob.source, o_.eps, spec);

        double t = 0.0;
        if (o_.t) {
            t = *o_.t;
        } else {
            const double eta = std::max(o_.eps, o_.delta);
            if (!(eta > 0.0)) {
                throw DomainError("backward: give --t, or a noise level via --eps/--delta to choose t");
            }
            t = choose_t({RegularizationChoice::Rule::paper_table, 1.0, eta}, o_.alpha, prob.tau);
        }
        if (t == 0.0) {
            err_ << "warning: t = 0 is the unregularized inversion; the result is not regularized\n";
        }
        const Reconstruction rec = reconstruct_noisy(prob, g, f, t);
        ensure_out_dir();
        write_csv(g, path("g.csv"));
        write_csv(rec.field, path("backward.csv"));
        if (o_.surface) {
            emit_surface(u0, path("u0_surface.csv"));
            emit_surface(rec.field, path("backward_surface.csv"));
            emit_surface_script(path("backward_surfaces.gp"), {"u0_surface.csv", "backward_surface.csv"},
                                {"u_0", "reconstruction at t = " + shortest_repr(t)});
        }
        out_ << "backward: alpha=" << shortest_repr(o_.alpha) << " t=" << shortest_repr(t);
        if (o_.input.empty()) {
            out_ << " l2_error_vs_u0=" << format_sci(l2_error(rec.field, u0));
        }
        out_ << '\n';
        return kOk;
    }

    int table() {
        ExperimentConfig ex = cfg_.experiment;
        if (!o_.alphas.empty()) {
            ex.alphas = o_.alphas;
        }
        TableId id;
        switch (o_.table_id) {
            case 1: id = TableId::table1; break;
            case 2: id = TableId::table2; break;
            case 3: id = TableId::table3; break;
            default: throw DomainError("table: --id must be 1, 2 or 3");
        }
        const ErrorTable tab = run_table(id, ex);
        const std::string name = to_string(id);
        ensure_out_dir();
        emit_csv(tab, path(name + ".csv"));
        emit_metadata(tab, path(name + ".meta"));
        emit_plot_script(tab, path(name + ".gp"), name + ".csv");
        print_table(tab);
        return kOk;
    }

    int fig4() {
        ExperimentConfig ex = cfg_.experiment;
        if (!o_.alphas.empty()) {
            ex.alphas = o_.alphas;
        }
        const ErrorTable tab = run_fig4(ex);
        const FitResult fit = fit_rate(tab, FitModel::sqrt_const);
        ensure_out_dir();
        emit_csv(tab, path("fig4.csv"));
        emit_metadata(tab, path("fig4.meta"));
        emit_plot_script(tab, path("fig4.gp"), "fig4.csv", &fit);
        print_table(tab);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4g", fit.values.front());
        out_ << "fig4: alpha=" << shortest_repr(tab.alphas.front()) << " C=" << buf
             << " (error ~ C sqrt(eta))\n";
        return kOk;
    }

    int diagnose() {
        const ExperimentConfig& ex = cfg_.experiment;
        const TimeFractionalProblem prob = paper_template(ex, o_.alpha);
        const SpectralField u0 = project(paper_initial, prob.modes, data_quad(ex));
        SpectralField g = o_.input.empty() ? final_value(prob, u0) : read_csv_file(o_.input);
        if (!g.modeset().same_as(*prob.modes)) {
            throw DomainError("diagnose: input field truncation does not match the configured truncation");
        }
        g = noisy_data(g, o_.delta, NoiseSpec{ex.noise_mode, ex.seed}, data_quad(ex));
        const SolvabilityReport rep = solvability_diagnostic(prob, g);

        const auto order = prob.modes->eigenvalue_order();
        std::string csv = "K,lambda,partial_sum\n";
        for (std::size_t i = 0; i < rep.partial_sums.size(); ++i) {
            csv += std::to_string(i + 1) + ',' + shortest_repr(prob.modes->eigenvalue(order[i])) + ',' +
                   shortest_repr(rep.partial_sums[i]) + '\n';
        }
        ensure_out_dir();
        write_file(path("diagnose.csv"), csv);

        const std::size_t K = rep.partial_sums.size();
        for (std::size_t k : {std::size_t{1}, K / 4, K / 2, (3 * K) / 4, K}) {
            if (k == 0) {
                continue;
            }
            out_ << "S_" << k << " = " << format_sci(rep.partial_sums[k - 1]) << '\n';
        }
        out_ << "tail_growth = " << format_sci(rep.tail_growth) << '\n';
        out_ << "classification: " << to_string(rep.classification) << '\n';
        return kOk;
    }

private:
    std::string path(const std::string& name) const { return (fs::path(out_dir_) / name).string(); }

    void ensure_out_dir() const {
        std::error_code ec;
        fs::create_directories(out_dir_, ec);
        if (ec || !fs::is_directory(out_dir_)) {
            throw IoError("cannot create output directory '" + out_dir_ + "'");
        }
    }

    static void write_file(const std::string& p, const std::string& text) {
        FILE* f = std::fopen(p.c_str(), "wb");
        if (!f) {
            throw IoError("cannot open '" + p + "' for writing");
        }
        const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
        if (std::fclose(f) != 0 || !ok) {
            throw IoError("write to '" + p + "' failed");
        }
    }

    void print_table(const ErrorTable& tab) const {
        out_ << "level";
        for (double a : tab.alphas) {
            out_ << "  alpha=" << shortest_repr(a);
        }
        out_ << '\n';
        for (const ErrorRow& r : tab.rows) {
            out_ << shortest_repr(r.level);
            for (double e : r.errors) {
                out_ << "  " << format_sci(e);
            }
            out_ << '\n';
        }
        if (cfg_.verbosity > 0) {
            for (const auto& [k, v] : tab.metadata) {
                err_ << k << '=' << v << '\n';
            }
        }
    }

    const Options& o_;
    std::ostream& out_;
    std::ostream& err_;
    CliConfig cfg_;
    std::string out_dir_;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const char* env_out) {
    Options o;
    CLI::App app{"Regularized reconstruction for the time-fractional backward heat problem", "fracback"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--config", o.config_path, "JSON configuration file");
    app.add_option("--out", o.out_flag, "Output directory (default: $FRACBACK_OUT, then .)");
    app.add_option("--threads", o.threads, "Worker threads for table sweeps (0 = hardware)");
    app.add_option("--singular-mode", o.singular_mode, "Memory-term quadrature: paper or graded")
        ->check(CLI::IsMember({"paper", "graded"}));
    app.add_flag("-v,--verbose", o.verbose, "Print table metadata to stderr");

    auto* ml = app.add_subcommand("ml", "Evaluate E_{alpha,beta}(x) for x <= 0");
    ml->add_option("--alpha", o.ml_alpha, "Order in (0, 1]")->required();
    ml->add_option("--beta", o.ml_beta, "Second parameter (> 0)")->capture_default_str();
    ml->add_option("--x", o.ml_x, "Argument (<= 0)")->required();

    auto* fwd = app.add_subcommand("forward", "Solve the forward problem for the test data");
    fwd->add_option("--alpha", o.alpha, "Fractional order")->capture_default_str();
    fwd->add_option("--t", o.t, "Time in [0, tau]")->required();
    fwd->add_flag("--surface", o.surface, "Also write 64x64 surface samples and a gnuplot script");

    auto* bwd = app.add_subcommand("backward", "Regularized reconstruction u(., t) from final data");
    bwd->add_option("--alpha", o.alpha, "Fractional order")->capture_default_str();
    bwd->add_option("--t", o.t, "Regularization time in [0, tau]; default eta^(1/(2 alpha))");
    bwd->add_option("--eps", o.eps, "Source noise level (adds eps/2)")->capture_default_str();
    bwd->add_option("--delta", o.delta, "Data noise level (adds delta/2)")->capture_default_str();
    bwd->add_option("--input", o.input, "Final data g as a field CSV (default: computed from u0)");
    bwd->add_flag("--surface", o.surface, "Also write 64x64 surface samples and a gnuplot script");

    auto* tab = app.add_subcommand("table", "Reproduce an error table");
    tab->add_option("--id", o.table_id, "Table number")->required()->check(CLI::IsMember({1, 2, 3}));
    tab->add_option("--alpha", o.alphas, "Restrict to these orders");

    auto* fig = app.add_subcommand("fig4", "Noise level versus error with the C sqrt(eta) fit");
    fig->add_option("--alpha", o.alphas, "Order to fit (default 0.8)");

    auto* diag = app.add_subcommand("diagnose", "Solvability partial sums for final data");
    diag->add_option("--alpha", o.alpha, "Fractional order")->capture_default_str();
    diag->add_option("--delta", o.delta, "Data noise level (adds delta/2)")->capture_default_str();
    diag->add_option("--input", o.input, "Final data g as a field CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        Runner r(o, out, err, env_out);
        if (ml->parsed()) {
            return r.ml();
        }
        if (fwd->parsed()) {
            return r.forward();
        }
        if (bwd->parsed()) {
            return r.backward();
        }
        if (tab->parsed()) {
            return r.table();
        }
        if (fig->parsed()) {
            return r.fig4();
        }
        if (diag->parsed()) {
            return r.diagnose();
        }
        err << "no subcommand given\n";
        return kUsage;
    } catch (const ParameterChoiceError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    }
}

}  // namespace fracback::cli
