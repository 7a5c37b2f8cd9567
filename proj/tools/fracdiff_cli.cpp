#include "fracdiff/experiment.hpp"
#include "fracdiff/solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct CliState {
    fracdiff::ExperimentConfig config;
    std::string format = "csv";
    std::string dump_dir;
    bool no_ic_row = false;
    bool no_timing = false;
    int q = -1;
};

unsigned default_threads()
{
    if (const char* env = std::getenv("FRACDIFF_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) {
                return static_cast<unsigned>(n);
            }
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid FRACDIFF_THREADS='" << env << "'\n";
    }
    return 1;
}

void add_common(CLI::App* app, CliState& st)
{
    auto& c = st.config;
    app->add_option("--example", c.example, "Benchmark problem (1 or 2)")->check(CLI::IsMember({1, 2}));
    app->add_option("--gamma", c.gammas, "Fractional order(s) in (0, 1]")->delimiter(',');
    app->add_option("--beta", c.betas, "Temporal spline degree(s)")->delimiter(',');
    app->add_option("--alpha", c.alpha, "Spatial spline degree");
    app->add_option("-j", c.js, "Spatial level(s)")->delimiter(',');
    app->add_option("-s", c.ss, "Temporal level(s)")->delimiter(',');
    app->add_option("-q", st.q, "Collocation level (default s + 1)");
    app->add_option("-T", c.horizon, "Time horizon (positive integer)");
    app->add_option("--tail-tol", c.tail_tol, "Tail tolerance for the effective support");
    app->add_option("--quad-points", c.quad_points, "Gauss points per quadrature cell");
    app->add_option("--ic-weight", c.ic_weight, "Row scaling applied to the initial-condition equations");
    app->add_flag("--no-ic-row", st.no_ic_row, "Omit the initial-condition collocation row");
    app->add_flag("--no-timing", st.no_timing, "Write runtime_ms as 0 for reproducible output");
}

void finalize(CliState& st)
{
    st.config.ic_row = !st.no_ic_row;
    st.config.timing = !st.no_timing;
    if (st.q >= 0) {
        st.config.q = st.q;
    }
    st.config.format = st.format == "json" ? fracdiff::OutputFormat::json : fracdiff::OutputFormat::csv;
    st.config.validate();
}

std::string render(const std::vector<fracdiff::TableRow>& rows, fracdiff::OutputFormat format)
{
    std::ostringstream out;
    if (format == fracdiff::OutputFormat::json) {
        fracdiff::write_json(out, rows);
    } else {
        fracdiff::write_csv(out, rows);
    }
    return out.str();
}

void emit(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
    } else {
        fracdiff::write_file_atomically(path, text);
    }
}

void warn_conditioning(const std::vector<fracdiff::TableRow>& rows)
{
    for (const auto& r : rows) {
        if (r.condition_warning) {
            std::cerr << "warning: condition estimate " << r.condition_estimate << " exceeds "
                      << fracdiff::kConditionWarningThreshold << " (s=" << r.s << ", j=" << r.j
                      << ", beta=" << r.beta << ", gamma=" << r.gamma << ")\n";
        }
    }
}

void dump_matrices(const CliState& st)
{
    const auto& c = st.config;
    const auto problem = fracdiff::make_problem(c, c.gammas.front());
    const auto sc = fracdiff::make_solve_config(c, c.gammas.front(), c.betas.front(), c.js.front(), c.ss.front());
    const auto sys = fracdiff::assemble_system(problem, sc);
    std::filesystem::create_directories(st.dump_dir);
    const std::pair<const char*, const fracdiff::DenseMatrix*> items[] = {
        {"M.txt", &sys.mass}, {"L.txt", &sys.stiffness}, {"A.txt", &sys.a}, {"G.txt", &sys.g}, {"F.txt", &sys.load}};
    for (const auto& [name, m] : items) {
        std::ostringstream out;
        fracdiff::write_triplets(out, *m);
        fracdiff::write_file_atomically((std::filesystem::path(st.dump_dir) / name).string(), out.str());
    }
}

int run_solve(CliState& st)
{
    const fracdiff::TableRow row = fracdiff::run_single(st.config);
    if (!st.dump_dir.empty()) {
        dump_matrices(st);
    }
    if (!row.ok()) {
        std::cerr << "error: " << fracdiff::summarize(row) << '\n';
        return kExitSolver;
    }
    warn_conditioning({row});
    std::cerr << fracdiff::summarize(row) << '\n';
    emit(render({row}, st.config.format), st.config.output);
    return 0;
}

int run_table(CliState& st)
{
    const auto rows = fracdiff::run_table(st.config);
    warn_conditioning(rows);
    bool any_ok = false;
    for (const auto& r : rows) {
        if (!r.ok()) {
            std::cerr << "cell failed: " << fracdiff::summarize(r) << '\n';
        }
        any_ok = any_ok || r.ok();
    }
    emit(render(rows, st.config.format), st.config.output);
    return any_ok ? 0 : kExitSolver;
}

int run_curves(CliState& st)
{
    const auto curves = fracdiff::run_curves(st.config);
    const std::filesystem::path dir = st.config.output.empty() ? "." : st.config.output;
    std::filesystem::create_directories(dir);
    for (const auto& curve : curves) {
        std::ostringstream out;
        fracdiff::write_curve(out, curve);
        const auto path = dir / fracdiff::curve_file_name(curve.gamma);
        fracdiff::write_file_atomically(path.string(), out.str());
        std::cerr << "wrote " << path.string() << '\n';
        for (std::size_t i = 0; i < curve.levels.size(); ++i) {
            for (std::size_t b = 0; b < curve.betas.size(); ++b) {
                if (std::isnan(curve.errors[i][b])) {
                    std::cerr << "cell failed: gamma=" << curve.gamma << " s=" << curve.levels[i]
                              << " beta=" << curve.betas[b] << " (written as nan)\n";
                }
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Space-time spline solver for the time-fractional diffusion equation"};
    app.require_subcommand(1);

    CliState solve_state;
    CliState table_state;
    CliState curves_state;
    curves_state.config.betas = {2.0, 2.5, 3.0, 3.5, 4.0};
    curves_state.config.gammas = {1.0, 0.75, 0.5, 0.25};
    curves_state.config.js = {5};
    curves_state.config.ss = {2, 3, 4, 5, 6};

    auto* solve = app.add_subcommand("solve", "Solve one configuration and report its error");
    add_common(solve, solve_state);
    solve->add_option("--format", solve_state.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    solve->add_option("--out", solve_state.config.output, "Output file (default stdout)");
    solve->add_option("--dump-matrices", solve_state.dump_dir, "Directory for M, L, A, G, F triplet files");

    auto* table = app.add_subcommand("table", "Sweep over s and j and write an error table");
    add_common(table, table_state);
    table->add_option("--format", table_state.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    table->add_option("--out", table_state.config.output, "Output file (default stdout)");
    table->add_option("--threads", table_state.config.threads, "Worker threads (env FRACDIFF_THREADS)")
        ->check(CLI::PositiveNumber);

    auto* curves = app.add_subcommand("curves", "Error versus s for several beta, one file per gamma");
    add_common(curves, curves_state);
    curves->add_option("--out", curves_state.config.output, "Output directory (default .)");
    curves->add_option("--threads", curves_state.config.threads, "Worker threads (env FRACDIFF_THREADS)")
        ->check(CLI::PositiveNumber);

    table_state.config.threads = default_threads();
    curves_state.config.threads = default_threads();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    CliState& st = solve->parsed() ? solve_state : table->parsed() ? table_state : curves_state;
    try {
        finalize(st);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (solve->parsed()) {
            return run_solve(st);
        }
        if (table->parsed()) {
            return run_table(st);
        }
        return run_curves(st);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
}
