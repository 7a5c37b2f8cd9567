#include "fracdiff/experiment.hpp"

#include "fracdiff/problem.hpp"
#include "fracdiff/solver.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fracdiff {

namespace {

// Locale-independent shortest round-trip formatting (%.17g).
std::string full_precision(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
std::vector<T> sorted(std::vector<T> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

void run_parallel(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task)
{
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                task(i);
            }
        });
    }
}

}  // namespace

void ExperimentConfig::validate() const
{
    const auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
    if (example != 1 && example != 2) {
        fail("example must be 1 or 2");
    }
    if (gammas.empty() || betas.empty() || js.empty() || ss.empty()) {
        fail("gamma, beta, j and s lists must be non-empty");
    }
    for (int j : js) {
        if (j < 2 || j > 8) {
            fail("j must lie in [2, 8]");
        }
        if ((1 << j) < 2 * alpha) {
            fail("j = " + std::to_string(j) + " has fewer than 2*alpha cells");
        }
    }
    for (int s : ss) {
        if (s < 2 || s > 8) {
            fail("s must lie in [2, 8]");
        }
        if (q && *q < s) {
            fail("q must be at least s");
        }
    }
    for (double g : gammas) {
        if (!(g > 0.0 && g <= 1.0)) {
            fail("gamma must lie in (0, 1]");
        }
        for (double b : betas) {
            if (!(b > g - 0.5)) {
                fail("beta must exceed gamma - 1/2");
            }
        }
    }
    if (alpha < 1 || horizon < 1 || quad_points < 1 || !(tail_tol > 0.0) || !(ic_weight > 0.0)) {
        fail("alpha, T, quad-points, tail-tol and ic-weight must be positive");
    }
}

SolveConfig make_solve_config(const ExperimentConfig& config, double gamma_order, double beta, int j, int s)
{
    SolveConfig sc;
    sc.gamma = gamma_order;
    sc.alpha = config.alpha;
    sc.beta = beta;
    sc.j = j;
    sc.s = s;
    sc.q = config.q;
    sc.horizon = config.horizon;
    sc.tail_tol = config.tail_tol;
    sc.quad_points = config.quad_points;
    sc.ic_weight = config.ic_weight;
    sc.ic_row = config.ic_row;
    return sc;
}

ProblemSpec make_problem(const ExperimentConfig& config, double gamma_order)
{
    ProblemSpec problem = make_example(config.example, gamma_order);
    problem.horizon = config.horizon;
    return problem;
}

TableRow run_cell(const ExperimentConfig& config, double gamma_order, double beta, int j, int s)
{
    TableRow row;
    row.s = s;
    row.j = j;
    row.beta = beta;
    row.gamma = gamma_order;
    const auto start = std::chrono::steady_clock::now();
    try {
        const ProblemSpec scaled = make_problem(config, gamma_order);
        const SolveConfig sc = make_solve_config(config, gamma_order, beta, j, s);
        const SolveResult result = solve(scaled, sc);
        const ErrorReport err = measure_error(result, scaled);
        row.l2_error = err.l2_error;
        row.final_time_l2 = err.final_time_l2;
        row.dof = err.dof;
        row.condition_estimate = err.condition_estimate;
        row.condition_warning = result.condition_warning;
    } catch (const std::exception& e) {
        row.error = e.what();
        row.l2_error = std::numeric_limits<double>::quiet_NaN();
        row.final_time_l2 = std::numeric_limits<double>::quiet_NaN();
        row.condition_estimate = std::numeric_limits<double>::quiet_NaN();
    }
    if (config.timing) {
        row.runtime_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return row;
}

TableRow run_single(const ExperimentConfig& config)
{
    config.validate();
    return run_cell(config, config.gammas.front(), config.betas.front(), config.js.front(), config.ss.front());
}

std::vector<TableRow> run_table(const ExperimentConfig& config)
{
    config.validate();
    struct Cell {
        double gamma, beta;
        int s, j;
    };
    std::vector<Cell> cells;
    for (double g : config.gammas) {
        for (double b : config.betas) {
            for (int s : sorted(config.ss)) {
                for (int j : sorted(config.js)) {
                    cells.push_back({g, b, s, j});
                }
            }
        }
    }
    std::vector<TableRow> rows(cells.size());
    run_parallel(cells.size(), config.threads, [&](std::size_t i) {
        rows[i] = run_cell(config, cells[i].gamma, cells[i].beta, cells[i].j, cells[i].s);
    });
    return rows;
}

std::vector<Curve> run_curves(const ExperimentConfig& config)
{
    config.validate();
    const int j = config.js.front();
    const auto levels = sorted(config.ss);
    std::vector<Curve> curves;
    for (double g : config.gammas) {
        Curve c;
        c.gamma = g;
        c.betas = config.betas;
        c.levels = levels;
        c.errors.assign(levels.size(), std::vector<double>(config.betas.size()));
        curves.push_back(std::move(c));
    }
    const std::size_t per_curve = levels.size() * config.betas.size();
    run_parallel(curves.size() * per_curve, config.threads, [&](std::size_t i) {
        Curve& c = curves[i / per_curve];
        const std::size_t rest = i % per_curve;
        const std::size_t si = rest / config.betas.size();
        const std::size_t bi = rest % config.betas.size();
        const TableRow row = run_cell(config, c.gamma, config.betas[bi], j, levels[si]);
        c.errors[si][bi] = row.l2_error;
    });
    return curves;
}

void write_csv(std::ostream& out, const std::vector<TableRow>& rows)
{
    out << "s,j,beta,gamma,l2_error,dof,condition_estimate,runtime_ms\n";
    for (const TableRow& r : rows) {
        out << r.s << ',' << r.j << ',' << full_precision(r.beta) << ',' << full_precision(r.gamma) << ','
            << full_precision(r.l2_error) << ',' << r.dof << ',' << full_precision(r.condition_estimate) << ','
            << full_precision(r.runtime_ms) << '\n';
    }
}

void write_json(std::ostream& out, const std::vector<TableRow>& rows)
{
    auto number = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    nlohmann::json doc = nlohmann::json::array();
    for (const TableRow& r : rows) {
        nlohmann::json item = {
            {"s", r.s},
            {"j", r.j},
            {"beta", r.beta},
            {"gamma", r.gamma},
            {"l2_error", number(r.l2_error)},
            {"final_time_l2", number(r.final_time_l2)},
            {"dof", r.dof},
            {"condition_estimate", number(r.condition_estimate)},
            {"condition_warning", r.condition_warning},
            {"runtime_ms", r.runtime_ms},
        };
        if (!r.ok()) {
            item["error"] = r.error;
        }
        doc.push_back(std::move(item));
    }
    out << doc.dump(2) << '\n';
}

std::string curve_file_name(double gamma_order)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "curve_gamma_%g.dat", gamma_order);
    return buf;
}

void write_curve(std::ostream& out, const Curve& curve)
{
    out << "# gamma = " << full_precision(curve.gamma) << "\n# s";
    for (double b : curve.betas) {
        out << " beta=" << full_precision(b);
    }
    out << '\n';
    for (std::size_t i = 0; i < curve.levels.size(); ++i) {
        out << curve.levels[i];
        for (double e : curve.errors[i]) {
            out << ' ' << full_precision(e);
        }
        out << '\n';
    }
}

std::string summarize(const TableRow& r)
{
    char buf[512];
    if (!r.ok()) {
        std::snprintf(buf, sizeof buf, "s=%d j=%d beta=%g gamma=%g FAILED: %s", r.s, r.j, r.beta, r.gamma,
                      r.error.c_str());
        return buf;
    }
    std::snprintf(buf, sizeof buf,
                  "s=%d j=%d beta=%g gamma=%g  L2 error %.5e  (final-time %.5e)  dof %zu  cond %.5e  %.1f ms%s", r.s,
                  r.j, r.beta, r.gamma, r.l2_error, r.final_time_l2, r.dof, r.condition_estimate, r.runtime_ms,
                  r.condition_warning ? "  [ill-conditioned]" : "");
    return buf;
}

void write_file_atomically(const std::string& path, const std::string& content)
{
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp);
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace fracdiff
