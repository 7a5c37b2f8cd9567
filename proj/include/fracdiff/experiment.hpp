#pragma once

#include "fracdiff/frbspline.hpp"
#include "fracdiff/solver.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fracdiff {

enum class OutputFormat { csv, json };

struct ExperimentConfig {
    int example = 1;
    std::vector<double> gammas{0.5};
    std::vector<double> betas{3.5};
    int alpha = 3;
    std::vector<int> js{3};
    std::vector<int> ss{5};
    std::optional<int> q;  // absolute collocation level; s + 1 per cell when unset
    int horizon = 1;
    double tail_tol = kDefaultTailTol;
    int quad_points = 8;
    bool ic_row = true;
    double ic_weight = 100.0;
    std::string output;  // file (solve, table) or directory (curves); empty means stdout
    OutputFormat format = OutputFormat::csv;
    unsigned threads = 1;
    bool timing = true;  // false writes runtime_ms = 0, making files reproducible bit for bit

    /// Throws std::invalid_argument on empty lists or levels outside [2, 8].
    void validate() const;
};

struct TableRow {
    int s = 0;
    int j = 0;
    double beta = 0.0;
    double gamma = 0.0;
    double l2_error = 0.0;
    std::size_t dof = 0;
    double condition_estimate = 0.0;
    double runtime_ms = 0.0;
    double final_time_l2 = 0.0;
    bool condition_warning = false;
    std::string error;  // nonempty when the cell failed

    bool ok() const { return error.empty(); }
};

/// Solver settings for a single cell of the sweep.
SolveConfig make_solve_config(const ExperimentConfig& config, double gamma, double beta, int j, int s);

/// The configured example with its horizon set to config.horizon.
ProblemSpec make_problem(const ExperimentConfig& config, double gamma);

/// One solve plus error measurement. Solver failures are captured in TableRow::error.
TableRow run_cell(const ExperimentConfig& config, double gamma, double beta, int j, int s);

/// Uses the first entry of each list.
TableRow run_single(const ExperimentConfig& config);

/// Sweep over gamma, beta, s (ascending), j (ascending), in that nesting order.
/// Cells may run on up to config.threads threads; rows come back in sweep order.
std::vector<TableRow> run_table(const ExperimentConfig& config);

struct Curve {
    double gamma = 0.0;
    std::vector<double> betas;
    std::vector<int> levels;                 // s values
    std::vector<std::vector<double>> errors; // errors[s index][beta index]; NaN for failed cells
};

/// Error versus s for each beta at the first j, one curve per gamma.
std::vector<Curve> run_curves(const ExperimentConfig& config);

void write_csv(std::ostream& out, const std::vector<TableRow>& rows);
void write_json(std::ostream& out, const std::vector<TableRow>& rows);
/// Whitespace-separated columns: s, then one error column per beta.
void write_curve(std::ostream& out, const Curve& curve);
/// File name used for a curve inside the output directory.
std::string curve_file_name(double gamma);
/// Human-readable one-cell summary, errors with 6 significant digits.
std::string summarize(const TableRow& row);

/// Writes through a temporary file and renames, so no partial file is left behind.
void write_file_atomically(const std::string& path, const std::string& content);

}  // namespace fracdiff
