#ifndef TAILASYM_REPORT_HPP
#define TAILASYM_REPORT_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tailasym/montecarlo.hpp"

namespace tailasym {

enum class Mode { Joint, Sum, RiskJoint, RiskSum, Diag };
enum class OutputFormat { Csv, Markdown };

struct MarginalConfig {
    std::string family;  // "pareto" | "weibull" | "lognormal"
    double alpha = 0, k = 0;  // pareto
    double beta = 0;          // weibull
    double mu = 0, sigma = 0; // lognormal
    Marginal build() const;
};

struct WeightConfig {
    std::string variant;  // "iid_uniform" | "comonotone" | "discount_product"
    double a1 = 1, b1 = 1, a2 = 1, b2 = 1;  // iid_uniform / comonotone
    double a = 1, b = 1;                    // discount_product factors
    int n = 1, m = 1;
    WeightModel build() const;
};

struct ExperimentConfig {
    Mode mode = Mode::Sum;
    double r = 0.0;
    MarginalConfig margin_x, margin_y;
    WeightConfig weights;
    std::vector<std::pair<double, double>> joint_grid;  // joint modes
    std::vector<double> sum_grid;                       // sum modes
    McSettings mc;
    bool include_indicator_estimators = false;
    OutputFormat format = OutputFormat::Csv;
    std::string out_path;

    ModelSpec build_model() const;
    bool is_joint() const { return mode == Mode::Joint || mode == Mode::RiskJoint; }
};

/// Parse/serialize the JSON config document.  parse_config validates and
/// throws std::invalid_argument with field-level messages.
ExperimentConfig parse_config(const std::string& json_text);
std::string serialize_config(const ExperimentConfig& cfg);
ExperimentConfig load_config_file(const std::string& path);

/// Builtin presets for the two reference result tables.  The joint-table
/// preset assumes uniform [1,2] weight intervals (the reference table does
/// not state them).
ExperimentConfig preset_table1();
ExperimentConfig preset_table2();

struct TableRow {
    std::vector<double> threshold;  // {z} or {x, y}
    double sim = 0, sim_stderr = 0;
    double asy1 = 0, asy2 = 0;
    double ratio1 = 0, ratio2 = 0;
    std::optional<IndicatorAsyEstimate> indicator;  // estimator variants
};

/// Runs the configured experiment grid: Monte Carlo simulation plus the
/// closed-form first/second-order evaluations (and optionally the
/// indicator-sum estimator variants).  Warnings go to `log` when given.
std::vector<TableRow> run_experiment(const ExperimentConfig& cfg,
                                     const ExecPolicy& exec = {},
                                     std::ostream* log = nullptr);

/// Writes rows as CSV (UTF-8, LF, 6 significant digits) or as a pipe table.
void emit(const std::vector<TableRow>& rows, OutputFormat format,
          const std::string& path, bool joint_mode);
std::string render(const std::vector<TableRow>& rows, OutputFormat format,
                   bool joint_mode);

/// Markdown diagnostics: local-mass ratio grids per marginal, the pairwise
/// sum-tail expansion against Monte Carlo, and copula sampler checks.
std::string run_diagnostics(const ExperimentConfig& cfg,
                            const ExecPolicy& exec = {});

/// Kolmogorov-Smirnov statistic of one sampled margin against its cdf.
double sampler_ks_statistic(const FgmPair& pair, bool x_margin, std::size_t n,
                            std::uint64_t seed);
/// Empirical Kendall tau of the sampled pair (O(n log n)).
double sampler_kendall_tau(const FgmPair& pair, std::size_t n,
                           std::uint64_t seed);

/// Decimal formatting with 6 significant digits, never scientific.
std::string format_six_signif(double v);

}  // namespace tailasym

#endif
