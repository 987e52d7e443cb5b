#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "subdiff/discovery.hpp"
#include "subdiff/grid.hpp"
#include "subdiff/mlp.hpp"
#include "subdiff/noise.hpp"
#include "subdiff/sources.hpp"
#include "subdiff/trainer.hpp"

namespace subdiff {

/// One experiment cell: which benchmark, which surrogate, which noise, which
/// mesh, and the optimizer settings. `seed` empty means "derive the default
/// from (example, type, noise kind, level, n)".
struct ExperimentConfig {
    ExampleId example = ExampleId::ex1;
    NetworkType network_type = NetworkType::type1;
    double alpha = 0.3;
    std::vector<double> alpha_sequence = {0.1, 0.2, 0.3, 0.4, 0.5,
                                          0.6, 0.7, 0.8, 0.9, 1.0};
    NoiseKind noise = NoiseKind::none;
    double noise_level = 0.0;
    int n = 100;  // intervals per axis; h_x = h_t = 1/n
    int epochs = 0;  // 0 = benchmark default for (example, type)
    int batch_size = 256;
    double learning_rate = 1e-2;
    InitKind init = InitKind::uniform;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "runs";
};

/// Throws std::invalid_argument when fields are inconsistent (in particular
/// the noise pairing: ex1/ex2 take uniform noise, ex3 gaussian).
void validate(const ExperimentConfig& config);

/// Benchmark epoch counts: ex1 250, ex2 200 (type1) / 270 (type2),
/// ex3 255 (type1) / 270 (type2).
int resolved_epochs(const ExperimentConfig& config);

/// The configured seed, or the default derived from
/// (example, type, noise kind, level, n).
std::uint64_t resolved_seed(const ExperimentConfig& config);

/// Output directory after applying the SUBDIFF_OUT_ROOT override.
std::filesystem::path resolve_out_root(const ExperimentConfig& config);

/// Error thrown by the pipeline, tagged with the stage that failed.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message)
        : std::runtime_error("[" + stage + "] " + message), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

/// Everything a finished cell run produced (and where it was written).
struct RunArtifacts {
    std::filesystem::path dir;
    double error = 0.0;  // relative error against the (noisy) source
    TrainReport report;
};

/// Algorithm steps 1-15 for one cell: sample the noisy source, solve forward,
/// recover the target, assemble, initialize, train, evaluate, measure, and
/// write report/CSV/checkpoint atomically into a run directory.
RunArtifacts run_experiment(const ExperimentConfig& config);

struct TableConfig {
    ExperimentConfig base;
    std::vector<double> levels = {0.5, 0.2, 0.1, 0.0};
    std::vector<int> grids = {25, 50, 100};
    std::vector<double> alphas = {0.1, 0.3, 0.5, 0.7, 1.0};
    bool force_retrain = false;  // type1: retrain per alpha column
};

/// Relative errors keyed by (noise level, grid) rows and alpha columns.
struct ResultTable {
    ExampleId example = ExampleId::ex1;
    NetworkType network_type = NetworkType::type1;
    double alpha = 0.3;
    std::vector<double> alpha_sequence;
    NoiseKind noise = NoiseKind::none;
    int epochs = 0;
    int batch_size = 256;
    double learning_rate = 1e-2;
    InitKind init = InitKind::uniform;
    std::optional<std::uint64_t> seed;
    bool force_retrain = false;

    std::vector<double> levels;
    std::vector<int> grids;
    std::vector<double> alphas;
    std::vector<std::vector<double>> cells;       // [row][column]
    std::vector<std::vector<std::string>> notes;  // failure messages, "" if ok

    int row_count() const { return static_cast<int>(levels.size() * grids.size()); }
    bool complete() const;

    bool operator==(const ResultTable& other) const;
};

/// Run every cell (level-major, then grid, then column); failed cells are
/// marked in `notes` instead of aborting the sweep. Writes per-run artifacts
/// plus table.txt / table.csv under the base out_dir.
ResultTable run_table(const TableConfig& config);

std::string serialize_table_text(const ResultTable& table);
ResultTable parse_table_text(const std::string& text);
std::string render_table_csv(const ResultTable& table);

/// Config echo embedded in reports; parse_report_config inverts it so a
/// finished run can be re-executed (or re-exported) exactly.
std::string serialize_report(const TrainReport& report, const ExperimentConfig& config);
ExperimentConfig parse_report_config(const std::string& text);

/// Re-derive the field CSV of a finished run directory from its report and
/// checkpoint, writing to `destination`. Byte-identical to the original dump.
void export_fields(const std::filesystem::path& run_dir,
                   const std::filesystem::path& destination);

}  // namespace subdiff
