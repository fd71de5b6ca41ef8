#pragma once

#include "nextmethod/clustering.hpp"
#include "nextmethod/corpus.hpp"
#include "nextmethod/evaluation.hpp"

#include <array>
#include <compare>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nextmethod {

struct TuningGrid {
    std::vector<double> min_confidence;
    std::vector<double> min_support;
    std::vector<double> lambda;
    std::vector<std::size_t> max_lhs;

    /// con x sup x lambda x max_LHS as used for the published sweep.
    static TuningGrid defaults();

    std::size_t size() const { return min_confidence.size() * min_support.size() * lambda.size() * max_lhs.size(); }
};

/// Reads a TOML grid with optional arrays `con`, `sup`, `lambda` and
/// `max_lhs`; missing keys keep the default values. Throws
/// std::invalid_argument on syntax errors, empty arrays or out-of-range values.
TuningGrid parse_grid(std::string_view toml_text);
TuningGrid load_grid(const std::filesystem::path& path);

struct TuningConfig {
    double min_confidence = 0.0;
    double min_support = 0.0;
    double lambda = 0.0;
    std::size_t max_lhs = 1;

    auto operator<=>(const TuningConfig&) const = default;
};

struct TuningResult {
    TuningConfig config;
    std::size_t clusters = 0;
    std::size_t rules = 0;
    EvalReport report;
};

struct TuningOptions {
    unsigned workers = 1;
    EdgeThreshold edge_threshold = EdgeThreshold::inclusive;
    /// Called once per finished configuration, from one thread at a time.
    std::function<void(const TuningResult&)> on_result;
};

/// Clusters the training commits at every λ, mines rules for every
/// (sup, con, max_LHS) and replays the validation commits with γ = λ.
/// Returns one result per grid point ordered by (λ, sup, max_LHS, con).
/// Throws std::invalid_argument on an empty grid.
std::vector<TuningResult> tune(const TuningGrid& grid, const std::vector<CommitRecord>& train,
                               const std::vector<CommitRecord>& validation, const TuningOptions& options = {});

/// Results CSV: configuration columns followed by the report row labels.
void write_results_header(std::ostream& out);
void write_result_row(std::ostream& out, const TuningResult& result);
void write_results(std::ostream& out, const std::vector<TuningResult>& results);

/// Throws std::invalid_argument on a malformed file.
std::vector<TuningResult> read_results(std::istream& in);

enum class Sensitivity { high, medium, low };

std::string to_string(Sensitivity level);
/// Throws std::invalid_argument for anything but high, medium or low.
Sensitivity parse_sensitivity(std::string_view text);

struct PresetChoice {
    Sensitivity level = Sensitivity::high;
    double precision_floor = 0.0;
    std::optional<TuningResult> choice;  // unset when no configuration reaches the floor
};

inline constexpr std::array<double, 3> kPrecisionFloors{0.50, 0.60, 0.70};

/// For each floor: among results with precision >= floor, the one with the
/// highest cov_commits; ties go to higher precision, then the smaller config.
/// Throws std::invalid_argument on empty input.
std::array<PresetChoice, 3> select_presets(const std::vector<TuningResult>& results);

}  // namespace nextmethod
