#pragma once

// Parameter sweeps: a JSON config names the grid axes, the coefficient
// sequences and the bound being tested; every grid point yields one CSV row
// with lhs, rhs total, ratio and the per-term rhs breakdown.
//
// Config keys (all others are rejected):
//   grid:      {"M": [..], "N": [..], "A", "Q", "R", "b", "theta", "a", "seed"}
//              M and N are required; missing axes default to a single value
//              (A=Q=R=b=theta=a=1, seed=0).
//   sequences: {"alpha", "beta", "nu": "ones" | "moebius" | "random_unit" | "tau_k",
//               "k": 2, "convention": "half_open" | "closed"}
//   bound:     {"formula": "BCR" | "BC" | "C1R" | "Cb" | "dispersion",
//               "exponent_variant": "statement" | "proof", "epsilon": 0.01,
//               "hypothesis_power": 10, "D": 1, "kappa": 0, "C": 0, "estar_A": 1}
//   cutoff:    {"support": [lo, hi], "plateau": [lo, hi], "tolerance": 1e-10}
//   limits:    {"max_points": n}
//   seed:      integer mixed into every random_unit sequence

#include "klab/bounds.hpp"
#include "klab/sequences.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace klab {

enum class Formula { BCR, BC, C1R, Cb, dispersion };

std::string to_string(Formula f);
Formula parse_formula(std::string_view s);

struct SequenceSpec {
    std::string kind = "ones";
};

struct SweepConfig {
    std::vector<i64> M, N;
    std::vector<i64> A{1}, Q{1}, R{1}, b{1}, theta{1}, a{1};
    std::vector<std::uint64_t> seeds{0};

    SequenceSpec alpha, beta, nu;
    unsigned tau_k = 2;
    RangeConvention convention = RangeConvention::half_open;

    Formula formula = Formula::BCR;
    ExponentVariant variant = ExponentVariant::theorem_statement;
    double epsilon = 0.01;
    double hypothesis_power = 10;
    double D = 1, kappa = 0, C = 0, estar_A = 1;

    double support_lo = 0.5, support_hi = 2.5;
    double plateau_lo = 1.0, plateau_hi = 2.0;
    double tolerance = 1e-10;

    std::optional<std::size_t> max_points;
    std::uint64_t seed = 0;
};

/// Throws ConfigError on malformed JSON, unknown keys, empty axes or bad values.
SweepConfig parse_sweep_config(std::string_view json_text);
SweepConfig load_sweep_config(const std::filesystem::path& path);

struct GridPoint {
    i64 M = 1, N = 1, A = 1, Q = 1, R = 1, b = 1, theta = 1, a = 1;
    std::uint64_t seed = 0;

    auto operator<=>(const GridPoint&) const = default;
};

/// KLAB_GRID_CAP when set, else limits.max_points, else 10^6.
std::size_t grid_cap(const SweepConfig& cfg);

/// All grid points in sorted order. Throws ConfigError beyond grid_cap.
std::vector<GridPoint> expand_grid(const SweepConfig& cfg);

/// Seed of the random_unit sequence of one role (0 = alpha, 1 = beta, 2 = nu)
/// at one point, from std::seed_seq over (config seed, point seed, role).
std::uint64_t role_seed(std::uint64_t config_seed, std::uint64_t point_seed, unsigned role);

struct SweepRow {
    GridPoint point;
    BoundReport report;
    // dispersion only: ||alpha|| (W - 2 Re V + U)^{1/2}
    std::optional<double> cs_majorant;
};

SweepRow evaluate_point(const SweepConfig& cfg, const GridPoint& p);

std::vector<std::string> csv_header(const SweepConfig& cfg);
std::string csv_line(const SweepRow& row);

struct SweepSummary {
    std::size_t points = 0;
    double max_ratio = 0;
    std::size_t argmax = 0;
    GridPoint argmax_point;
    std::size_t flagged = 0;
};

/// Evaluates every point on up to `jobs` threads, writes the CSV to `out` and
/// the summary to `out` + ".summary.json". Both files go through a temporary
/// and a rename; nothing is left behind on failure.
SweepSummary run_sweep(const SweepConfig& cfg, const std::filesystem::path& out, int jobs);

} // namespace klab
