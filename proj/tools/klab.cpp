#include "klab/errors.hpp"
#include "klab/exponents.hpp"
#include "klab/sweep.hpp"
#include "klab/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

int run_verify(const std::string& suite)
{
    const klab::SuiteReport report = klab::run_verify_suite(suite);
    for (const auto& line : report.table)
        fmt::print("{}\n", line);
    for (const auto& c : report.checks)
        fmt::print("{} {}{}\n", c.pass ? "PASS" : "FAIL", c.name, c.detail.empty() ? "" : ": " + c.detail);
    fmt::print("suite {}: {}\n", report.suite, report.passed() ? "passed" : "FAILED");
    return report.passed() ? exit_ok : exit_failure;
}

int run_sweep(const std::string& config, const std::string& out, int jobs, const std::optional<std::string>& variant)
{
    klab::SweepConfig cfg = klab::load_sweep_config(config);
    if (variant) {
        try {
            cfg.variant = klab::parse_exponent_variant(*variant);
        } catch (const std::invalid_argument& e) {
            throw klab::ConfigError(e.what());
        }
    }
    const auto summary = klab::run_sweep(cfg, out, jobs);
    fmt::print("{} points -> {}\n", summary.points, out);
    fmt::print("max lhs/rhs = {:.6g} at row {}, {} flagged points\n", summary.max_ratio, summary.argmax,
               summary.flagged);
    return exit_ok;
}

std::string status(const klab::NCeiling& c)
{
    if (c.ceiling <= klab::Rational(0))
        return "infeasible (ceiling <= 0)";
    if (c.q_admissible && !*c.q_admissible)
        return fmt::format("infeasible (q above cap {})", c.q_cap->str());
    return "feasible";
}

int run_ranges(const std::string& q_text, const std::string& corollary, const std::optional<std::string>& out)
{
    klab::Rational q;
    klab::Corollary chosen{};
    try {
        q = klab::Rational::parse(q_text);
        chosen = klab::parse_corollary(corollary);
    } catch (const std::invalid_argument& e) {
        throw klab::ConfigError(e.what());
    }
    std::ostringstream csv;
    csv << "variant,corollary,ceiling,status,fr_ceiling,new_ceiling,delta_new_minus_fr\n";
    fmt::print("Q = X^{}, corollary {}: N <= X^(ceiling - eps)\n", q.str(), klab::to_string(chosen));
    fmt::print("{:<8} {:<12} {:<30} {:<12} {:<12} {:<12}\n", "variant", "ceiling", "status", "fr", "new",
               "new - fr");
    for (auto v : {klab::RangeVariant::i, klab::RangeVariant::ii, klab::RangeVariant::iii}) {
        const auto sel = klab::admissible_N_exponent(chosen, v, q);
        const auto fr = klab::admissible_N_exponent(klab::Corollary::fr_cor11, v, q);
        const auto nw = klab::admissible_N_exponent(klab::Corollary::new_cor, v, q);
        const std::string fr_s = fr.feasible ? fr.ceiling.str() : "-";
        const std::string nw_s = nw.feasible ? nw.ceiling.str() : "-";
        std::string delta = "-";
        if (fr.feasible && nw.feasible)
            delta = (nw.ceiling - fr.ceiling).str();
        else if (nw.feasible != fr.feasible)
            delta = nw.feasible ? "new only" : "fr only";
        const std::string name = "(" + klab::to_string(v) + ")";
        fmt::print("{:<8} {:<12} {:<30} {:<12} {:<12} {:<12}\n", name, sel.ceiling.str(), status(sel), fr_s, nw_s,
                   delta);
        csv << fmt::format("{},{},{},{},{},{},{}\n", klab::to_string(v), klab::to_string(chosen), sel.ceiling.str(),
                           status(sel), fr_s, nw_s, delta);
    }
    if (out) {
        std::ofstream os(*out);
        if (!os)
            throw klab::ConfigError(fmt::format("cannot write '{}'", *out));
        os << csv.str();
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kloosterman-fraction and dispersion-sum laboratory"};
    app.require_subcommand(1);

    std::string suite;
    auto* verify = app.add_subcommand("verify", "run an invariant suite");
    verify->add_option("--suite", suite, "arith, decomposition, cauchy_schwarz, dispersion, fourier or exponents")
        ->required();

    std::string config, out;
    int jobs = 1;
    std::optional<std::string> variant;
    auto* sweep = app.add_subcommand("sweep", "evaluate a bound over a parameter grid");
    sweep->add_option("--config", config, "JSON sweep configuration")->required();
    sweep->add_option("--out", out, "CSV output path")->required();
    sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--exponent-variant", variant, "statement or proof (overrides the config)");

    std::string q_text, corollary = "new";
    std::optional<std::string> ranges_out;
    auto* ranges = app.add_subcommand("ranges", "exact N-exponent ceilings for a Q exponent");
    ranges->add_option("--q", q_text, "Q exponent as p/q")->required();
    ranges->add_option("--corollary", corollary, "fr or new");
    ranges->add_option("--out", ranges_out, "optional CSV output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*verify)
            return run_verify(suite);
        if (*sweep)
            return run_sweep(config, out, jobs, variant);
        if (*ranges)
            return run_ranges(q_text, corollary, ranges_out);
    } catch (const klab::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const klab::InvalidExponent& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}
