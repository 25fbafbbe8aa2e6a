#include "klab/sweep.hpp"

#include "klab/dispersion.hpp"
#include "klab/errors.hpp"
#include "klab/forms.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace klab {

using nlohmann::json;

std::string to_string(Formula f)
{
    switch (f) {
    case Formula::BCR:
        return "BCR";
    case Formula::BC:
        return "BC";
    case Formula::C1R:
        return "C1R";
    case Formula::Cb:
        return "Cb";
    case Formula::dispersion:
        return "dispersion";
    }
    return "?";
}

Formula parse_formula(std::string_view s)
{
    for (Formula f : {Formula::BCR, Formula::BC, Formula::C1R, Formula::Cb, Formula::dispersion})
        if (to_string(f) == s)
            return f;
    throw ConfigError(fmt::format("unknown formula '{}'", s));
}

namespace {

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed)
{
    if (!obj.is_object())
        throw ConfigError(fmt::format("'{}' must be an object", where));
    for (const auto& [key, _] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(fmt::format("unknown key '{}' in '{}'", key, where));
}

template <class T>
std::vector<T> read_axis(const json& grid, const char* name, std::vector<T> fallback, bool required)
{
    if (!grid.contains(name)) {
        if (required)
            throw ConfigError(fmt::format("grid axis '{}' is required", name));
        return fallback;
    }
    const json& axis = grid.at(name);
    if (!axis.is_array())
        throw ConfigError(fmt::format("grid axis '{}' must be an array", name));
    if (axis.empty())
        throw ConfigError(fmt::format("grid axis '{}' is empty", name));
    std::vector<T> out;
    for (const json& v : axis) {
        if (!v.is_number_integer())
            throw ConfigError(fmt::format("grid axis '{}' holds a non-integer value {}", name, v.dump()));
        out.push_back(v.get<T>());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void require_at_least(const std::vector<i64>& axis, const char* name, i64 lo)
{
    for (i64 v : axis)
        if (v < lo)
            throw ConfigError(fmt::format("grid axis '{}' must hold values >= {}, got {}", name, lo, v));
}

double read_number(const json& obj, const char* key, double fallback)
{
    if (!obj.contains(key))
        return fallback;
    if (!obj.at(key).is_number())
        throw ConfigError(fmt::format("'{}' must be a number", key));
    return obj.at(key).get<double>();
}

void read_interval(const json& obj, const char* key, double& lo, double& hi)
{
    if (!obj.contains(key))
        return;
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(fmt::format("cutoff '{}' must be [lo, hi]", key));
    lo = v[0].get<double>();
    hi = v[1].get<double>();
}

const std::set<std::string> sequence_kinds = {"ones", "moebius", "random_unit", "tau_k"};

SequenceSpec read_sequence_spec(const json& seqs, const char* role)
{
    if (!seqs.contains(role))
        return {};
    const json& v = seqs.at(role);
    if (!v.is_string() || !sequence_kinds.contains(v.get<std::string>()))
        throw ConfigError(fmt::format("sequence '{}' must be one of ones, moebius, random_unit, tau_k", role));
    return {v.get<std::string>()};
}

} // namespace

SweepConfig parse_sweep_config(std::string_view json_text)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    reject_unknown(root, "config", {"grid", "sequences", "bound", "cutoff", "limits", "seed"});
    if (!root.contains("grid"))
        throw ConfigError("config needs a 'grid' section");

    SweepConfig cfg;
    try {
        const json& grid = root.at("grid");
        reject_unknown(grid, "grid", {"M", "N", "A", "Q", "R", "b", "theta", "a", "seed"});
        cfg.M = read_axis<i64>(grid, "M", {}, true);
        cfg.N = read_axis<i64>(grid, "N", {}, true);
        cfg.A = read_axis<i64>(grid, "A", cfg.A, false);
        cfg.Q = read_axis<i64>(grid, "Q", cfg.Q, false);
        cfg.R = read_axis<i64>(grid, "R", cfg.R, false);
        cfg.b = read_axis<i64>(grid, "b", cfg.b, false);
        cfg.theta = read_axis<i64>(grid, "theta", cfg.theta, false);
        cfg.a = read_axis<i64>(grid, "a", cfg.a, false);
        cfg.seeds = read_axis<std::uint64_t>(grid, "seed", cfg.seeds, false);
        for (auto [axis, name] : {std::pair{&cfg.M, "M"}, {&cfg.N, "N"}, {&cfg.A, "A"}, {&cfg.Q, "Q"},
                                  {&cfg.R, "R"}, {&cfg.b, "b"}})
            require_at_least(*axis, name, 1);
        if (std::find(cfg.theta.begin(), cfg.theta.end(), 0) != cfg.theta.end())
            throw ConfigError("grid axis 'theta' must not contain 0");

        if (root.contains("sequences")) {
            const json& seqs = root.at("sequences");
            reject_unknown(seqs, "sequences", {"alpha", "beta", "nu", "k", "convention"});
            cfg.alpha = read_sequence_spec(seqs, "alpha");
            cfg.beta = read_sequence_spec(seqs, "beta");
            cfg.nu = read_sequence_spec(seqs, "nu");
            if (seqs.contains("k")) {
                if (!seqs.at("k").is_number_unsigned() || seqs.at("k").get<unsigned>() < 1)
                    throw ConfigError("sequences.k must be a positive integer");
                cfg.tau_k = seqs.at("k").get<unsigned>();
            }
            if (seqs.contains("convention"))
                cfg.convention = parse_range_convention(seqs.at("convention").get<std::string>());
        }

        if (root.contains("bound")) {
            const json& bound = root.at("bound");
            reject_unknown(bound, "bound",
                           {"formula", "exponent_variant", "epsilon", "hypothesis_power", "D", "kappa", "C", "estar_A"});
            if (bound.contains("formula"))
                cfg.formula = parse_formula(bound.at("formula").get<std::string>());
            if (bound.contains("exponent_variant"))
                cfg.variant = parse_exponent_variant(bound.at("exponent_variant").get<std::string>());
            cfg.epsilon = read_number(bound, "epsilon", cfg.epsilon);
            cfg.hypothesis_power = read_number(bound, "hypothesis_power", cfg.hypothesis_power);
            cfg.D = read_number(bound, "D", cfg.D);
            cfg.kappa = read_number(bound, "kappa", cfg.kappa);
            cfg.C = read_number(bound, "C", cfg.C);
            cfg.estar_A = read_number(bound, "estar_A", cfg.estar_A);
        }

        if (root.contains("cutoff")) {
            const json& cut = root.at("cutoff");
            reject_unknown(cut, "cutoff", {"support", "plateau", "tolerance"});
            read_interval(cut, "support", cfg.support_lo, cfg.support_hi);
            read_interval(cut, "plateau", cfg.plateau_lo, cfg.plateau_hi);
            cfg.tolerance = read_number(cut, "tolerance", cfg.tolerance);
            SmoothCutoff(cfg.support_lo, cfg.plateau_lo, cfg.plateau_hi, cfg.support_hi, cfg.tolerance);
        }

        if (root.contains("limits")) {
            const json& lim = root.at("limits");
            reject_unknown(lim, "limits", {"max_points"});
            if (lim.contains("max_points")) {
                if (!lim.at("max_points").is_number_unsigned())
                    throw ConfigError("limits.max_points must be a nonnegative integer");
                cfg.max_points = lim.at("max_points").get<std::size_t>();
            }
        }

        if (root.contains("seed")) {
            if (!root.at("seed").is_number_unsigned())
                throw ConfigError("seed must be a nonnegative integer");
            cfg.seed = root.at("seed").get<std::uint64_t>();
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(fmt::format("bad config value: {}", e.what()));
    }

    if (cfg.formula == Formula::BC && cfg.R != std::vector<i64>{1})
        throw ConfigError("formula BC has no R factor; the R axis must be [1]");
    return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot read config '{}'", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_sweep_config(ss.str());
}

std::size_t grid_cap(const SweepConfig& cfg)
{
    if (const char* env = std::getenv("KLAB_GRID_CAP")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw ConfigError(fmt::format("KLAB_GRID_CAP='{}' is not an integer", env));
        return static_cast<std::size_t>(v);
    }
    return cfg.max_points.value_or(1'000'000);
}

std::vector<GridPoint> expand_grid(const SweepConfig& cfg)
{
    if (cfg.M.empty() || cfg.N.empty())
        throw ConfigError("grid axes M and N must be nonempty");
    const std::size_t cap = grid_cap(cfg);
    long double count = 1;
    for (std::size_t s : {cfg.M.size(), cfg.N.size(), cfg.A.size(), cfg.Q.size(), cfg.R.size(), cfg.b.size(),
                          cfg.theta.size(), cfg.a.size(), cfg.seeds.size()})
        count *= static_cast<long double>(s);
    if (count > static_cast<long double>(cap))
        throw ConfigError(fmt::format("grid has {} points, above the cap of {}", static_cast<double>(count), cap));

    std::vector<GridPoint> out;
    out.reserve(static_cast<std::size_t>(count));
    for (i64 M : cfg.M)
        for (i64 N : cfg.N)
            for (i64 A : cfg.A)
                for (i64 Q : cfg.Q)
                    for (i64 R : cfg.R)
                        for (i64 b : cfg.b)
                            for (i64 th : cfg.theta)
                                for (i64 a : cfg.a)
                                    for (std::uint64_t s : cfg.seeds)
                                        out.push_back({M, N, A, Q, R, b, th, a, s});
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t role_seed(std::uint64_t config_seed, std::uint64_t point_seed, unsigned role)
{
    std::seed_seq seq{static_cast<std::uint32_t>(config_seed), static_cast<std::uint32_t>(config_seed >> 32),
                      static_cast<std::uint32_t>(point_seed), static_cast<std::uint32_t>(point_seed >> 32),
                      static_cast<std::uint32_t>(role)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

namespace {

CoefficientSequence make_sequence(const SweepConfig& cfg, const SequenceSpec& spec, i64 base,
                                  std::uint64_t point_seed, unsigned role)
{
    const Support support(DyadicRange(base, cfg.convention));
    SequenceKind kind = kind::Ones{};
    if (spec.kind == "moebius")
        kind = kind::Moebius{};
    else if (spec.kind == "tau_k")
        kind = kind::TauK{cfg.tau_k};
    else if (spec.kind == "random_unit")
        kind = kind::RandomUnit{role_seed(cfg.seed, point_seed, role)};
    return build_sequence(kind, support);
}

std::vector<std::pair<std::string, double>> coordinates(const GridPoint& p)
{
    return {{"M", static_cast<double>(p.M)},         {"N", static_cast<double>(p.N)},
            {"A", static_cast<double>(p.A)},         {"Q", static_cast<double>(p.Q)},
            {"R", static_cast<double>(p.R)},         {"b", static_cast<double>(p.b)},
            {"theta", static_cast<double>(p.theta)}, {"a", static_cast<double>(p.a)},
            {"seed", static_cast<double>(p.seed)}};
}

TrilinearSpec make_spec(const SweepConfig& cfg, const GridPoint& p, u64 R)
{
    return TrilinearSpec{make_sequence(cfg, cfg.alpha, p.M, p.seed, 0), make_sequence(cfg, cfg.beta, p.N, p.seed, 1),
                         make_sequence(cfg, cfg.nu, p.A, p.seed, 2), p.theta, R};
}

BcrOptions bcr_options(const SweepConfig& cfg) { return {cfg.variant, cfg.hypothesis_power}; }

} // namespace

SweepRow evaluate_point(const SweepConfig& cfg, const GridPoint& p)
{
    SweepRow row;
    row.point = p;
    const double M = static_cast<double>(p.M), N = static_cast<double>(p.N), A = static_cast<double>(p.A);
    switch (cfg.formula) {
    case Formula::BCR:
    case Formula::BC: {
        const TrilinearSpec spec = make_spec(cfg, p, static_cast<u64>(p.R));
        const double lhs = std::abs(eval_trilinear_B(spec).value);
        const Norms norms{spec.alpha.l2(), spec.beta.l2(), spec.nu.l2()};
        Rhs rhs = cfg.formula == Formula::BCR
                      ? rhs_theorem_BCR(M, N, A, static_cast<double>(p.R), p.theta, norms, cfg.epsilon,
                                        bcr_options(cfg))
                      : rhs_theorem_BC(M, N, A, p.theta, norms, cfg.epsilon);
        row.report = make_report(lhs, std::move(rhs), coordinates(p));
        break;
    }
    case Formula::C1R: {
        const TrilinearSpec spec = make_spec(cfg, p, static_cast<u64>(p.R));
        const double lhs = eval_C1R_direct(spec);
        row.report = make_report(lhs,
                                 rhs_C1R_bound(M, N, A, static_cast<double>(p.R), p.theta, spec.beta.l2(),
                                               spec.nu.l2(), cfg.epsilon),
                                 coordinates(p));
        break;
    }
    case Formula::Cb: {
        const TrilinearSpec spec = make_spec(cfg, p, 1);
        const double lhs = eval_Cb(spec, static_cast<u64>(p.b));
        row.report = make_report(lhs,
                                 rhs_Cb_bound(M, N, A, static_cast<double>(p.b), p.theta, spec.beta.l2(),
                                              spec.nu.l2(), cfg.epsilon),
                                 coordinates(p));
        break;
    }
    case Formula::dispersion: {
        const auto alpha = make_sequence(cfg, cfg.alpha, p.M, p.seed, 0);
        const auto beta = make_sequence(cfg, cfg.beta, p.N, p.seed, 1);
        const Support moduli(DyadicRange(p.Q, cfg.convention));
        const double lhs = eval_Delta(alpha, beta, moduli, p.a);
        DispersionBoundInput in;
        in.M = M;
        in.N = N;
        in.Q = static_cast<double>(p.Q);
        in.D = cfg.D;
        in.alpha_l2 = alpha.l2();
        in.Estar = estar_sw_proxy(std::max(N, 2.0), in.Q, cfg.estar_A);
        in.kappa = cfg.kappa;
        in.C = cfg.C;
        in.epsilon = cfg.epsilon;
        in.X = M * N;
        row.report = make_report(lhs, rhs_dispersion_thm(in).rhs, coordinates(p));
        const SmoothCutoff psi(cfg.support_lo, cfg.plateau_lo, cfg.plateau_hi, cfg.support_hi, cfg.tolerance);
        const auto split = eval_UVW(alpha, beta, moduli, p.a, psi, M);
        row.cs_majorant = alpha.l2() * std::sqrt(std::max(0.0, split.quadratic()));
        break;
    }
    }
    return row;
}

namespace {

std::string csv_field(std::string s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string join(const std::vector<std::string>& parts, char sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += sep;
        out += parts[i];
    }
    return out;
}

} // namespace

std::vector<std::string> csv_header(const SweepConfig& cfg)
{
    std::vector<std::string> h = {"M", "N", "A", "Q", "R", "b", "theta", "a", "seed", "lhs", "rhs_total", "ratio"};
    Rhs probe;
    const Norms unit;
    switch (cfg.formula) {
    case Formula::BCR:
        probe = rhs_theorem_BCR(1, 1, 1, 1, 1, unit, 0, bcr_options(cfg));
        break;
    case Formula::BC:
        probe = rhs_theorem_BC(1, 1, 1, 1, unit, 0);
        break;
    case Formula::C1R:
        probe = rhs_C1R_bound(1, 1, 1, 1, 1, 1, 1, 0);
        break;
    case Formula::Cb:
        probe = rhs_Cb_bound(1, 1, 1, 1, 1, 1, 1, 0);
        break;
    case Formula::dispersion:
        probe = rhs_dispersion_thm({}).rhs;
        break;
    }
    for (const auto& t : probe.terms)
        h.push_back("rhs:" + t.name);
    if (cfg.formula == Formula::dispersion)
        h.push_back("cs_majorant");
    h.push_back("flags");
    return h;
}

std::string csv_line(const SweepRow& row)
{
    const GridPoint& p = row.point;
    std::vector<std::string> f = {std::to_string(p.M), std::to_string(p.N),     std::to_string(p.A),
                                  std::to_string(p.Q), std::to_string(p.R),     std::to_string(p.b),
                                  std::to_string(p.theta), std::to_string(p.a), std::to_string(p.seed),
                                  num(row.report.lhs), num(row.report.rhs.total), num(row.report.ratio)};
    for (const auto& t : row.report.rhs.terms)
        f.push_back(num(t.value));
    if (row.cs_majorant)
        f.push_back(num(*row.cs_majorant));
    f.push_back(join(row.report.rhs.flags, ';'));
    for (auto& s : f)
        s = csv_field(std::move(s));
    return join(f, ',');
}

namespace {

// Writes through path.tmp and renames, removing the temporary on failure.
template <class Fn>
void write_atomically(const std::filesystem::path& path, Fn&& fill)
{
    auto tmp = path;
    tmp += ".tmp";
    try {
        {
            std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
            if (!os)
                throw std::runtime_error(fmt::format("cannot write '{}'", tmp.string()));
            fill(os);
            os.flush();
            if (!os)
                throw std::runtime_error(fmt::format("write to '{}' failed", tmp.string()));
        }
        std::filesystem::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }
}

json point_json(const GridPoint& p)
{
    return {{"M", p.M}, {"N", p.N}, {"A", p.A}, {"Q", p.Q}, {"R", p.R}, {"b", p.b},
            {"theta", p.theta}, {"a", p.a}, {"seed", p.seed}};
}

} // namespace

SweepSummary run_sweep(const SweepConfig& cfg, const std::filesystem::path& out, int jobs)
{
    if (jobs < 1)
        throw ConfigError("--jobs must be at least 1");
    const auto points = expand_grid(cfg);
    std::vector<SweepRow> rows(points.size());
    std::vector<std::exception_ptr> errors(points.size());

#pragma omp parallel for num_threads(jobs) schedule(dynamic, 1)
    for (std::size_t i = 0; i < points.size(); ++i) {
        try {
            rows[i] = evaluate_point(cfg, points[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    SweepSummary summary;
    summary.points = rows.size();
    std::vector<BoundReport> reports;
    reports.reserve(rows.size());
    for (const auto& r : rows) {
        reports.push_back(r.report);
        if (!r.report.rhs.flags.empty())
            ++summary.flagged;
    }
    if (!reports.empty()) {
        const ImpliedConstant ic = implied_constant_estimate(reports);
        summary.max_ratio = ic.value;
        summary.argmax = ic.argmax;
        summary.argmax_point = rows[ic.argmax].point;
    }

    auto sidecar = out;
    sidecar += ".summary.json";
    try {
        write_atomically(out, [&](std::ostream& os) {
            os << join(csv_header(cfg), ',') << '\n';
            for (const auto& r : rows)
                os << csv_line(r) << '\n';
        });
        const json js = {{"formula", to_string(cfg.formula)},
                         {"exponent_variant", to_string(cfg.variant)},
                         {"epsilon", cfg.epsilon},
                         {"points", summary.points},
                         {"flagged_points", summary.flagged},
                         {"implied_constant", {{"max_ratio", summary.max_ratio},
                                               {"row", summary.argmax},
                                               {"point", point_json(summary.argmax_point)}}}};
        write_atomically(sidecar, [&](std::ostream& os) { os << js.dump(2) << '\n'; });
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(out, ec);
        std::filesystem::remove(sidecar, ec);
        throw;
    }
    return summary;
}

} // namespace klab
