// hawkes_asy: simulate, resolvent, moments, regvar-check, validate.
// Exit codes: 0 success, 1 validation failure, 2 config error, 3 numerical failure.

#include "hawkes/error.hpp"
#include "hawkes/format.hpp"
#include "hawkes/kernels.hpp"
#include "hawkes/moments.hpp"
#include "hawkes/regvar.hpp"
#include "hawkes/resolvent.hpp"
#include "hawkes/simulator.hpp"
#include "suite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hawkes;

namespace {

enum Exit { ok = 0, validation_failure = 1, config_error = 2, numerical_failure = 3 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

unsigned default_workers()
{
    if (const char* env = std::getenv("HAWKES_ASY_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v < 0)
                throw ConfigError("HAWKES_ASY_WORKERS must be >= 0");
            return static_cast<unsigned>(v);
        } catch (const std::logic_error&) {
            throw ConfigError(std::string("HAWKES_ASY_WORKERS is not an integer: ") + env);
        }
    }
    return 0;
}

// Raw flag values; only the ones given on the command line override the config file.
struct Flags {
    std::string config_path;
    std::string kernel;
    double mu0 = 1.0;
    double horizon = 10.0;
    double step = 0.01;
    std::size_t paths = 1000;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    std::string output;
    std::string format;
    std::vector<double> checkpoints;
    std::string second_order;
    double alpha = 0.5;
    double rho = -0.2;
    std::string family = "power-perturbed";
    double amplitude = 0.05;
    std::vector<int> only;
};

struct Command {
    std::string name;
    CLI::App* app = nullptr;
    json defaults;
};

json load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config file must hold a JSON object");
    // a run manifest carries the resolved config under "config"
    if (j.contains("config") && j.contains("command"))
        return j.at("config");
    return j;
}

void add_option(CLI::App* app, const std::string& name, auto& target, const std::string& help)
{
    app->add_option(name, target, help);
}

// defaults < config file < explicit flags
json resolve(const Command& cmd, const Flags& f)
{
    json cfg = cmd.defaults;
    if (!f.config_path.empty()) {
        const json file = load_config_file(f.config_path);
        for (auto it = file.begin(); it != file.end(); ++it) {
            if (!cfg.contains(it.key()))
                throw ConfigError("unknown config key '" + it.key() + "' for " + cmd.name);
            cfg[it.key()] = it.value();
        }
    }
    auto given = [&](const std::string& flag) {
        const CLI::Option* o = cmd.app->get_option_no_throw("--" + flag);
        return o != nullptr && o->count() > 0;
    };
    auto set = [&](const std::string& key, const json& v) {
        if (given(key))
            cfg[key] = v;
    };
    if (given("kernel")) {
        try {
            cfg["kernel"] = json::parse(f.kernel);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("--kernel: invalid JSON: ") + e.what());
        }
    }
    if (given("second-order")) {
        try {
            cfg["second_order"] = json::parse(f.second_order);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("--second-order: invalid JSON: ") + e.what());
        }
    }
    set("mu0", f.mu0);
    set("horizon", f.horizon);
    set("step", f.step);
    set("paths", f.paths);
    set("seed", f.seed);
    set("workers", f.workers);
    set("format", f.format);
    set("checkpoints", f.checkpoints);
    set("alpha", f.alpha);
    set("rho", f.rho);
    set("family", f.family);
    set("amplitude", f.amplitude);
    set("only", f.only);
    return cfg;
}

template <class T>
T get(const json& cfg, const std::string& key)
{
    try {
        return cfg.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

std::string output_format(const json& cfg, std::initializer_list<const char*> allowed)
{
    const auto f = get<std::string>(cfg, "format");
    for (const char* a : allowed)
        if (f == a)
            return f;
    throw ConfigError("unsupported --format '" + f + "'");
}

KernelSpec kernel_of(const json& cfg)
{
    const json& k = cfg.at("kernel");
    if (k.is_null())
        throw ConfigError("--kernel is required");
    KernelSpec spec = k.is_string() ? kernel_spec_from_string(k.get<std::string>()) : kernel_spec_from_json(k);
    spec.validate();
    return spec;
}

TimeGrid grid_of(const json& cfg)
{
    const TimeGrid g = TimeGrid::from_horizon(get<double>(cfg, "horizon"), get<double>(cfg, "step"));
    g.validate();
    return g;
}

std::optional<SecondOrderParams> second_order_of(const json& cfg)
{
    if (!cfg.contains("second_order") || cfg.at("second_order").is_null())
        return std::nullopt;
    const json& j = cfg.at("second_order");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "alpha" && it.key() != "rho" && it.key() != "A" && it.key() != "C_F")
            throw ConfigError("second_order: unknown key '" + it.key() + "'");
    SecondOrderParams p;
    p.alpha = get<double>(j, "alpha");
    p.rho = get<double>(j, "rho");
    // A(t) = c t^rho; rho defaults to the second-order index
    const json& a = j.at("A");
    const PowerAuxiliary aux{get<double>(a, "c"), a.contains("rho") ? get<double>(a, "rho") : p.rho};
    p.A = aux.fn();
    if (j.contains("C_F"))
        p.C_F = get<double>(j, "C_F");
    p.validate();
    return p;
}

// Writes `name` into the output directory, or to stdout when none is given.
class Sink {
public:
    explicit Sink(std::string dir) : dir_(std::move(dir))
    {
        if (!dir_.empty())
            fs::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& content) const
    {
        if (dir_.empty()) {
            std::cout << content;
            return;
        }
        std::ofstream out(fs::path(dir_) / name, std::ios::binary);
        if (!out)
            throw ConfigError("cannot write " + (fs::path(dir_) / name).string());
        out << content;
    }

    bool has_directory() const { return !dir_.empty(); }

    void manifest(const std::string& command, const json& cfg) const
    {
        if (dir_.empty())
            return;
        const json m{{"command", command}, {"version", HAWKES_VERSION}, {"config", cfg}};
        write("manifest.json", m.dump(2) + "\n");
    }

private:
    std::string dir_;
};

int run_simulate(const json& cfg, const Sink& sink)
{
    SimConfig sc;
    sc.mu0 = get<double>(cfg, "mu0");
    sc.kernel = kernel_of(cfg);
    sc.horizon = get<double>(cfg, "horizon");
    sc.n_paths = get<std::size_t>(cfg, "paths");
    sc.seed = get<std::uint64_t>(cfg, "seed");
    sc.checkpoint_times = get<std::vector<double>>(cfg, "checkpoints");
    sc.validate();
    const std::string format = output_format(cfg, {"json", "csv"});
    SimOptions opt;
    opt.workers = get<unsigned>(cfg, "workers");

    const MonteCarloResult r = monte_carlo_moments(sc, opt);
    if (format == "json") {
        sink.write("moments.json", to_json(r).dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "checkpoint,mean,mean_se,var,var_se,n_paths,seed\n";
        for (const CheckpointMoments& c : r.checkpoints)
            out << format_number(c.checkpoint) << ',' << format_number(c.mean) << ',' << format_number(c.mean_se)
                << ',' << format_number(c.var) << ',' << format_number(c.var_se) << ',' << r.n_paths << ','
                << r.seed << '\n';
        sink.write("moments.csv", out.str());
    }
    sink.manifest("simulate", cfg);
    return ok;
}

int run_resolvent(const json& cfg, const Sink& sink)
{
    const Kernel k = build_kernel(kernel_of(cfg));
    const TimeGrid grid = grid_of(cfg);
    const std::string format = output_format(cfg, {"csv", "json"});
    const ResolventProfile p = solve_resolvent(k, grid);
    if (p.warning)
        std::cerr << "warning: " << *p.warning << '\n';
    if (format == "csv") {
        std::ostringstream out;
        write_csv(p, out);
        sink.write("resolvent.csv", out.str());
    } else {
        json rows = json::array();
        for (std::size_t i = 1; i <= grid.n_steps; ++i)
            rows.push_back({{"t", grid.node(i)}, {"R", p.R[i - 1]}, {"IR", p.IR[i]}, {"IR2", p.IR2[i]}});
        sink.write("resolvent.json",
                   json{{"method", to_string(p.method)}, {"rows", rows}}.dump(2) + "\n");
    }
    sink.manifest("resolvent", cfg);
    return ok;
}

void append_rows(const MomentCurve& c, json& rows)
{
    for (std::size_t i = 1; i <= c.grid.n_steps; ++i)
        rows.push_back({{"t", c.grid.node(i)},
                        {"mean", c.mean[i]},
                        {"variance", c.variance[i]},
                        {"source", to_string(c.source)},
                        {"regime_case", c.regime_case}});
}

int run_moments(const json& cfg, const Sink& sink)
{
    const Kernel k = build_kernel(kernel_of(cfg));
    const TimeGrid grid = grid_of(cfg);
    const double mu0 = get<double>(cfg, "mu0");
    const std::string format = output_format(cfg, {"csv", "json"});
    const std::optional<SecondOrderParams> so = second_order_of(cfg);
    const Regime regime = classify_regime(k);

    std::vector<MomentCurve> curves;
    curves.push_back(exact_moments(solve_resolvent(k, grid), mu0, regime));
    try {
        curves.push_back(first_order_curve(k, mu0, grid));
    } catch (const UnsupportedRegime& e) {
        std::cerr << "note: first-order rows skipped: " << e.what() << '\n';
    }
    if (regime == Regime::StronglyCritical && !so) {
        std::cerr << "note: second-order rows skipped: strongly critical kernel without --second-order\n";
    } else {
        try {
            curves.push_back(second_order_curve(second_order_approx(k, mu0, so), mu0, grid));
        } catch (const UnmatchedCase& e) {
            std::cerr << "note: second-order rows skipped: " << e.what() << '\n';
        }
    }

    // every row carries the finest available case label
    const std::string label = curves.back().regime_case.empty() ? to_string(regime) : curves.back().regime_case;
    for (MomentCurve& c : curves)
        c.regime_case = label;

    if (format == "csv") {
        std::ostringstream out;
        for (std::size_t i = 0; i < curves.size(); ++i)
            write_csv(curves[i], out, i == 0);
        sink.write("moments.csv", out.str());
    } else {
        json rows = json::array();
        for (const MomentCurve& c : curves)
            append_rows(c, rows);
        sink.write("moments.json", json{{"regime", to_string(regime)}, {"rows", rows}}.dump(2) + "\n");
    }
    sink.manifest("moments", cfg);
    return ok;
}

int run_regvar_check(const json& cfg, const Sink& sink)
{
    const auto family = get<std::string>(cfg, "family");
    if (family != "power-perturbed")
        throw ConfigError("unknown --family '" + family + "' (supported: power-perturbed)");
    output_format(cfg, {"json"});
    const PowerPerturbedFamily f{get<double>(cfg, "alpha"), get<double>(cfg, "rho"), get<double>(cfg, "amplitude")};
    const MembershipReport r = check_membership(f.fn(), f.params());

    json samples = json::array();
    for (const MembershipSample& s : r.samples)
        samples.push_back(
            {{"t", s.t}, {"x", s.x}, {"value", s.value}, {"target", s.target}, {"rel_error", s.rel_error}});
    json out{{"family", family}, {"alpha", f.alpha},   {"rho", f.rho},       {"amplitude", f.amplitude},
             {"pass", r.pass},   {"reason", r.reason}, {"samples", samples}};
    sink.write("regvar_report.json", out.dump(2) + "\n");
    sink.manifest("regvar-check", cfg);
    return r.pass ? ok : validation_failure;
}

int run_validate(const json& cfg, const Sink& sink)
{
    acceptance::SuiteOptions opt;
    opt.workers = get<unsigned>(cfg, "workers");
    opt.seed = get<std::uint64_t>(cfg, "seed");
    for (int id : get<std::vector<int>>(cfg, "only")) {
        if (id < 1 || id > acceptance::criterion_count)
            throw ConfigError("--only: no criterion " + std::to_string(id));
        opt.only.insert(id);
    }
    const auto results = acceptance::run_suite(opt, std::cout);
    bool all = true;
    json rows = json::array();
    for (const auto& r : results) {
        all = all && r.pass;
        rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
    }
    std::cout << (all ? "all criteria passed" : "some criteria failed") << std::endl;
    if (sink.has_directory())
        sink.write("acceptance.json", json{{"pass", all}, {"criteria", rows}}.dump(2) + "\n");
    sink.manifest("validate", cfg);
    return all ? ok : validation_failure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Moment asymptotics and simulation of Hawkes processes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", HAWKES_VERSION);

    Flags f;
    std::vector<Command> cmds;

    auto common = [&](CLI::App* s) {
        s->add_option("--config", f.config_path, "JSON config file or run manifest; flags override it")
            ->check(CLI::ExistingFile);
        s->add_option("--output", f.output, "output directory (stdout when absent)");
        if (s->get_name() != "validate")
            s->add_option("--format", f.format, "csv or json");
    };
    auto kernel_flags = [&](CLI::App* s) {
        s->add_option("--kernel", f.kernel, R"(kernel spec, e.g. '{"family":"Exponential","params":{"m":0.5}}')");
        s->add_option("--horizon", f.horizon, "time horizon T");
    };

    {
        CLI::App* s = app.add_subcommand("simulate", "Monte-Carlo mean and variance of N(t)");
        common(s);
        kernel_flags(s);
        add_option(s, "--mu0", f.mu0, "baseline intensity");
        add_option(s, "--paths", f.paths, "number of simulated paths");
        add_option(s, "--seed", f.seed, "random seed");
        add_option(s, "--workers", f.workers, "worker threads (0: all cores)");
        s->add_option("--checkpoints", f.checkpoints, "checkpoint times (default: horizon)")->delimiter(',');
        cmds.push_back({"simulate", s,
                        json{{"kernel", nullptr},
                             {"mu0", 1.0},
                             {"horizon", 10.0},
                             {"paths", 1000},
                             {"seed", 0},
                             {"workers", 0},
                             {"checkpoints", json::array()},
                             {"format", "json"}}});
    }
    {
        CLI::App* s = app.add_subcommand("resolvent", "Resolvent profile R, I_R, I_R^2 on a grid");
        common(s);
        kernel_flags(s);
        add_option(s, "--step", f.step, "grid step h");
        cmds.push_back({"resolvent", s,
                        json{{"kernel", nullptr}, {"horizon", 10.0}, {"step", 0.01}, {"format", "csv"}}});
    }
    {
        CLI::App* s = app.add_subcommand("moments", "Exact, first-order and second-order moment curves");
        common(s);
        kernel_flags(s);
        add_option(s, "--mu0", f.mu0, "baseline intensity");
        add_option(s, "--step", f.step, "grid step h");
        s->add_option("--second-order", f.second_order,
                      R"(second-order description of the tail, e.g. '{"alpha":-0.6,"rho":-0.3,"A":{"c":0.5},"C_F":1}')");
        cmds.push_back({"moments", s,
                        json{{"kernel", nullptr},
                             {"mu0", 1.0},
                             {"horizon", 10.0},
                             {"step", 0.01},
                             {"second_order", nullptr},
                             {"format", "csv"}}});
    }
    {
        CLI::App* s = app.add_subcommand("regvar-check", "Second-order regular variation membership report");
        common(s);
        add_option(s, "--alpha", f.alpha, "index alpha");
        add_option(s, "--rho", f.rho, "second-order index rho < 0");
        add_option(s, "--family", f.family, "test family (power-perturbed)");
        add_option(s, "--amplitude", f.amplitude, "amplitude c of t^alpha (1 + c t^rho)");
        cmds.push_back({"regvar-check", s,
                        json{{"family", "power-perturbed"},
                             {"alpha", 0.5},
                             {"rho", -0.2},
                             {"amplitude", 0.05},
                             {"format", "json"}}});
    }
    {
        CLI::App* s = app.add_subcommand("validate", "Run the acceptance suite");
        common(s);
        add_option(s, "--seed", f.seed, "Monte-Carlo seed");
        add_option(s, "--workers", f.workers, "worker threads (0: all cores)");
        s->add_option("--only", f.only, "criteria to run, e.g. 1,2,9")->delimiter(',');
        cmds.push_back({"validate", s,
                        json{{"seed", acceptance::SuiteOptions{}.seed},
                             {"workers", 0},
                             {"only", json::array()}}});
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        for (Command& c : cmds) {
            if (!c.app->parsed())
                continue;
            if (c.defaults.contains("workers"))
                c.defaults["workers"] = default_workers();
            const json cfg = resolve(c, f);
            const Sink sink(f.output);
            if (c.name == "simulate")
                return run_simulate(cfg, sink);
            if (c.name == "resolvent")
                return run_resolvent(cfg, sink);
            if (c.name == "moments")
                return run_moments(cfg, sink);
            if (c.name == "regvar-check")
                return run_regvar_check(cfg, sink);
            return run_validate(cfg, sink);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const InvalidSpec& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const UnsupportedRegime& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const UnmatchedCase& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    } catch (const DomainError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    }
    return config_error;
}
