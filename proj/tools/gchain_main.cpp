// Experiment runner for g-chain simulation and mixing diagnostics.
//
// Verbs:
//   run              run a config file or a named preset
//   list-presets     show the preset catalog
//   validate-config  schema-check a config file
//   oracle-check     run the exact-enumeration self-check on a config
//
// CSV outputs (17 significant digits):
//   coupling_tail.csv   n,tailEstimate,ciLow,ciHigh,replicas,censored
//   weak_l2.csv         N,mean,sd,q25,median,q75
//   tv_decay.csv        n,exactTv,exactAvailable,mcTv,mcBiasBound,couplingTail,...
//   beta_mixing.csv     n,betaRaw,betaIsotonic,se,ciLow,ciHigh
//   correlations.csv    j,gamma,se,absPartialSum
//   criteria_scan.csv   k,var,varExact,osc,oscExact,varSqPartial,oscPartial,coefPartial
//   trajectories.csv    replica,t0..tT (symbols as canonical indices)
//   window_law.csv      configuration,probability

#include "gchain/experiment.hpp"
#include "gchain/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;

json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) { throw std::runtime_error("cannot open '" + path + "'"); }
    json j;
    in >> j;
    return j;
}

/// Apply one "dotted.path=value" override; the value is parsed as JSON, with
/// a bare-string fallback.
void apply_override(json& config, const std::string& spec)
{
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
        throw std::runtime_error("override '" + spec + "' must look like path=value");
    }
    const std::string path  = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);
    json              parsed;
    try {
        parsed = json::parse(value);
    }
    catch (const json::parse_error&) {
        parsed = value;
    }
    json*       node = &config;
    std::size_t pos  = 0;
    while (true) {
        const auto dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (key.empty()) { throw std::runtime_error("override path '" + path + "' is malformed"); }
        if (dot == std::string::npos) {
            (*node)[key] = parsed;
            return;
        }
        node = &(*node)[key];
        pos  = dot + 1;
    }
}

std::string default_out_dir()
{
    const char* env = std::getenv("GCHAIN_OUT_DIR");
    return env != nullptr ? env : ".";
}

int write_outputs(const gchain::ExperimentResult& result, const std::string& out_dir,
                  const std::string& name, const std::vector<std::string>& overrides,
                  bool strict)
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    json file;
    file["payload"] = result.payload;
    if (!overrides.empty()) { file["payload"]["overrides"] = overrides; }
    file["meta"] = result.meta;

    const fs::path report_path = fs::path(out_dir) / (name + "_report.json");
    {
        std::ofstream out(report_path);
        out << file.dump(2) << '\n';
    }
    std::cout << "report: " << report_path.string() << '\n';
    for (const auto& [fname, content] : result.csv_files) {
        const fs::path csv_path = fs::path(out_dir) / fname;
        std::ofstream  out(csv_path);
        out << content;
        std::cout << "csv:    " << csv_path.string() << '\n';
    }
    if (result.payload.contains("flags")) {
        std::cout << "flags:  " << result.payload["flags"].dump() << '\n';
    }
    if (result.failed) {
        std::cout << "status: check FAILED\n";
        return 1;
    }
    if (result.inconclusive) {
        std::cout << "status: inconclusive\n";
        return strict ? 2 : 0;
    }
    std::cout << "status: ok\n";
    return 0;
}

int run_config_file(const std::string& config_path, const std::string& forced_kind,
                    const std::vector<std::string>& overrides, std::int64_t seed,
                    int workers, const std::string& out_dir, bool strict)
{
    json config = load_json_file(config_path);
    if (!forced_kind.empty()) {
        if (config.contains("kind") && config["kind"] != forced_kind) {
            throw std::runtime_error("config kind '" + config["kind"].get<std::string>()
                                     + "' does not match the requested verb");
        }
        config["kind"] = forced_kind;
    }
    for (const auto& o : overrides) { apply_override(config, o); }
    if (seed >= 0) { config["rootSeed"] = static_cast<std::uint64_t>(seed); }
    if (workers > 0) { config["workers"] = workers; }

    const gchain::ExperimentConfig cfg    = gchain::parse_config(config);
    const gchain::ExperimentResult result = gchain::run_experiment(cfg);
    return write_outputs(result, out_dir, cfg.name, overrides, strict);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"g-chain simulation and mixing diagnostics"};
    app.require_subcommand(1);

    // ---- run ----
    std::string              config_path;
    std::string              preset_name;
    std::vector<std::string> overrides;
    std::int64_t             seed    = -1;
    int                      workers = 0;
    std::string              out_dir = default_out_dir();
    bool                     strict  = false;

    auto* run = app.add_subcommand("run", "run a config file or preset");
    auto* opt_config = run->add_option("--config", config_path, "experiment config (JSON)");
    auto* opt_preset = run->add_option("--preset", preset_name, "preset name");
    opt_config->excludes(opt_preset);
    run->add_option("--seed", seed, "override rootSeed");
    run->add_option("--workers", workers, "worker threads (results are worker-invariant)");
    run->add_option("--out", out_dir, "output directory (default $GCHAIN_OUT_DIR or .)");
    run->add_flag("--strict", strict, "exit 2 when a verdict is inconclusive");
    run->add_option("--set", overrides,
                    "config override path=value (echoed in the report)");

    // ---- list-presets ----
    bool  presets_json = false;
    auto* list         = app.add_subcommand("list-presets", "show the preset catalog");
    list->add_flag("--json", presets_json, "machine-readable output");

    // ---- validate-config ----
    std::string validate_path;
    auto* validate = app.add_subcommand("validate-config", "schema-check a config file");
    validate->add_option("file", validate_path, "config file")->required();

    // ---- oracle-check ----
    std::string              oc_config;
    std::vector<std::string> oc_overrides;
    std::int64_t             oc_seed    = -1;
    int                      oc_workers = 0;
    std::string              oc_out     = default_out_dir();
    auto* oracle = app.add_subcommand("oracle-check", "exact-enumeration self-checks");
    oracle->add_option("--config", oc_config, "experiment config (JSON)")->required();
    oracle->add_option("--seed", oc_seed, "override rootSeed");
    oracle->add_option("--workers", oc_workers, "worker threads");
    oracle->add_option("--out", oc_out, "output directory");
    oracle->add_option("--set", oc_overrides, "config override path=value");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage errors exit 1; --help exits 0
    }

    try {
        if (run->parsed()) {
            if (!preset_name.empty()) {
                const gchain::ExperimentResult result = gchain::run_preset(
                    preset_name, seed >= 0 ? static_cast<std::uint64_t>(seed) : 1,
                    workers > 0 ? static_cast<unsigned>(workers) : 0);
                return write_outputs(result, out_dir, preset_name, overrides, strict);
            }
            if (config_path.empty()) {
                std::cerr << "run: need --config or --preset\n";
                return 1;
            }
            return run_config_file(config_path, "", overrides, seed, workers, out_dir,
                                   strict);
        }
        if (list->parsed()) {
            if (presets_json) {
                json out = json::array();
                for (const auto& p : gchain::preset_catalog()) {
                    out.push_back({{"name", p.name},
                                   {"anchor", p.anchor},
                                   {"description", p.description}});
                }
                std::cout << out.dump(2) << '\n';
            }
            else {
                for (const auto& p : gchain::preset_catalog()) {
                    std::cout << p.name << "\n    " << p.anchor << "\n    " << p.description
                              << '\n';
                }
            }
            return 0;
        }
        if (validate->parsed()) {
            gchain::parse_config(load_json_file(validate_path));
            std::cout << "ok\n";
            return 0;
        }
        if (oracle->parsed()) {
            return run_config_file(oc_config, "oracle-check", oc_overrides, oc_seed,
                                   oc_workers, oc_out, false);
        }
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
