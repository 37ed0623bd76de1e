#include "gchain/experiment.hpp"

#include "gchain/criteria.hpp"
#include "gchain/diagnostics.hpp"
#include "gchain/models_io.hpp"
#include "gchain/numeric.hpp"
#include "gchain/oracle.hpp"
#include "gchain/parallel.hpp"
#include "gchain/report.hpp"
#include "gchain/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <stdexcept>

namespace gchain {

using nlohmann::json;

namespace {

const json& require_field(const json& j, const char* field)
{
    const auto it = j.find(field);
    if (it == j.end()) {
        throw std::invalid_argument(std::string("config: missing field '") + field + "'");
    }
    return *it;
}

std::int64_t require_int(const json& j, const char* field)
{
    const json& v = require_field(j, field);
    if (!v.is_number_integer()) {
        throw std::invalid_argument(std::string("config: field '") + field
                                    + "' must be an integer");
    }
    return v.get<std::int64_t>();
}

std::int64_t int_or(const json& j, const char* field, std::int64_t fallback)
{
    if (!j.contains(field) || j[field].is_null()) { return fallback; }
    if (!j[field].is_number_integer()) {
        throw std::invalid_argument(std::string("config: field '") + field
                                    + "' must be an integer");
    }
    return j[field].get<std::int64_t>();
}

std::vector<std::int64_t> int_list(const json& j, const char* field)
{
    const json& v = require_field(j, field);
    if (!v.is_array() || v.empty()) {
        throw std::invalid_argument(std::string("config: field '") + field
                                    + "' must be a nonempty array");
    }
    std::vector<std::int64_t> out;
    for (const auto& x : v) {
        if (!x.is_number_integer()) {
            throw std::invalid_argument(std::string("config: field '") + field
                                        + "' must contain integers");
        }
        out.push_back(x.get<std::int64_t>());
    }
    return out;
}

std::string timestamp_utc()
{
    const auto  now = std::chrono::system_clock::now();
    std::time_t t   = std::chrono::system_clock::to_time_t(now);
    char        buf[32];
    std::tm     tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

const char* const kKinds[] = {"weak-l2",     "p-weak-l2",    "tv-decay",
                              "coupling-tail", "beta-mixing", "correlations",
                              "criteria-scan", "oracle-check"};

} // namespace

Past past_from_json(const json& j, const Alphabet& alphabet, const char* field_name)
{
    const auto bad = [&](const char* why) {
        throw std::invalid_argument(std::string("config: field '") + field_name + "' " + why);
    };
    if (!j.is_object()) { bad("must be a past object"); }
    if (j.contains("all")) {
        return Past::all(alphabet.index_of(j["all"].get<std::string>()));
    }
    if (!j.contains("suffix") || !j.contains("tail")) {
        bad("needs either 'all' or 'suffix' + 'tail'");
    }
    std::vector<int> suffix, tail;
    for (const auto& s : j["suffix"]) { suffix.push_back(alphabet.index_of(s.get<std::string>())); }
    for (const auto& s : j["tail"]) { tail.push_back(alphabet.index_of(s.get<std::string>())); }
    if (tail.empty()) { bad("tail pattern must be nonempty"); }
    return Past(std::move(suffix), std::move(tail));
}

ExperimentConfig parse_config(const json& j)
{
    if (!j.is_object()) { throw std::invalid_argument("config: must be a JSON object"); }
    const std::int64_t version = require_int(j, "schemaVersion");
    if (version != 1) {
        throw std::invalid_argument("config: field 'schemaVersion' must be 1");
    }
    ExperimentConfig c;
    c.kind = require_field(j, "kind").get<std::string>();
    bool known = false;
    for (const char* k : kKinds) { known = known || c.kind == k; }
    if (!known) {
        throw std::invalid_argument("config: field 'kind' must be one of weak-l2|p-weak-l2|"
                                    "tv-decay|coupling-tail|beta-mixing|correlations|"
                                    "criteria-scan|oracle-check");
    }
    require_field(j, "model");
    const json& seed = require_field(j, "rootSeed");
    if (!seed.is_number_integer() && !seed.is_number_unsigned()) {
        throw std::invalid_argument("config: field 'rootSeed' must be an integer");
    }
    c.root_seed = seed.get<std::uint64_t>();
    c.name      = j.contains("name") ? j["name"].get<std::string>() : c.kind;
    c.workers   = static_cast<unsigned>(int_or(j, "workers", 0));

    c.raw = j;
    c.raw.erase("workers"); // scheduling only; must not enter the payload
    return c;
}

namespace {

struct RunContext {
    const ExperimentConfig&       config;
    std::shared_ptr<const Kernel> kernel;
    unsigned                      workers;
    RngStream                     rng;
};

json run_weak_l2(RunContext& ctx, ExperimentResult& result)
{
    const json& j = ctx.config.raw;
    const json& pasts = require_field(j, "pasts");
    const Past  x = past_from_json(require_field(pasts, "x"), ctx.kernel->alphabet(), "pasts.x");
    const Past  y = past_from_json(require_field(pasts, "y"), ctx.kernel->alphabet(), "pasts.y");

    WeakL2Options opt;
    opt.horizon  = require_int(j, "horizon");
    opt.replicas = require_int(j, "replicas");
    if (j.contains("checkpoints")) { opt.checkpoints = int_list(j, "checkpoints"); }
    opt.workers             = ctx.workers;
    opt.keep_replica_curves = false;

    const WeakL2Curve curve = weak_l2_curve(*ctx.kernel, x, y, opt, ctx.rng);
    result.inconclusive     = curve.verdict == Verdict::inconclusive;
    result.csv_files.emplace_back("weak_l2.csv", weak_l2_csv(curve));
    json out;
    out["weakL2"] = to_json(curve);
    return out;
}

json run_p_weak_l2(RunContext& ctx, ExperimentResult& result)
{
    const json& j       = ctx.config.raw;
    const json& sampler = require_field(j, "sampler");

    PWeakL2Options opt;
    opt.pairs      = require_int(j, "pairs");
    opt.suffix_len = require_int(sampler, "suffixLength");
    opt.burn_in    = int_or(sampler, "burnIn", default_burn_in(*ctx.kernel).steps);
    opt.initial    = sampler.contains("initial")
                         ? past_from_json(sampler["initial"], ctx.kernel->alphabet(),
                                          "sampler.initial")
                         : Past::all(ctx.kernel->alphabet().size() - 1);
    opt.per_pair.horizon  = require_int(j, "horizon");
    opt.per_pair.replicas = require_int(j, "replicas");
    opt.per_pair.workers  = ctx.workers;

    const PWeakL2Result r = p_weak_l2_curve(*ctx.kernel, opt, ctx.rng);
    result.inconclusive   = r.inconclusive * 2 > opt.pairs;
    json out;
    out["pWeakL2"] = to_json(r);
    return out;
}

json run_tv_decay(RunContext& ctx, ExperimentResult& result)
{
    const json& j     = ctx.config.raw;
    const json& pasts = require_field(j, "pasts");
    const Past  x = past_from_json(require_field(pasts, "x"), ctx.kernel->alphabet(), "pasts.x");
    const Past  y = past_from_json(require_field(pasts, "y"), ctx.kernel->alphabet(), "pasts.y");

    TvDecayOptions opt;
    opt.horizons          = int_list(j, "horizons");
    opt.window_w          = require_int(j, "window");
    opt.mc_replicas       = int_or(j, "mcReplicas", 10000);
    opt.coupling_replicas = int_or(j, "couplingReplicas", 10000);
    opt.coupling_T        = int_or(j, "couplingT", -1);
    opt.coupling_W        = int_or(j, "couplingW", -1);
    opt.oracle_paths = static_cast<std::uint64_t>(
        int_or(j, "oraclePaths", static_cast<std::int64_t>(std::uint64_t{1} << 24)));
    opt.workers = ctx.workers;

    const TvDecayCurve curve = tv_decay_curve(*ctx.kernel, x, y, opt, ctx.rng);
    result.csv_files.emplace_back("tv_decay.csv", tv_decay_csv(curve));
    result.csv_files.emplace_back("coupling_tail.csv", coupling_curve_csv(curve.coupling));
    json out;
    out["tvDecay"] = to_json(curve);
    return out;
}

json run_coupling_tail(RunContext& ctx, ExperimentResult& result)
{
    const json& j     = ctx.config.raw;
    const json& pasts = require_field(j, "pasts");
    const Past  x = past_from_json(require_field(pasts, "x"), ctx.kernel->alphabet(), "pasts.x");
    const Past  y = past_from_json(require_field(pasts, "y"), ctx.kernel->alphabet(), "pasts.y");

    auto         horizons = int_list(j, "horizons");
    std::int64_t max_h    = *std::max_element(horizons.begin(), horizons.end());
    std::int64_t W        = int_or(j, "W", -1);
    std::int64_t T        = int_or(j, "T", -1);
    if (T < 0) {
        W = W < 0 ? std::max<std::int64_t>(1, max_h / 2) : W;
        T = max_h + W;
    }
    else if (W < 0) {
        W = std::max<std::int64_t>(1, T / 4);
    }
    const std::int64_t replicas = require_int(j, "replicas");

    const CouplingTailCurve curve = coupling_time_tail(
        *ctx.kernel, x, y, std::move(horizons), T, W, replicas, ctx.rng, ctx.workers);
    result.csv_files.emplace_back("coupling_tail.csv", coupling_curve_csv(curve));
    json out;
    out["couplingTail"] = to_json(curve);
    return out;
}

json run_beta_mixing(RunContext& ctx, ExperimentResult& result)
{
    const json& j       = ctx.config.raw;
    const json& sampler = require_field(j, "sampler");

    BetaMixingOptions opt;
    opt.horizons        = int_list(j, "horizons");
    opt.window_w        = require_int(j, "window");
    opt.pairs           = require_int(j, "pairs");
    opt.prefix_replicas = int_or(j, "prefixReplicas", 20000);
    opt.suffix_len      = require_int(sampler, "suffixLength");
    opt.burn_in         = int_or(sampler, "burnIn", default_burn_in(*ctx.kernel).steps);
    opt.initial         = sampler.contains("initial")
                              ? past_from_json(sampler["initial"], ctx.kernel->alphabet(),
                                               "sampler.initial")
                              : Past::all(ctx.kernel->alphabet().size() - 1);
    opt.workers = ctx.workers;

    const BetaMixingCurve curve = beta_mixing_curve(*ctx.kernel, opt, ctx.rng);
    result.csv_files.emplace_back("beta_mixing.csv", beta_mixing_csv(curve));
    json out;
    out["betaMixing"] = to_json(curve);
    return out;
}

json run_correlations(RunContext& ctx, ExperimentResult& result)
{
    const json& j = ctx.config.raw;

    CorrelationOptions opt;
    opt.j_max         = require_int(j, "jMax");
    opt.sample_length = require_int(j, "sampleLength");
    opt.replicas      = require_int(j, "replicas");
    opt.burn_in       = int_or(j, "burnIn", default_burn_in(*ctx.kernel).steps);
    opt.initial       = j.contains("initial")
                            ? past_from_json(j["initial"], ctx.kernel->alphabet(), "initial")
                            : Past::all(ctx.kernel->alphabet().size() - 1);
    opt.workers = ctx.workers;

    const CorrelationCurve curve = correlation_curve(*ctx.kernel, opt, ctx.rng);
    result.inconclusive = curve.summability.verdict == Verdict::inconclusive;
    result.csv_files.emplace_back("correlations.csv", correlation_csv(curve));
    json out;
    out["correlations"] = to_json(curve);
    return out;
}

json run_criteria_scan(RunContext& ctx, ExperimentResult& result)
{
    const json&        j     = ctx.config.raw;
    const std::int64_t k_max = require_int(j, "kMax");
    const std::int64_t search_k_max =
        std::min(k_max, int_or(j, "searchKMax", std::min<std::int64_t>(k_max, 12)));
    const std::int64_t bound_n_max  = int_or(j, "boundSeriesNMax", 64);

    SearchBudget budget;
    budget.seed = ctx.config.root_seed;
    // Scans sweep many k values; keep the per-k enumeration budget modest
    // unless the config raises it.
    budget.exhaustive_limit = 1 << 14;
    if (j.contains("searchBudget")) {
        const json& b = j["searchBudget"];
        budget.exhaustive_limit =
            static_cast<std::uint64_t>(int_or(b, "exhaustiveLimit", 1 << 14));
        budget.random_prefixes = static_cast<std::uint32_t>(int_or(b, "randomPrefixes", 512));
        budget.random_pasts    = static_cast<std::uint32_t>(int_or(b, "randomPasts", 64));
    }

    json out;
    json var_curve = json::array();
    json osc_curve = json::array();
    for (std::int64_t k = 1; k <= search_k_max; ++k) {
        const SearchResult v = variation_rate(*ctx.kernel, k, budget);
        const SearchResult o = oscillation(*ctx.kernel, k, budget);
        json row;
        row["k"]        = k;
        row["var"]      = v.value;
        row["varExact"] = v.exact;
        if (v.upper_bound.has_value()) { row["varUpper"] = *v.upper_bound; }
        var_curve.push_back(row);
        json orow;
        orow["k"]        = k;
        orow["osc"]      = o.value;
        orow["oscExact"] = o.exact;
        if (o.upper_bound.has_value()) { orow["oscUpper"] = *o.upper_bound; }
        osc_curve.push_back(orow);
    }
    out["variation"]   = var_curve;
    out["oscillation"] = osc_curve;

    const DobrushinReport dob = dobrushin_sum(*ctx.kernel, k_max, budget);
    out["dobrushin"]          = to_json(dob);
    const Ell2Report ell      = ell2_criterion(*ctx.kernel, k_max, budget);
    out["ell2"]               = to_json(ell);

    if (const auto* bkf = bkf_params(*ctx.kernel); bkf != nullptr) {
        if (bkf->lacunary()) {
            out["boundSeries"] = to_json(bkf_l2_bound_series(*bkf, bound_n_max));
        }
        else {
            out["boundSeries"] = nullptr;
            out["boundSeriesNote"] =
                "lower bound series requires a lacunary block sequence";
        }
    }
    else if (const auto* ar = ar_params(*ctx.kernel); ar != nullptr) {
        out["boundSeries"] = to_json(ar_l2_bound_series(*ar, bound_n_max));
    }

    result.inconclusive = ell.series.verdict == Verdict::inconclusive
                          || dob.status == DobrushinReport::Status::inconclusive;

    // Flat CSV of the per-k criterion values.
    std::string csv = "k,var,varExact,osc,oscExact,varSqPartial,oscPartial,coefPartial\n";
    CompensatedSum vsq;
    for (std::int64_t k = 1; k <= search_k_max; ++k) {
        const auto& vrow = var_curve[static_cast<std::size_t>(k - 1)];
        const auto& orow = osc_curve[static_cast<std::size_t>(k - 1)];
        const double vv  = vrow["var"].get<double>();
        vsq.add(vv * vv);
        const auto idx = static_cast<std::size_t>(k - 1);
        csv += std::to_string(k) + "," + format_g17(vv) + ","
               + (vrow["varExact"].get<bool>() ? "1" : "0") + ","
               + format_g17(orow["osc"].get<double>()) + ","
               + (orow["oscExact"].get<bool>() ? "1" : "0") + "," + format_g17(vsq.value())
               + "," + format_g17(dob.oscillation_series.partial_sums[idx]) + ","
               + format_g17(dob.coefficient_series.partial_sums[idx]) + "\n";
    }
    result.csv_files.emplace_back("criteria_scan.csv", csv);
    return out;
}

json run_oracle_check(RunContext& ctx, ExperimentResult& result)
{
    const json& j     = ctx.config.raw;
    const json& pasts = require_field(j, "pasts");
    const Past  x = past_from_json(require_field(pasts, "x"), ctx.kernel->alphabet(), "pasts.x");
    const bool  has_y = pasts.contains("y");
    const Past  y = has_y ? past_from_json(pasts["y"], ctx.kernel->alphabet(), "pasts.y") : x;

    const std::int64_t t0       = int_or(j, "t0", 0);
    const std::int64_t t1       = require_int(j, "t1");
    const std::int64_t replicas = int_or(j, "replicas", 20000);

    OracleBudget budget;
    budget.max_paths = static_cast<std::uint64_t>(
        int_or(j, "oraclePaths", static_cast<std::int64_t>(std::uint64_t{1} << 24)));
    budget.workers = ctx.workers;

    json out;
    const WindowLaw law = exact_window_law(*ctx.kernel, x, t0, t1, budget);
    out["windowLaw"]    = to_json(law);
    result.csv_files.emplace_back("window_law.csv",
                                  window_law_csv(law, ctx.kernel->alphabet()));

    // Normalization.
    CompensatedSum total;
    for (double p : law.probs) { total.add(p); }
    const double norm_err = std::abs(total.value() - 1.0);
    out["normalizationError"] = norm_err;

    // Marginalization consistency: drop the last window coordinate.
    double marg_err = 0.0;
    if (t1 > t0) {
        const WindowLaw shorter = exact_window_law(*ctx.kernel, x, t0, t1 - 1, budget);
        const int       B       = ctx.kernel->alphabet().size();
        for (std::size_t c = 0; c < shorter.probs.size(); ++c) {
            CompensatedSum s;
            for (int a = 0; a < B; ++a) {
                s.add(law.probs[c * static_cast<std::size_t>(B) + static_cast<std::size_t>(a)]);
            }
            marg_err = std::max(marg_err, std::abs(s.value() - shorter.probs[c]));
        }
    }
    out["marginalizationError"] = marg_err;

    // Chain rule: full-window cells must equal sequential conditional
    // products bit for bit.
    double chain_err = 0.0;
    if (t0 == 0) {
        const int  B  = ctx.kernel->alphabet().size();
        auto       st = ctx.kernel->stepper(x, t1 + 1);
        std::vector<double> dist(static_cast<std::size_t>(B));
        std::vector<int>    config(static_cast<std::size_t>(t1) + 1, 0);
        for (std::size_t cell = 0; cell < law.probs.size(); ++cell) {
            std::size_t rem = cell;
            for (std::size_t i = config.size(); i-- > 0;) {
                config[i] = static_cast<int>(rem % static_cast<std::size_t>(B));
                rem /= static_cast<std::size_t>(B);
            }
            double prod = 1.0;
            for (int s : config) {
                st->dist(dist);
                prod *= dist[static_cast<std::size_t>(s)];
                st->push(s);
            }
            for (std::size_t i = 0; i < config.size(); ++i) { st->pop(); }
            chain_err = std::max(chain_err, std::abs(prod - law.probs[cell]));
        }
    }
    out["chainRuleError"] = chain_err;

    // Empirical agreement: z-scores on cells merged to a minimum expected
    // count so the normal approximation holds.
    std::vector<Trajectory> runs(static_cast<std::size_t>(replicas));
    parallel_for(static_cast<std::size_t>(replicas), ctx.workers, [&](std::size_t r) {
        runs[r] = sample_chain(*ctx.kernel, x, t1, ctx.rng.derive(r));
    });
    const int B = ctx.kernel->alphabet().size();
    std::vector<std::int64_t> counts(law.probs.size(), 0);
    for (const auto& run : runs) {
        std::size_t idx = 0;
        for (std::int64_t t = t0; t <= t1; ++t) {
            idx = idx * static_cast<std::size_t>(B)
                  + static_cast<std::size_t>(run.symbols[static_cast<std::size_t>(t)]);
        }
        ++counts[idx];
    }
    // Merge cells (descending probability) until each group expects >= 25.
    std::vector<std::size_t> order(law.probs.size());
    for (std::size_t i = 0; i < order.size(); ++i) { order[i] = i; }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return law.probs[a] > law.probs[b]; });
    double       max_z = 0.0;
    double       gp = 0.0;
    std::int64_t gc = 0;
    const double R  = static_cast<double>(replicas);
    for (std::size_t i = 0; i < order.size(); ++i) {
        gp += law.probs[order[i]];
        gc += counts[order[i]];
        const bool last = i + 1 == order.size();
        if (gp * R >= 25.0 || last) {
            if (gp > 0.0 && gp < 1.0) {
                const double z =
                    (static_cast<double>(gc) - R * gp) / std::sqrt(R * gp * (1.0 - gp));
                max_z = std::max(max_z, std::abs(z));
            }
            gp = 0.0;
            gc = 0;
        }
    }
    out["empiricalMaxZ"]     = max_z;
    out["empiricalReplicas"] = replicas;
    result.csv_files.emplace_back("trajectories.csv", trajectory_csv(runs));

    // Pairwise statistics when a second past is configured.
    if (has_y) {
        const std::int64_t n_weak = int_or(j, "weakL2N", std::min<std::int64_t>(t1, 16));
        const WeakL2Exact  wl = exact_weak_l2_expectation(*ctx.kernel, x, y, n_weak, budget);
        const HellingerExact he =
            exact_hellinger_increments(*ctx.kernel, x, y, n_weak, budget);
        json jw;
        jw["incrementMeans"]  = json(wl.increment_means);
        jw["cumulativeMeans"] = json(wl.cumulative_means);
        out["weakL2Exact"]    = jw;
        json jh;
        jh["dMeans"]            = json(he.d_means);
        jh["incrementMeans"]    = json(he.increment_means);
        jh["sandwichViolation"] = he.max_sandwich_violation;
        out["hellingerExact"]   = jh;
        out["windowTv"] = exact_window_tv(*ctx.kernel, x, y, t0, t1, budget);
        result.failed   = result.failed || he.max_sandwich_violation > 1e-12;
    }

    result.failed = result.failed || norm_err > 1e-10 || marg_err > 1e-10
                    || chain_err != 0.0 || max_z > 6.0;
    return out;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    const auto start = std::chrono::steady_clock::now();

    ExperimentResult result;
    RunContext       ctx{config, kernel_from_json(require_field(config.raw, "model")),
                   config.workers == 0 ? hardware_workers() : config.workers,
                   RngStream(config.root_seed, 0)};

    json results;
    if (config.kind == "weak-l2") { results = run_weak_l2(ctx, result); }
    else if (config.kind == "p-weak-l2") { results = run_p_weak_l2(ctx, result); }
    else if (config.kind == "tv-decay") { results = run_tv_decay(ctx, result); }
    else if (config.kind == "coupling-tail") { results = run_coupling_tail(ctx, result); }
    else if (config.kind == "beta-mixing") { results = run_beta_mixing(ctx, result); }
    else if (config.kind == "correlations") { results = run_correlations(ctx, result); }
    else if (config.kind == "criteria-scan") { results = run_criteria_scan(ctx, result); }
    else if (config.kind == "oracle-check") { results = run_oracle_check(ctx, result); }
    else { throw std::invalid_argument("config: unknown kind '" + config.kind + "'"); }

    for (auto& [fname, content] : result.csv_files) { fname = config.name + "_" + fname; }

    result.payload["schemaVersion"] = 1;
    result.payload["kind"]          = config.kind;
    result.payload["name"]          = config.name;
    result.payload["modelRef"]      = ctx.kernel->id_hash();
    result.payload["config"]        = config.raw;
    result.payload["results"]       = results;
    result.payload["inconclusive"]  = result.inconclusive;

    result.meta["timestamp"] = timestamp_utc();
    result.meta["wallSeconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.meta["workers"] = ctx.workers;
    return result;
}

} // namespace gchain
