#include "gchain/experiment.hpp"

#include "gchain/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace gchain {

using nlohmann::json;

namespace {

/// Normalization constant for beta_j = c / j^(1+eps) with a given total mass.
double power_law_c(double eps, double total)
{
    return total / hurwitz_zeta(1.0 + eps, 1.0);
}

json ising_model(double eps, double total)
{
    json model;
    model["family"] = "ar";
    model["phi"]    = {{"kind", "logit"}};
    model["beta"]   = {{"prefix", json::array()},
                       {"tail", {{"c", power_law_c(eps, total)},
                                 {"exponent", 1.0 + eps},
                                 {"start", 1}}}};
    model["delta"]  = 0.0;
    return model;
}

json bkf_model(double lambda_ratio)
{
    // Geometric blocks m_j = 5^j with geometric mixture weights
    // lambda_j proportional to lambda_ratio^j, both over 24 blocks.
    const int          J = 24;
    std::vector<double> lambda(J);
    CompensatedSum      norm;
    double              w = 1.0;
    for (int i = 0; i < J; ++i) {
        w *= lambda_ratio;
        lambda[static_cast<std::size_t>(i)] = w;
        norm.add(w);
    }
    for (auto& l : lambda) { l /= norm.value(); }
    std::vector<std::int64_t> m(J);
    std::int64_t              mj = 1;
    for (int i = 0; i < J; ++i) {
        mj *= 5;
        m[static_cast<std::size_t>(i)] = mj;
    }
    json model;
    model["family"] = "bkf";
    model["m"]      = m;
    model["lambda"] = lambda;
    model["psi"]    = {{"kind", "step"}, {"epsilon", 0.1}};
    // Step psi satisfies psi(r) > psi(-r) for any r in (0, 1); r0 = 0.1 keeps
    // the block-growth requirement 4/(1-r0) below the ratio 5.
    model["r0"]     = 0.1;
    return model;
}

json renewal_model()
{
    json model;
    model["family"]  = "renewal";
    model["qPrefix"] = json::array();
    model["qInf"]    = 0.5;
    model["tail"]    = {{"kind", "power"}, {"a", 0.3}, {"theta", 1.0}};
    return model;
}

json linear_psi_bkf_model()
{
    json model;
    model["family"] = "bkf";
    model["m"]      = {1, 3, 5};
    model["lambda"] = {0.5, 0.3, 0.2};
    model["psi"]    = {{"kind", "linear"}, {"epsilon", 0.3}};
    model["r0"]     = 0.5;
    return model;
}

json spin_all(const char* s) { return json{{"all", s}}; }

std::uint64_t sub_seed(std::uint64_t root, std::uint64_t index)
{
    return root ^ (0x9e3779b97f4a7c15ull * (index + 1));
}

json base_config(const char* kind, const char* name, const json& model,
                 std::uint64_t seed)
{
    json c;
    c["schemaVersion"] = 1;
    c["kind"]          = kind;
    c["name"]          = name;
    c["model"]         = model;
    c["rootSeed"]      = seed;
    return c;
}

} // namespace

const std::vector<PresetInfo>& preset_catalog()
{
    static const std::vector<PresetInfo> catalog = {
        {"corollary4-bkf",
         "corollary 4, block-mixture route: l2 dichotomy read off the lacunary bound series",
         "Geometric blocks m_j = 5^j under step psi; slow (2^-j) mixture weights give a "
         "divergent lower-bound series, fast (5^-j) weights a convergent upper-bound "
         "series."},
        {"corollary4-ar",
         "corollary 4, autoregressive route: l2 dichotomy via tail-sum series",
         "Logit autoregressive kernels with beta_j = c/j^(1+eps), total mass 0.9: "
         "eps = 0.3 is certified divergent, eps = 0.8 certified convergent."},
        {"corollary6-ising",
         "corollary 6: unique weak-Bernoulli measure with dynamic phase transition",
         "Long-range Ising kernel (eps = 0.3, sum beta = 0.9, delta = 0): Dobrushin "
         "coefficient sum below 1, l2 series divergent, extremal-pair weak-l2 growth, "
         "decaying beta-mixing proxy and summable correlations."},
        {"renewal-example",
         "renewal example: dynamic uniqueness with arbitrarily slow continuity rate",
         "Renewal kernel q_i = 0.5 + 0.3/(i+1): closed-form var_k = q_k - q_inf and a "
         "bounded weak-l2 curve from the extremal past pair."},
        {"dobrushin-linear-psi",
         "one-sided Dobrushin condition under linear psi",
         "Linear-psi block mixture (eps = 0.3): exact oscillation partial sums with total "
         "2(1-2 eps) and a satisfied uniqueness criterion."},
    };
    return catalog;
}

std::vector<json> preset_configs(const std::string& name, std::uint64_t root_seed)
{
    if (name == "corollary4-bkf") {
        json slow = base_config("criteria-scan", "corollary4-bkf-slow-weights",
                                bkf_model(0.5), sub_seed(root_seed, 0));
        slow["kMax"]            = 8;
        slow["searchKMax"]      = 6;
        slow["boundSeriesNMax"] = 24;
        json fast = base_config("criteria-scan", "corollary4-bkf-fast-weights",
                                bkf_model(0.2), sub_seed(root_seed, 1));
        fast["kMax"]            = 8;
        fast["searchKMax"]      = 6;
        fast["boundSeriesNMax"] = 24;
        return {slow, fast};
    }
    if (name == "corollary4-ar") {
        json divergent = base_config("criteria-scan", "corollary4-ar-eps03",
                                     ising_model(0.3, 0.9), sub_seed(root_seed, 0));
        divergent["kMax"]            = 4096;
        divergent["searchKMax"]      = 8;
        divergent["boundSeriesNMax"] = 4096;
        json convergent = base_config("criteria-scan", "corollary4-ar-eps08",
                                      ising_model(0.8, 0.9), sub_seed(root_seed, 1));
        convergent["kMax"]            = 4096;
        convergent["searchKMax"]      = 8;
        convergent["boundSeriesNMax"] = 4096;
        return {divergent, convergent};
    }
    if (name == "corollary6-ising") {
        const json model = ising_model(0.3, 0.9);

        json criteria = base_config("criteria-scan", "corollary6-criteria", model,
                                    sub_seed(root_seed, 0));
        criteria["kMax"]            = 100000;
        criteria["searchKMax"]      = 6;
        criteria["boundSeriesNMax"] = 4096;

        json weak = base_config("weak-l2", "corollary6-extremal-weak-l2", model,
                                sub_seed(root_seed, 1));
        weak["pasts"]    = {{"x", spin_all("+1")}, {"y", spin_all("-1")}};
        weak["horizon"]  = 20000;
        weak["replicas"] = 200;

        json beta = base_config("beta-mixing", "corollary6-beta-mixing", model,
                                sub_seed(root_seed, 2));
        beta["horizons"]       = {1, 2, 4, 8, 16, 32, 48, 64};
        beta["window"]         = 3;
        beta["pairs"]          = 16;
        beta["prefixReplicas"] = 20000;
        beta["sampler"] = {{"burnIn", 4096}, {"suffixLength", 256}, {"initial", spin_all("+1")}};

        json corr = base_config("correlations", "corollary6-correlations", model,
                                sub_seed(root_seed, 3));
        corr["jMax"]         = 256;
        corr["sampleLength"] = 8192;
        corr["replicas"]     = 48;
        corr["burnIn"]       = 4096;
        corr["initial"]      = spin_all("+1");
        return {criteria, weak, beta, corr};
    }
    if (name == "renewal-example") {
        json criteria = base_config("criteria-scan", "renewal-criteria", renewal_model(),
                                    sub_seed(root_seed, 0));
        criteria["kMax"]       = 256;
        criteria["searchKMax"] = 50;

        json weak = base_config("weak-l2", "renewal-weak-l2", renewal_model(),
                                sub_seed(root_seed, 1));
        weak["pasts"]    = {{"x", spin_all("+1")}, {"y", spin_all("-1")}};
        weak["horizon"]  = 4096;
        weak["replicas"] = 200;
        return {criteria, weak};
    }
    if (name == "dobrushin-linear-psi") {
        json criteria = base_config("criteria-scan", "dobrushin-linear-psi",
                                    linear_psi_bkf_model(), sub_seed(root_seed, 0));
        criteria["kMax"]       = 16;
        criteria["searchKMax"] = 5;
        return {criteria};
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

namespace {

const PresetInfo& preset_info(const std::string& name)
{
    for (const auto& p : preset_catalog()) {
        if (p.name == name) { return p; }
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

json preset_flags(const std::string& name, const std::vector<json>& payloads)
{
    json flags;
    if (name == "corollary4-bkf") {
        flags["slowWeightsLowerSeries"] =
            payloads[0]["results"]["boundSeries"]["lower"]["verdict"];
        flags["fastWeightsUpperSeries"] =
            payloads[1]["results"]["boundSeries"]["upper"]["verdict"];
    }
    else if (name == "corollary4-ar") {
        flags["eps03Ell2"] = payloads[0]["results"]["ell2"]["series"]["verdict"];
        flags["eps08Ell2"] = payloads[1]["results"]["ell2"]["series"]["verdict"];
    }
    else if (name == "corollary6-ising") {
        flags["dobrushin"]     = payloads[0]["results"]["dobrushin"]["status"];
        flags["ell2"]          = payloads[0]["results"]["ell2"]["series"]["verdict"];
        flags["extremalWeakL2"] = payloads[1]["results"]["weakL2"]["verdict"];
        const auto& iso = payloads[2]["results"]["betaMixing"]["betaIsotonic"];
        flags["betaDecayRatio"] =
            iso.back().get<double>() / std::max(1e-300, iso.front().get<double>());
        flags["gammaSummabilitySlope"] =
            payloads[3]["results"]["correlations"]["summability"]["fittedSlope"];
    }
    else if (name == "renewal-example") {
        bool all_exact = true;
        for (const auto& e : payloads[0]["results"]["ell2"]["varExact"]) {
            all_exact = all_exact && e.get<bool>();
        }
        flags["varClosedFormExact"] = all_exact;
        flags["weakL2"]             = payloads[1]["results"]["weakL2"]["verdict"];
    }
    else if (name == "dobrushin-linear-psi") {
        flags["oscillationTotal"] =
            payloads[0]["results"]["dobrushin"]["oscillationSeries"]["partialSums"].back();
        flags["status"] = payloads[0]["results"]["dobrushin"]["status"];
    }
    return flags;
}

} // namespace

ExperimentResult run_preset(const std::string& name, std::uint64_t root_seed,
                            unsigned workers)
{
    const PresetInfo& info    = preset_info(name);
    const auto        configs = preset_configs(name, root_seed);

    ExperimentResult combined;
    combined.payload["schemaVersion"] = 1;
    combined.payload["preset"]        = name;
    combined.payload["anchor"]        = info.anchor;
    combined.payload["description"]   = info.description;
    combined.payload["rootSeed"]      = root_seed;

    json              subreports = json::array();
    std::vector<json> payloads;
    double            wall = 0.0;
    for (const auto& cj : configs) {
        json with_workers = cj;
        if (workers != 0) { with_workers["workers"] = workers; }
        ExperimentConfig cfg = parse_config(with_workers);
        ExperimentResult r   = run_experiment(cfg);
        payloads.push_back(r.payload);
        subreports.push_back(r.payload);
        combined.inconclusive = combined.inconclusive || r.inconclusive;
        combined.failed       = combined.failed || r.failed;
        wall += r.meta["wallSeconds"].get<double>();
        for (auto& [fname, content] : r.csv_files) {
            combined.csv_files.emplace_back(std::move(fname), std::move(content));
        }
    }
    combined.payload["subreports"] = subreports;
    combined.payload["flags"]      = preset_flags(name, payloads);
    combined.meta["wallSeconds"]   = wall;
    combined.meta["workers"]       = workers;
    return combined;
}

} // namespace gchain
