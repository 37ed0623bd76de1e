#include "gchain/report.hpp"

#include <cmath>
#include <cstdio>

namespace gchain {

using nlohmann::json;

std::string format_g17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

json doubles(const std::vector<double>& v) { return json(v); }

json int64s(const std::vector<std::int64_t>& v) { return json(v); }

void append_row(std::string& out, std::initializer_list<std::string> cells)
{
    bool first = true;
    for (const auto& c : cells) {
        if (!first) { out += ','; }
        out += c;
        first = false;
    }
    out += '\n';
}

} // namespace

json to_json(const SeriesClassification& s)
{
    json j;
    j["horizons"]    = doubles(s.horizons);
    j["partialSums"] = doubles(s.partial_sums);
    if (s.analytic_tail_bound.has_value()) { j["analyticTailBound"] = *s.analytic_tail_bound; }
    j["certifiedDivergent"] = s.certified_divergent;
    j["certificate"]        = s.certificate;
    j["fittedSlope"]        = s.fitted_slope;
    j["verdict"]            = to_string(s.verdict);
    j["certified"]          = s.certified;
    return j;
}

json to_json(const CurveStat& s)
{
    json j;
    j["mean"]   = s.mean;
    j["sd"]     = s.sd;
    j["q25"]    = s.q25;
    j["median"] = s.median;
    j["q75"]    = s.q75;
    return j;
}

json to_json(const WeakL2Curve& c)
{
    json j;
    j["horizons"] = int64s(c.horizons);
    json stats    = json::array();
    for (const auto& s : c.summary) { stats.push_back(to_json(s)); }
    j["summary"]            = stats;
    j["medianSeries"]       = to_json(c.median_series);
    j["verdict"]            = to_string(c.verdict);
    j["trivialBoundMargin"] = c.trivial_bound_margin;
    j["modelRef"]           = c.model_ref;
    return j;
}

json to_json(const PWeakL2Result& r)
{
    json j;
    j["horizons"] = int64s(r.horizons);
    json verdicts = json::array();
    for (auto v : r.pair_verdicts) { verdicts.push_back(to_string(v)); }
    j["pairVerdicts"] = verdicts;
    j["pairSlopes"]   = doubles(r.pair_slopes);
    json medians      = json::array();
    for (const auto& m : r.pair_medians) { medians.push_back(doubles(m)); }
    j["pairMedians"]   = medians;
    j["bounded"]       = r.bounded;
    j["divergent"]     = r.divergent;
    j["inconclusive"]  = r.inconclusive;
    j["burnIn"]        = r.burn_in;
    j["suffixLength"]  = r.suffix_len;
    j["caveat"] = "past pairs drawn by finite burn-in; approximation quality depends on "
                  "mixing from the chosen initial past";
    j["modelRef"] = r.model_ref;
    return j;
}

json to_json(const CouplingTailCurve& c)
{
    json j;
    j["horizons"]       = int64s(c.horizons);
    j["tailEstimate"]   = doubles(c.tail_estimate);
    j["ciLow"]          = doubles(c.ci_low);
    j["ciHigh"]         = doubles(c.ci_high);
    j["replicas"]       = c.replicas;
    j["horizonT"]       = c.horizon_T;
    j["trailingWindow"] = c.trailing_window;
    j["censored"]       = c.censored;
    j["caveat"]         = "disagreements after the simulation horizon are unobserved";
    j["modelRef"]       = c.model_ref;
    return j;
}

json to_json(const TvDecayCurve& c)
{
    json j;
    j["horizons"] = int64s(c.horizons);
    json exact    = json::array();
    for (std::size_t i = 0; i < c.exact_tv.size(); ++i) {
        if (c.exact_ok[i]) { exact.push_back(c.exact_tv[i]); }
        else { exact.push_back(nullptr); }
    }
    j["exactTv"]     = exact;
    j["degraded"]    = c.degraded;
    j["mcTv"]        = doubles(c.mc_tv);
    j["mcBiasBound"] = doubles(c.mc_bias_bound);
    j["coupling"]    = to_json(c.coupling);
    j["modelRef"]    = c.model_ref;
    return j;
}

json to_json(const BetaMixingCurve& c)
{
    json j;
    j["horizons"]     = int64s(c.horizons);
    j["betaRaw"]      = doubles(c.beta_raw);
    j["betaIsotonic"] = doubles(c.beta_isotonic);
    j["se"]           = doubles(c.se);
    j["ciLow"]        = doubles(c.ci_low);
    j["ciHigh"]       = doubles(c.ci_high);
    json pairs        = json::array();
    for (const auto& row : c.per_pair) { pairs.push_back(doubles(row)); }
    j["perPair"]      = pairs;
    j["pairs"]        = c.pairs;
    j["burnIn"]       = c.burn_in;
    j["suffixLength"] = c.suffix_len;
    j["caveat"] = "window TV proxy over sampled stationary past pairs; burn-in and window "
                  "width bound what the estimate can see";
    j["modelRef"] = c.model_ref;
    return j;
}

json to_json(const CorrelationCurve& c)
{
    json j;
    j["gamma"]           = doubles(c.gamma_hat);
    j["se"]              = doubles(c.se);
    j["absPartialSums"]  = doubles(c.abs_partial_sums);
    j["summability"]     = to_json(c.summability);
    j["fittedExponent"]  = c.fitted_exponent;
    j["fittedPrefactor"] = c.fitted_prefactor;
    j["fitPoints"]       = c.fit_points;
    j["burnIn"]          = c.burn_in;
    j["modelRef"]        = c.model_ref;
    return j;
}

json to_json(const DobrushinReport& r)
{
    json j;
    j["oscillationSeries"] = to_json(r.oscillation_series);
    j["coefficientSeries"] = to_json(r.coefficient_series);
    if (r.oscillation_total_upper.has_value()) {
        j["oscillationTotalUpper"] = *r.oscillation_total_upper;
    }
    if (r.coefficient_total_upper.has_value()) {
        j["coefficientTotalUpper"] = *r.coefficient_total_upper;
    }
    j["status"] = r.status_string();
    j["note"]   = r.note;
    return j;
}

json to_json(const Ell2Report& r)
{
    json j;
    j["series"]    = to_json(r.series);
    j["varValues"] = doubles(r.var_values);
    json exact     = json::array();
    for (bool e : r.var_exact) { exact.push_back(e); }
    j["varExact"]  = exact;
    j["valueNote"] = r.value_note;
    return j;
}

json to_json(const L2BoundSeries& s)
{
    json j;
    j["lower"]          = to_json(s.lower);
    j["upper"]          = to_json(s.upper);
    j["lowerPrefactor"] = s.lower_prefactor;
    j["upperPrefactor"] = s.upper_prefactor;
    return j;
}

json to_json(const WindowLaw& law)
{
    json j;
    j["t0"]    = law.t0;
    j["t1"]    = law.t1;
    j["past"]  = law.past.to_string();
    j["probs"] = doubles(law.probs);
    j["paths"] = law.stats.paths;
    j["evals"] = law.stats.evals;
    return j;
}

std::string trajectory_csv(const std::vector<Trajectory>& replicas)
{
    std::string out = "replica";
    if (!replicas.empty()) {
        for (std::size_t t = 0; t < replicas.front().symbols.size(); ++t) {
            out += ",t" + std::to_string(t);
        }
    }
    out += '\n';
    for (std::size_t r = 0; r < replicas.size(); ++r) {
        out += std::to_string(r);
        for (int s : replicas[r].symbols) {
            out += ',';
            out += std::to_string(s);
        }
        out += '\n';
    }
    return out;
}

std::string window_law_csv(const WindowLaw& law, const Alphabet& alphabet)
{
    std::string out = "configuration,probability\n";
    const auto  w   = static_cast<std::size_t>(law.t1 - law.t0 + 1);
    const auto  B   = static_cast<std::uint64_t>(alphabet.size());
    for (std::uint64_t idx = 0; idx < law.probs.size(); ++idx) {
        std::uint64_t rem = idx;
        std::vector<int> config(w);
        for (std::size_t i = w; i-- > 0;) {
            config[i] = static_cast<int>(rem % B);
            rem /= B;
        }
        std::string label = "\"";
        for (std::size_t i = 0; i < w; ++i) {
            label += alphabet.label(config[i]);
            if (i + 1 < w) { label += ' '; }
        }
        label += '"';
        append_row(out, {label, format_g17(law.probs[idx])});
    }
    return out;
}

std::string coupling_curve_csv(const CouplingTailCurve& curve)
{
    std::string out = "n,tailEstimate,ciLow,ciHigh,replicas,censored\n";
    for (std::size_t i = 0; i < curve.horizons.size(); ++i) {
        append_row(out, {std::to_string(curve.horizons[i]),
                         format_g17(curve.tail_estimate[i]), format_g17(curve.ci_low[i]),
                         format_g17(curve.ci_high[i]), std::to_string(curve.replicas),
                         std::to_string(curve.censored)});
    }
    return out;
}

std::string weak_l2_csv(const WeakL2Curve& curve)
{
    std::string out = "N,mean,sd,q25,median,q75\n";
    for (std::size_t i = 0; i < curve.horizons.size(); ++i) {
        const auto& s = curve.summary[i];
        append_row(out, {std::to_string(curve.horizons[i]), format_g17(s.mean),
                         format_g17(s.sd), format_g17(s.q25), format_g17(s.median),
                         format_g17(s.q75)});
    }
    return out;
}

std::string tv_decay_csv(const TvDecayCurve& curve)
{
    std::string out = "n,exactTv,exactAvailable,mcTv,mcBiasBound,couplingTail,couplingCiLow,"
                      "couplingCiHigh\n";
    for (std::size_t i = 0; i < curve.horizons.size(); ++i) {
        append_row(out,
                   {std::to_string(curve.horizons[i]),
                    curve.exact_ok[i] ? format_g17(curve.exact_tv[i]) : std::string("nan"),
                    curve.exact_ok[i] ? "1" : "0", format_g17(curve.mc_tv[i]),
                    format_g17(curve.mc_bias_bound[i]),
                    format_g17(curve.coupling.tail_estimate[i]),
                    format_g17(curve.coupling.ci_low[i]),
                    format_g17(curve.coupling.ci_high[i])});
    }
    return out;
}

std::string beta_mixing_csv(const BetaMixingCurve& curve)
{
    std::string out = "n,betaRaw,betaIsotonic,se,ciLow,ciHigh\n";
    for (std::size_t i = 0; i < curve.horizons.size(); ++i) {
        append_row(out, {std::to_string(curve.horizons[i]), format_g17(curve.beta_raw[i]),
                         format_g17(curve.beta_isotonic[i]), format_g17(curve.se[i]),
                         format_g17(curve.ci_low[i]), format_g17(curve.ci_high[i])});
    }
    return out;
}

std::string correlation_csv(const CorrelationCurve& curve)
{
    std::string out = "j,gamma,se,absPartialSum\n";
    for (std::size_t j = 0; j < curve.gamma_hat.size(); ++j) {
        append_row(out, {std::to_string(j), format_g17(curve.gamma_hat[j]),
                         format_g17(curve.se[j]), format_g17(curve.abs_partial_sums[j])});
    }
    return out;
}

} // namespace gchain
