#include "gchain/diagnostics.hpp"

#include "gchain/numeric.hpp"
#include "gchain/oracle.hpp"
#include "gchain/parallel.hpp"
#include "gchain/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gchain {

namespace {

constexpr double kRootHalfPi = 0.7978845608028654; // sqrt(2/pi)

CurveStat column_stat(std::vector<double> values)
{
    CurveStat s;
    const auto n = values.size();
    if (n == 0) { return s; }
    CompensatedSum sum;
    for (double v : values) { sum.add(v); }
    s.mean = sum.value() / static_cast<double>(n);
    CompensatedSum sq;
    for (double v : values) { sq.add((v - s.mean) * (v - s.mean)); }
    s.sd = n > 1 ? std::sqrt(sq.value() / static_cast<double>(n - 1)) : 0.0;
    std::sort(values.begin(), values.end());
    const auto at = [&](double q) {
        return values[static_cast<std::size_t>(q * static_cast<double>(n - 1))];
    };
    s.q25    = at(0.25);
    s.median = at(0.5);
    s.q75    = at(0.75);
    return s;
}

std::vector<std::int64_t> normalize_checkpoints(std::vector<std::int64_t> cps,
                                                std::int64_t n_max)
{
    if (cps.empty()) { cps = log_checkpoints(n_max); }
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    if (cps.empty() || cps.front() < 0 || cps.back() > n_max) {
        throw std::invalid_argument("checkpoints must lie within [0, horizon]");
    }
    return cps;
}

} // namespace

std::vector<std::int64_t> log_checkpoints(std::int64_t n_max, int per_decade)
{
    std::vector<std::int64_t> out;
    if (n_max < 1) { return {0}; }
    const double step = std::pow(10.0, 1.0 / per_decade);
    double       x    = 1.0;
    while (x < static_cast<double>(n_max)) {
        const auto v = static_cast<std::int64_t>(std::llround(x));
        if (out.empty() || v > out.back()) { out.push_back(v); }
        x *= step;
    }
    if (out.empty() || out.back() != n_max) { out.push_back(n_max); }
    return out;
}

// ---------------------------------------------------------------------------
// weak_l2_curve
// ---------------------------------------------------------------------------

WeakL2Curve weak_l2_curve(const Kernel& kernel, const Past& past_x, const Past& past_y,
                          const WeakL2Options& options, RngStream rng)
{
    if (options.horizon < 1) { throw std::invalid_argument("weak_l2_curve: horizon >= 1"); }
    if (options.replicas < 100) {
        throw std::invalid_argument("weak_l2_curve: replicas must be >= 100");
    }
    const auto checkpoints = normalize_checkpoints(options.checkpoints, options.horizon);
    const auto n_cp        = checkpoints.size();
    const auto R           = static_cast<std::size_t>(options.replicas);
    const int  B           = kernel.alphabet().size();

    std::vector<std::vector<double>> rows(R, std::vector<double>(n_cp, 0.0));
    std::vector<double>              margins(R, -1e300);

    parallel_for(R, options.workers, [&](std::size_t r) {
        RngStream           stream = rng.derive(static_cast<std::uint64_t>(r));
        auto                pair   = kernel.pair_stepper(past_x, past_y, options.horizon + 2);
        std::vector<double> dx(static_cast<std::size_t>(B)), dy(static_cast<std::size_t>(B));
        CompensatedSum      d_sum;
        double              margin = -1e300;
        std::size_t         cp     = 0;

        // Increment at prefix length t; t = 0 compares the base conditionals.
        for (std::int64_t t = 0; t <= options.horizon; ++t) {
            pair->dists(dx, dy);
            double inc = 0.0;
            for (int a = 0; a < B; ++a) {
                const double df = dx[static_cast<std::size_t>(a)]
                                  - dy[static_cast<std::size_t>(a)];
                inc += df * df;
            }
            d_sum.add(inc);
            while (cp < n_cp && checkpoints[cp] == t) {
                rows[r][cp] = d_sum.value();
                margin = std::max(margin, d_sum.value() - 2.0 * static_cast<double>(t + 1));
                ++cp;
            }
            if (t < options.horizon) { pair->push(draw_symbol(dx, stream)); }
        }
        margins[r] = margin;
    });

    WeakL2Curve curve;
    curve.horizons  = checkpoints;
    curve.model_ref = kernel.id_hash();
    curve.summary.reserve(n_cp);
    std::vector<double> medians(n_cp), hs(n_cp);
    for (std::size_t c = 0; c < n_cp; ++c) {
        std::vector<double> col(R);
        for (std::size_t r = 0; r < R; ++r) { col[r] = rows[r][c]; }
        curve.summary.push_back(column_stat(std::move(col)));
        medians[c] = curve.summary.back().median;
        hs[c]      = static_cast<double>(checkpoints[c] + 1);
    }
    curve.median_series = classify_series(hs, medians, options.policy);
    curve.verdict       = curve.median_series.verdict;
    curve.trivial_bound_margin = *std::max_element(margins.begin(), margins.end());
    if (options.keep_replica_curves) { curve.per_replica = std::move(rows); }
    return curve;
}

// ---------------------------------------------------------------------------
// p_weak_l2_curve
// ---------------------------------------------------------------------------

PWeakL2Result p_weak_l2_curve(const Kernel& kernel, const PWeakL2Options& options,
                              RngStream rng)
{
    if (options.pairs < 1) { throw std::invalid_argument("p_weak_l2_curve: pairs >= 1"); }
    PWeakL2Result out;
    out.burn_in    = options.burn_in;
    out.suffix_len = options.suffix_len;
    out.model_ref  = kernel.id_hash();

    for (std::int64_t p = 0; p < options.pairs; ++p) {
        RngStream  pair_rng = rng.derive(0x9a17000 + static_cast<std::uint64_t>(p));
        const Past x = sample_stationary_past(kernel, options.burn_in, options.suffix_len,
                                              options.initial, pair_rng.derive(0));
        const Past y = sample_stationary_past(kernel, options.burn_in, options.suffix_len,
                                              options.initial, pair_rng.derive(1));
        WeakL2Options per_pair        = options.per_pair;
        per_pair.keep_replica_curves  = false;
        const WeakL2Curve curve =
            weak_l2_curve(kernel, x, y, per_pair, pair_rng.derive(2));
        if (out.horizons.empty()) { out.horizons = curve.horizons; }
        out.pair_verdicts.push_back(curve.verdict);
        out.pair_slopes.push_back(curve.median_series.fitted_slope);
        std::vector<double> medians;
        medians.reserve(curve.summary.size());
        for (const auto& s : curve.summary) { medians.push_back(s.median); }
        out.pair_medians.push_back(std::move(medians));
        switch (curve.verdict) {
        case Verdict::convergent: ++out.bounded; break;
        case Verdict::divergent: ++out.divergent; break;
        default: ++out.inconclusive; break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// window_tv_mc
// ---------------------------------------------------------------------------

WindowTvMcResult window_tv_mc(const Kernel& kernel, const Past& past_x,
                              const Past& past_y, const WindowTvMcOptions& options,
                              RngStream rng)
{
    if (options.horizons.empty()) {
        throw std::invalid_argument("window_tv_mc: no horizons");
    }
    if (options.replicas < 1) { throw std::invalid_argument("window_tv_mc: replicas >= 1"); }
    const int B = kernel.alphabet().size();
    std::uint64_t cells = 1;
    for (std::int64_t i = 0; i <= options.window_w; ++i) {
        cells *= static_cast<std::uint64_t>(B);
        if (cells > 4096) {
            throw std::invalid_argument("window_tv_mc: |S|^(w+1) must be <= 4096");
        }
    }
    std::vector<std::int64_t> horizons = options.horizons;
    std::sort(horizons.begin(), horizons.end());
    const auto H = horizons.size();

    const auto   R = static_cast<std::size_t>(options.replicas);
    const double T = static_cast<double>(options.replicas);

    // Per-horizon, per-cell accumulation of the replica-level difference of
    // exact conditional window products (common random numbers couple the
    // two prefixes).
    struct Acc {
        std::vector<double> diff_sum;
        std::vector<double> diff_sq;
    };
    // Fixed task split independent of the worker count so accumulation
    // grouping (and thus the bits of the result) never depends on it.
    const std::size_t tasks = std::min<std::size_t>(16, R);
    std::vector<Acc>  parts(tasks);
    for (auto& a : parts) {
        a.diff_sum.assign(H * cells, 0.0);
        a.diff_sq.assign(H * cells, 0.0);
    }
    const std::size_t chunk = (R + tasks - 1) / tasks;

    parallel_for(tasks, options.workers, [&](std::size_t task) {
        Acc&              acc = parts[task];
        const std::size_t lo  = task * chunk;
        const std::size_t hi  = std::min(R, lo + chunk);
        const auto        max_depth = horizons.back() + options.window_w + 2;

        std::vector<double> dx(static_cast<std::size_t>(B)), dy(static_cast<std::size_t>(B));
        std::vector<double> dist(static_cast<std::size_t>(B));
        std::vector<int>    config(static_cast<std::size_t>(options.window_w) + 1);

        for (std::size_t r = lo; r < hi; ++r) {
            RngStream stream = rng.derive(static_cast<std::uint64_t>(r));
            auto      sx     = kernel.stepper(past_x, max_depth);
            auto      sy     = kernel.stepper(past_y, max_depth);
            std::size_t next = 0;
            for (std::int64_t t = 0; t <= horizons.back(); ++t) {
                while (next < H && horizons[next] == t) {
                    // Exact conditional window products for every config.
                    for (std::uint64_t c = 0; c < cells; ++c) {
                        std::uint64_t rem = c;
                        for (std::int64_t i = options.window_w; i >= 0; --i) {
                            config[static_cast<std::size_t>(i)] =
                                static_cast<int>(rem % static_cast<std::uint64_t>(B));
                            rem /= static_cast<std::uint64_t>(B);
                        }
                        double prod_x = 1.0, prod_y = 1.0;
                        for (std::int64_t i = 0; i <= options.window_w; ++i) {
                            const int s = config[static_cast<std::size_t>(i)];
                            sx->dist(dist);
                            prod_x *= dist[static_cast<std::size_t>(s)];
                            sx->push(s);
                        }
                        for (std::int64_t i = 0; i <= options.window_w; ++i) {
                            const int s = config[static_cast<std::size_t>(i)];
                            sy->dist(dist);
                            prod_y *= dist[static_cast<std::size_t>(s)];
                            sy->push(s);
                        }
                        for (std::int64_t i = 0; i <= options.window_w; ++i) {
                            sx->pop();
                            sy->pop();
                        }
                        const double d = prod_x - prod_y;
                        acc.diff_sum[next * cells + c] += d;
                        acc.diff_sq[next * cells + c] += d * d;
                    }
                    ++next;
                }
                if (t == horizons.back()) { break; }
                // Advance both prefixes with a shared uniform.
                sx->dist(dx);
                sy->dist(dy);
                const double u  = stream.next_double();
                const int    ax = [&] {
                    double cum = 0.0;
                    for (int a = 0; a < B; ++a) {
                        cum += dx[static_cast<std::size_t>(a)];
                        if (u < cum) { return a; }
                    }
                    return B - 1;
                }();
                const int ay = [&] {
                    double cum = 0.0;
                    for (int a = 0; a < B; ++a) {
                        cum += dy[static_cast<std::size_t>(a)];
                        if (u < cum) { return a; }
                    }
                    return B - 1;
                }();
                sx->push(ax);
                sy->push(ay);
            }
        }
    });

    WindowTvMcResult out;
    out.tv.assign(H, 0.0);
    out.bias_bound.assign(H, 0.0);
    for (std::size_t h = 0; h < H; ++h) {
        CompensatedSum l1, bias;
        for (std::uint64_t c = 0; c < cells; ++c) {
            CompensatedSum ds, dq;
            for (const auto& part : parts) {
                ds.add(part.diff_sum[h * cells + c]);
                dq.add(part.diff_sq[h * cells + c]);
            }
            const double mean = ds.value() / T;
            const double var  = std::max(0.0, dq.value() / T - mean * mean);
            l1.add(std::abs(mean));
            bias.add(kRootHalfPi * std::sqrt(var / T));
        }
        out.tv[h]         = l1.value() / 2.0;
        out.bias_bound[h] = bias.value() / 2.0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// tv_decay_curve
// ---------------------------------------------------------------------------

TvDecayCurve tv_decay_curve(const Kernel& kernel, const Past& past_x, const Past& past_y,
                            const TvDecayOptions& options, RngStream rng)
{
    if (options.horizons.empty()) { throw std::invalid_argument("tv_decay_curve: no horizons"); }
    TvDecayCurve curve;
    curve.horizons = options.horizons;
    std::sort(curve.horizons.begin(), curve.horizons.end());
    curve.model_ref = kernel.id_hash();

    const int B = kernel.alphabet().size();

    // (a) exact window TV where the path budget allows.
    OracleBudget budget;
    budget.max_paths = options.oracle_paths;
    budget.workers   = options.workers;
    for (std::int64_t n : curve.horizons) {
        std::uint64_t paths    = 1;
        bool          feasible = true;
        for (std::int64_t i = 0; i <= n + options.window_w; ++i) {
            paths *= static_cast<std::uint64_t>(B);
            if (paths > options.oracle_paths) {
                feasible = false;
                break;
            }
        }
        if (feasible) {
            curve.exact_tv.push_back(exact_window_tv(kernel, past_x, past_y, n,
                                                     n + options.window_w, budget));
            curve.exact_ok.push_back(true);
        }
        else {
            curve.exact_tv.push_back(std::numeric_limits<double>::quiet_NaN());
            curve.exact_ok.push_back(false);
            curve.degraded = true;
        }
    }

    // (b) Monte Carlo window TV.
    WindowTvMcOptions mc;
    mc.horizons      = curve.horizons;
    mc.window_w      = options.window_w;
    mc.replicas      = options.mc_replicas;
    mc.workers       = options.workers;
    const WindowTvMcResult mcr = window_tv_mc(kernel, past_x, past_y, mc, rng.derive(1));
    curve.mc_tv                = mcr.tv;
    curve.mc_bias_bound        = mcr.bias_bound;

    // (c) coupling tail upper bound.
    std::int64_t T = options.coupling_T;
    std::int64_t W = options.coupling_W;
    if (T < 0) {
        const std::int64_t t0 = curve.horizons.back() + options.window_w + 1;
        W                     = W < 0 ? std::max<std::int64_t>(1, t0 / 4) : W;
        T                     = t0 + W;
    }
    else if (W < 0) {
        W = std::max<std::int64_t>(1, T / 4);
    }
    curve.coupling = coupling_time_tail(kernel, past_x, past_y, curve.horizons, T, W,
                                        options.coupling_replicas, rng.derive(2),
                                        options.workers);
    return curve;
}

// ---------------------------------------------------------------------------
// beta_mixing_curve
// ---------------------------------------------------------------------------

BetaMixingCurve beta_mixing_curve(const Kernel& kernel, const BetaMixingOptions& options,
                                  RngStream rng)
{
    if (options.pairs < 2) { throw std::invalid_argument("beta_mixing_curve: pairs >= 2"); }
    BetaMixingCurve curve;
    curve.horizons = options.horizons;
    std::sort(curve.horizons.begin(), curve.horizons.end());
    curve.pairs      = options.pairs;
    curve.burn_in    = options.burn_in;
    curve.suffix_len = options.suffix_len;
    curve.model_ref  = kernel.id_hash();

    const auto H = curve.horizons.size();
    curve.per_pair.assign(static_cast<std::size_t>(options.pairs),
                          std::vector<double>(H, 0.0));

    for (std::int64_t p = 0; p < options.pairs; ++p) {
        RngStream  pair_rng = rng.derive(0xbe7a000 + static_cast<std::uint64_t>(p));
        const Past x = sample_stationary_past(kernel, options.burn_in, options.suffix_len,
                                              options.initial, pair_rng.derive(0));
        const Past y = sample_stationary_past(kernel, options.burn_in, options.suffix_len,
                                              options.initial, pair_rng.derive(1));
        WindowTvMcOptions mc;
        mc.horizons = curve.horizons;
        mc.window_w = options.window_w;
        mc.replicas = options.prefix_replicas;
        mc.workers  = options.workers;
        const WindowTvMcResult r = window_tv_mc(kernel, x, y, mc, pair_rng.derive(2));
        curve.per_pair[static_cast<std::size_t>(p)] = r.tv;
    }

    curve.beta_raw.assign(H, 0.0);
    curve.se.assign(H, 0.0);
    for (std::size_t h = 0; h < H; ++h) {
        CompensatedSum sum;
        for (const auto& row : curve.per_pair) { sum.add(row[h]); }
        const double mean = sum.value() / static_cast<double>(options.pairs);
        CompensatedSum sq;
        for (const auto& row : curve.per_pair) { sq.add((row[h] - mean) * (row[h] - mean)); }
        const double sd =
            std::sqrt(sq.value() / static_cast<double>(options.pairs - 1));
        curve.beta_raw[h] = mean;
        curve.se[h]       = sd / std::sqrt(static_cast<double>(options.pairs));
    }
    curve.beta_isotonic = isotonic_nonincreasing(curve.beta_raw);
    curve.ci_low.resize(H);
    curve.ci_high.resize(H);
    for (std::size_t h = 0; h < H; ++h) {
        curve.ci_low[h]  = std::max(0.0, curve.beta_raw[h] - 2.0 * curve.se[h]);
        curve.ci_high[h] = curve.beta_raw[h] + 2.0 * curve.se[h];
    }
    return curve;
}

// ---------------------------------------------------------------------------
// correlation_curve
// ---------------------------------------------------------------------------

CorrelationCurve correlation_curve(const Kernel& kernel, const CorrelationOptions& options,
                                   RngStream rng)
{
    if (!kernel.alphabet().has_embedding()) {
        throw std::invalid_argument("correlation_curve: alphabet needs a numeric embedding");
    }
    if (options.sample_length <= options.j_max * 2) {
        throw std::invalid_argument("correlation_curve: sample_length must exceed 2 j_max");
    }
    if (options.replicas < 2) { throw std::invalid_argument("correlation_curve: replicas >= 2"); }

    const auto J = static_cast<std::size_t>(options.j_max) + 1;
    const auto R = static_cast<std::size_t>(options.replicas);
    const auto total = options.burn_in + options.sample_length;

    std::vector<std::vector<double>> per_replica(R, std::vector<double>(J, 0.0));
    parallel_for(R, options.workers, [&](std::size_t r) {
        RngStream        stream = rng.derive(static_cast<std::uint64_t>(r));
        const Trajectory run = sample_chain(kernel, options.initial, total - 1, stream);
        std::vector<double> xi;
        xi.reserve(static_cast<std::size_t>(options.sample_length));
        for (std::int64_t t = options.burn_in; t < total; ++t) {
            xi.push_back(kernel.alphabet().embed(run.symbols[static_cast<std::size_t>(t)]));
        }
        const auto L = static_cast<std::int64_t>(xi.size());
        CompensatedSum msum;
        for (double v : xi) { msum.add(v); }
        const double mean = msum.value() / static_cast<double>(L);
        for (std::size_t j = 0; j < J; ++j) {
            const auto lag = static_cast<std::int64_t>(j);
            CompensatedSum c;
            for (std::int64_t t = 0; t + lag < L; ++t) {
                c.add((xi[static_cast<std::size_t>(t)] - mean)
                      * (xi[static_cast<std::size_t>(t + lag)] - mean));
            }
            per_replica[r][j] = c.value() / static_cast<double>(L - lag);
        }
    });

    CorrelationCurve curve;
    curve.burn_in   = options.burn_in;
    curve.model_ref = kernel.id_hash();
    curve.gamma_hat.assign(J, 0.0);
    curve.se.assign(J, 0.0);
    for (std::size_t j = 0; j < J; ++j) {
        CompensatedSum sum;
        for (std::size_t r = 0; r < R; ++r) { sum.add(per_replica[r][j]); }
        const double mean = sum.value() / static_cast<double>(R);
        CompensatedSum sq;
        for (std::size_t r = 0; r < R; ++r) {
            sq.add((per_replica[r][j] - mean) * (per_replica[r][j] - mean));
        }
        curve.gamma_hat[j] = mean;
        curve.se[j] = std::sqrt(sq.value() / static_cast<double>(R - 1))
                      / std::sqrt(static_cast<double>(R));
    }

    CompensatedSum      abs_acc;
    std::vector<double> hs;
    for (std::size_t j = 0; j < J; ++j) {
        abs_acc.add(std::abs(curve.gamma_hat[j]));
        curve.abs_partial_sums.push_back(abs_acc.value());
        hs.push_back(static_cast<double>(j + 1));
    }
    curve.summability = classify_series(hs, curve.abs_partial_sums, options.policy);

    // Decay fit over lags with signal above the noise floor.
    std::vector<double> lx, ly;
    for (std::size_t j = 1; j < J; ++j) {
        if (std::abs(curve.gamma_hat[j]) > 3.0 * curve.se[j]) {
            lx.push_back(std::log(1.0 + static_cast<double>(j)));
            ly.push_back(std::log(std::abs(curve.gamma_hat[j])));
        }
    }
    curve.fit_points = static_cast<std::int64_t>(lx.size());
    if (lx.size() >= 2) {
        const LinearFit f       = least_squares(lx, ly);
        curve.fitted_exponent   = -f.slope;
        curve.fitted_prefactor  = std::exp(f.intercept);
    }
    return curve;
}

} // namespace gchain
