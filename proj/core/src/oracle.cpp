#include "gchain/oracle.hpp"

#include "gchain/numeric.hpp"
#include "gchain/parallel.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace gchain {

namespace {

std::uint64_t checked_paths(int base, std::int64_t depth, std::uint64_t max_paths)
{
    std::uint64_t v = 1;
    for (std::int64_t i = 0; i < depth; ++i) {
        v *= static_cast<std::uint64_t>(base);
        if (v > max_paths) {
            throw std::invalid_argument("oracle: path budget exceeded");
        }
    }
    return v;
}

/// Fixed task split depth: parallel subtrees are the |S|^d top prefixes.
/// The depth depends only on the problem, never on the worker count, so the
/// merged result is bit-identical at any parallelism.
std::int64_t split_depth(int base, std::int64_t total_depth)
{
    std::int64_t d     = 0;
    std::int64_t tasks = 1;
    while (d < total_depth - 1 && tasks * base <= 16) {
        tasks *= base;
        ++d;
    }
    return d;
}

struct WalkAccumulators {
    std::vector<CompensatedSum> window_probs;   // window-law cells
    std::vector<CompensatedSum> increment_mean; // E[Delta_n]
    std::vector<CompensatedSum> d_mean;         // E[d_n]
    double                      max_sandwich = 0.0;
    std::uint64_t               evals        = 0;
};

/// Depth-first enumeration from a prefix with prefix-product reuse. Window
/// laws walk a single stepper; increment statistics walk a shared-symbol
/// pair stepper (the x side carries the path probability).
class PathWalker {
  public:
    PathWalker(const Kernel& kernel, KernelStepper* single, KernelPairStepper* pair,
               std::int64_t t0, std::int64_t t1, double gamma,
               std::int64_t start_depth, WalkAccumulators& acc)
        : single_(single), pair_(pair), t0_(t0), t1_(t1), gamma_(gamma), acc_(acc),
          base_(kernel.alphabet().size()), dist_y_(static_cast<std::size_t>(base_))
    {
        // One conditional buffer per depth: a recursion level must not
        // clobber the distribution its parent is still iterating over.
        dist_stack_.assign(static_cast<std::size_t>(t1_ - start_depth + 2),
                           std::vector<double>(static_cast<std::size_t>(base_)));
        start_depth_ = start_depth;
    }

    void walk(double prob, std::int64_t depth, std::uint64_t window_index)
    {
        auto& dist = dist_stack_[static_cast<std::size_t>(depth - start_depth_)];
        if (pair_ != nullptr) {
            // Increment at prefix length `depth`; depth 0 compares the two
            // base conditionals.
            pair_->dists(dist, dist_y_);
            acc_.evals += static_cast<std::uint64_t>(2 * base_);
            double inc = 0.0, dn = 0.0;
            for (int a = 0; a < base_; ++a) {
                const double gx = dist[static_cast<std::size_t>(a)];
                const double gy = dist_y_[static_cast<std::size_t>(a)];
                const double df = gx - gy;
                inc += df * df;
                const double sq = std::sqrt(gx) - std::sqrt(gy);
                dn += sq * sq;
            }
            const auto n = static_cast<std::size_t>(depth);
            acc_.increment_mean[n].add(prob * inc);
            acc_.d_mean[n].add(prob * dn);
            const double lo = 4.0 * gamma_ * dn - inc;
            const double hi = inc - 4.0 * (1.0 - gamma_) * dn;
            acc_.max_sandwich = std::max({acc_.max_sandwich, lo, hi});
        }
        else {
            single_->dist(dist);
            acc_.evals += static_cast<std::uint64_t>(base_);
        }
        if (depth > t1_) {
            if (!acc_.window_probs.empty()) {
                acc_.window_probs[static_cast<std::size_t>(window_index)].add(prob);
            }
            return;
        }
        for (int s = 0; s < base_; ++s) {
            const double child = prob * dist[static_cast<std::size_t>(s)];
            const std::uint64_t wi =
                depth >= t0_ ? window_index * static_cast<std::uint64_t>(base_)
                                   + static_cast<std::uint64_t>(s)
                             : window_index;
            if (pair_ != nullptr) { pair_->push(s); }
            else { single_->push(s); }
            // Save one dist() per leaf: recurse only to collect stats.
            walk_child(child, depth + 1, wi);
            if (pair_ != nullptr) { pair_->pop(); }
            else { single_->pop(); }
        }
    }

  private:
    void walk_child(double prob, std::int64_t depth, std::uint64_t window_index)
    {
        if (depth > t1_ && pair_ == nullptr) {
            if (!acc_.window_probs.empty()) {
                acc_.window_probs[static_cast<std::size_t>(window_index)].add(prob);
            }
            return;
        }
        walk(prob, depth, window_index);
    }

    KernelStepper*      single_;
    KernelPairStepper*  pair_;
    std::int64_t        t0_, t1_;
    double              gamma_;
    WalkAccumulators&   acc_;
    int                 base_;
    std::int64_t        start_depth_ = 0;
    std::vector<std::vector<double>> dist_stack_;
    std::vector<double>              dist_y_;
};

/// Shared driver: enumerates all paths w_0^{t1}, optionally accumulating the
/// window law on [t0, t1] and/or the per-depth increment statistics.
struct WalkResult {
    std::vector<double> window_probs;
    std::vector<double> increment_means;
    std::vector<double> d_means;
    double              max_sandwich = 0.0;
    OracleStats         stats;
};

WalkResult run_walk(const Kernel& kernel, const Past& past_x, const Past* past_y,
                    std::int64_t t0, std::int64_t t1, bool want_window,
                    bool want_increments, const OracleBudget& budget)
{
    const int base = kernel.alphabet().size();
    if (want_window && (t1 < 0 || t0 < 0 || t0 > t1)) {
        throw std::invalid_argument("oracle: need 0 <= t0 <= t1");
    }
    if (t1 < -1) { throw std::invalid_argument("oracle: bad horizon"); }
    const std::uint64_t paths = checked_paths(base, t1 + 1, budget.max_paths);

    const auto start = std::chrono::steady_clock::now();

    const std::int64_t d0 = split_depth(base, t1 + 1);
    std::uint64_t      tasks = 1;
    for (std::int64_t i = 0; i < d0; ++i) { tasks *= static_cast<std::uint64_t>(base); }

    std::uint64_t cells = 1;
    if (want_window) {
        for (std::int64_t t = t0; t <= t1; ++t) { cells *= static_cast<std::uint64_t>(base); }
    }

    const double gamma = kernel.non_null_bound();

    std::vector<WalkAccumulators> partials(tasks);
    parallel_for(tasks, budget.workers, [&](std::size_t task) {
        WalkAccumulators& acc = partials[task];
        if (want_window) { acc.window_probs.resize(cells); }
        if (want_increments) {
            acc.increment_mean.resize(static_cast<std::size_t>(t1 + 2));
            acc.d_mean.resize(static_cast<std::size_t>(t1 + 2));
        }
        std::unique_ptr<KernelStepper>     sx;
        std::unique_ptr<KernelPairStepper> pair;
        if (want_increments) { pair = kernel.pair_stepper(past_x, *past_y, t1 + 1); }
        else { sx = kernel.stepper(past_x, t1 + 1); }

        // Decode the task prefix and drive the steppers to its root,
        // accumulating the path probability and any window/increment
        // statistics along the way.
        std::vector<int> prefix(static_cast<std::size_t>(d0));
        std::uint64_t    rem = task;
        for (std::int64_t i = d0 - 1; i >= 0; --i) {
            prefix[static_cast<std::size_t>(i)] = static_cast<int>(rem % static_cast<std::uint64_t>(base));
            rem /= static_cast<std::uint64_t>(base);
        }

        // Nodes shallower than the split are shared between tasks; only the
        // canonical task (all-zero trailing digits) records their increments.
        std::vector<bool> canonical(static_cast<std::size_t>(d0) + 1, true);
        for (std::int64_t d = d0 - 1; d >= 0; --d) {
            canonical[static_cast<std::size_t>(d)] =
                canonical[static_cast<std::size_t>(d + 1)]
                && prefix[static_cast<std::size_t>(d)] == 0;
        }

        std::vector<double> dist(static_cast<std::size_t>(base));
        std::vector<double> dist_y(static_cast<std::size_t>(base));
        double              prob = 1.0;
        std::uint64_t       window_index = 0;
        for (std::int64_t d = 0; d < d0; ++d) {
            if (want_increments) {
                pair->dists(dist, dist_y);
                acc.evals += static_cast<std::uint64_t>(2 * base);
                if (canonical[static_cast<std::size_t>(d)]) {
                    double inc = 0.0, dn = 0.0;
                    for (int a = 0; a < base; ++a) {
                        const double df = dist[static_cast<std::size_t>(a)]
                                          - dist_y[static_cast<std::size_t>(a)];
                        inc += df * df;
                        const double sq = std::sqrt(dist[static_cast<std::size_t>(a)])
                                          - std::sqrt(dist_y[static_cast<std::size_t>(a)]);
                        dn += sq * sq;
                    }
                    acc.increment_mean[static_cast<std::size_t>(d)].add(prob * inc);
                    acc.d_mean[static_cast<std::size_t>(d)].add(prob * dn);
                    const double lo = 4.0 * gamma * dn - inc;
                    const double hi = inc - 4.0 * (1.0 - gamma) * dn;
                    acc.max_sandwich = std::max({acc.max_sandwich, lo, hi});
                }
            }
            else {
                sx->dist(dist);
                acc.evals += static_cast<std::uint64_t>(base);
            }
            const int s = prefix[static_cast<std::size_t>(d)];
            prob *= dist[static_cast<std::size_t>(s)];
            if (d >= t0) {
                window_index = window_index * static_cast<std::uint64_t>(base)
                               + static_cast<std::uint64_t>(s);
            }
            if (want_increments) { pair->push(s); }
            else { sx->push(s); }
        }

        PathWalker walker(kernel, sx.get(), pair.get(), t0, t1, gamma, d0, acc);
        walker.walk(prob, d0, window_index);
    });

    // Deterministic merge in task order.
    WalkResult out;
    if (want_window) {
        std::vector<CompensatedSum> cellsum(cells);
        for (const auto& p : partials) {
            for (std::uint64_t c = 0; c < cells; ++c) {
                cellsum[c].add(p.window_probs[c].value());
            }
        }
        out.window_probs.resize(cells);
        for (std::uint64_t c = 0; c < cells; ++c) { out.window_probs[c] = cellsum[c].value(); }
    }
    if (want_increments) {
        const auto n = static_cast<std::size_t>(t1 + 2);
        out.increment_means.assign(n, 0.0);
        out.d_means.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            CompensatedSum inc, dn;
            for (const auto& p : partials) {
                inc.add(p.increment_mean[i].value());
                dn.add(p.d_mean[i].value());
            }
            out.increment_means[i] = inc.value();
            out.d_means[i]         = dn.value();
        }
    }
    for (const auto& p : partials) {
        out.max_sandwich = std::max(out.max_sandwich, p.max_sandwich);
        out.stats.evals += p.evals;
    }
    out.stats.paths = paths;
    out.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

} // namespace

WindowLaw exact_window_law(const Kernel& kernel, const Past& past, std::int64_t t0,
                           std::int64_t t1, const OracleBudget& budget)
{
    WalkResult r = run_walk(kernel, past, nullptr, t0, t1, true, false, budget);
    WindowLaw  law{past, t0, t1, std::move(r.window_probs), r.stats};
    return law;
}

double exact_window_tv(const Kernel& kernel, const Past& past_x, const Past& past_y,
                       std::int64_t t0, std::int64_t t1, const OracleBudget& budget)
{
    const WindowLaw lx = exact_window_law(kernel, past_x, t0, t1, budget);
    const WindowLaw ly = exact_window_law(kernel, past_y, t0, t1, budget);
    CompensatedSum  l1;
    for (std::size_t i = 0; i < lx.probs.size(); ++i) {
        l1.add(std::abs(lx.probs[i] - ly.probs[i]));
    }
    return l1.value() / 2.0;
}

WeakL2Exact exact_weak_l2_expectation(const Kernel& kernel, const Past& past_x,
                                      const Past& past_y, std::int64_t n_max,
                                      const OracleBudget& budget)
{
    if (n_max < 0) { throw std::invalid_argument("exact_weak_l2_expectation: n_max >= 0"); }
    // Increment n compares the conditionals after n generated symbols (n = 0
    // is the pair of base conditionals), so paths w_0^{n_max - 1} suffice.
    WalkResult r = run_walk(kernel, past_x, &past_y, 0, n_max - 1, false, true, budget);
    WeakL2Exact out;
    out.increment_means.assign(r.increment_means.begin(), r.increment_means.end());
    CompensatedSum acc;
    for (double v : out.increment_means) {
        acc.add(v);
        out.cumulative_means.push_back(acc.value());
    }
    out.stats = r.stats;
    return out;
}

HellingerExact exact_hellinger_increments(const Kernel& kernel, const Past& past_x,
                                          const Past& past_y, std::int64_t n_max,
                                          const OracleBudget& budget)
{
    if (n_max < 0) { throw std::invalid_argument("exact_hellinger_increments: n_max >= 0"); }
    WalkResult r = run_walk(kernel, past_x, &past_y, 0, n_max - 1, false, true, budget);
    HellingerExact out;
    out.d_means                = std::move(r.d_means);
    out.increment_means        = std::move(r.increment_means);
    out.max_sandwich_violation = r.max_sandwich;
    out.stats                  = r.stats;
    return out;
}

} // namespace gchain
