#include "gchain/coupling.hpp"

#include "gchain/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gchain {

namespace {

void check_distribution(std::span<const double> p, const char* name)
{
    double sum = 0.0;
    for (double v : p) {
        if (v < 0.0) { throw std::invalid_argument(std::string(name) + ": negative mass"); }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-10) {
        throw std::invalid_argument(std::string(name) + ": not normalized");
    }
}

} // namespace

std::pair<int, int> greedy_couple_step(std::span<const double> px,
                                       std::span<const double> py, RngStream& rng)
{
    if (px.size() != py.size() || px.empty()) {
        throw std::invalid_argument("greedy_couple_step: size mismatch");
    }
    check_distribution(px, "greedy_couple_step: px");
    check_distribution(py, "greedy_couple_step: py");

    const int B       = static_cast<int>(px.size());
    double    overlap = 0.0;
    for (int a = 0; a < B; ++a) {
        overlap += std::min(px[static_cast<std::size_t>(a)], py[static_cast<std::size_t>(a)]);
    }

    const double u = rng.next_double();
    if (u < overlap) {
        // Shared mass: walk the pointwise minimum.
        double cum  = 0.0;
        int    last = 0;
        for (int a = 0; a < B; ++a) {
            const double m =
                std::min(px[static_cast<std::size_t>(a)], py[static_cast<std::size_t>(a)]);
            if (m > 0.0) { last = a; }
            cum += m;
            if (u < cum) { return {a, a}; }
        }
        return {last, last};
    }

    // Residuals, both at the same quantile of the leftover mass.
    const double u2   = u - overlap;
    double       cx   = 0.0, cy = 0.0;
    int          a    = -1, b = -1;
    int          lastx = 0, lasty = 0;
    for (int s = 0; s < B; ++s) {
        const double rx = px[static_cast<std::size_t>(s)]
                          - std::min(px[static_cast<std::size_t>(s)], py[static_cast<std::size_t>(s)]);
        const double ry = py[static_cast<std::size_t>(s)]
                          - std::min(px[static_cast<std::size_t>(s)], py[static_cast<std::size_t>(s)]);
        if (rx > 0.0) { lastx = s; }
        if (ry > 0.0) { lasty = s; }
        cx += rx;
        cy += ry;
        if (a < 0 && u2 < cx) { a = s; }
        if (b < 0 && u2 < cy) { b = s; }
    }
    if (a < 0) { a = lastx; }
    if (b < 0) { b = lasty; }
    return {a, b};
}

CoupledTrajectory couple_chains(const Kernel& kernel, const Past& past_x,
                                const Past& past_y, std::int64_t horizon,
                                std::int64_t trailing_window, RngStream rng)
{
    if (horizon < 1) { throw std::invalid_argument("couple_chains: horizon must be >= 1"); }
    if (trailing_window <= 0) { trailing_window = std::max<std::int64_t>(1, horizon / 4); }

    CoupledTrajectory out;
    out.past_x    = past_x;
    out.past_y    = past_y;
    out.model_ref = kernel.id_hash();
    out.symbols_x.reserve(static_cast<std::size_t>(horizon) + 1);
    out.symbols_y.reserve(static_cast<std::size_t>(horizon) + 1);

    auto sx = kernel.stepper(past_x, horizon + 1);
    auto sy = kernel.stepper(past_y, horizon + 1);

    const int           B = kernel.alphabet().size();
    std::vector<double> dx(static_cast<std::size_t>(B)), dy(static_cast<std::size_t>(B));
    for (std::int64_t t = 0; t <= horizon; ++t) {
        sx->dist(dx);
        sy->dist(dy);
        const auto [a, b] = greedy_couple_step(dx, dy, rng);
        sx->push(a);
        sy->push(b);
        out.symbols_x.push_back(a);
        out.symbols_y.push_back(b);
        if (a != b) { out.last_disagreement = t; }
    }
    out.coupled_at_horizon = out.last_disagreement < horizon - trailing_window + 1;
    return out;
}

CouplingTailCurve coupling_time_tail(const Kernel& kernel, const Past& past_x,
                                     const Past& past_y,
                                     std::vector<std::int64_t> horizons,
                                     std::int64_t horizon_T, std::int64_t trailing_window,
                                     std::int64_t replicas, RngStream rng, unsigned workers)
{
    if (horizons.empty()) { throw std::invalid_argument("coupling_time_tail: no horizons"); }
    if (replicas < 1) { throw std::invalid_argument("coupling_time_tail: replicas >= 1"); }
    if (trailing_window <= 0) { trailing_window = std::max<std::int64_t>(1, horizon_T / 4); }
    std::sort(horizons.begin(), horizons.end());
    if (horizons.front() < 0 || horizons.back() + trailing_window > horizon_T) {
        throw std::invalid_argument(
            "coupling_time_tail: need 0 <= n and max(horizons) + W <= T");
    }

    const int B = kernel.alphabet().size();

    std::vector<std::int64_t> last(static_cast<std::size_t>(replicas), -1);
    parallel_for(static_cast<std::size_t>(replicas), workers, [&](std::size_t r) {
        RngStream           stream = rng.derive(static_cast<std::uint64_t>(r));
        auto                sx     = kernel.stepper(past_x, horizon_T + 1);
        auto                sy     = kernel.stepper(past_y, horizon_T + 1);
        std::vector<double> dx(static_cast<std::size_t>(B)), dy(static_cast<std::size_t>(B));
        std::int64_t        last_dis = -1;
        for (std::int64_t t = 0; t <= horizon_T; ++t) {
            sx->dist(dx);
            sy->dist(dy);
            const auto [a, b] = greedy_couple_step(dx, dy, stream);
            sx->push(a);
            sy->push(b);
            if (a != b) { last_dis = t; }
        }
        last[r] = last_dis;
    });

    CouplingTailCurve curve;
    curve.horizons        = std::move(horizons);
    curve.replicas        = replicas;
    curve.horizon_T       = horizon_T;
    curve.trailing_window = trailing_window;
    curve.model_ref       = kernel.id_hash();
    for (std::int64_t l : last) {
        if (l >= horizon_T - trailing_window + 1) { ++curve.censored; }
    }

    const double z  = 1.959963984540054; // Wilson 95%
    const double z2 = z * z;
    const auto   R  = static_cast<double>(replicas);
    for (std::int64_t n : curve.horizons) {
        std::int64_t hits = 0;
        for (std::int64_t l : last) {
            if (l >= n) { ++hits; }
        }
        const double p      = static_cast<double>(hits) / R;
        const double center = (p + z2 / (2.0 * R)) / (1.0 + z2 / R);
        const double half =
            z * std::sqrt(p * (1.0 - p) / R + z2 / (4.0 * R * R)) / (1.0 + z2 / R);
        curve.tail_estimate.push_back(p);
        curve.ci_low.push_back(std::max(0.0, center - half));
        curve.ci_high.push_back(std::min(1.0, center + half));
    }
    return curve;
}

} // namespace gchain
