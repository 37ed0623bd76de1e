#include "gchain/models.hpp"

#include "gchain/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gchain {

// ---------------------------------------------------------------------------
// PsiSpec
// ---------------------------------------------------------------------------

PsiSpec PsiSpec::table(std::vector<double> r, std::vector<double> v, double eps)
{
    PsiSpec s;
    s.kind    = Kind::table;
    s.epsilon = eps;
    s.r_nodes = std::move(r);
    s.values  = std::move(v);
    return s;
}

double PsiSpec::operator()(double r) const
{
    switch (kind) {
    case Kind::step: return r >= 0.0 ? 1.0 - epsilon : epsilon;
    case Kind::linear: return 0.5 + (0.5 - epsilon) * r;
    case Kind::table: {
        if (r <= r_nodes.front()) { return values.front(); }
        if (r >= r_nodes.back()) { return values.back(); }
        const auto it = std::upper_bound(r_nodes.begin(), r_nodes.end(), r);
        const auto i  = static_cast<std::size_t>(it - r_nodes.begin());
        const double r0 = r_nodes[i - 1], r1 = r_nodes[i];
        const double v0 = values[i - 1], v1 = values[i];
        return v0 + (v1 - v0) * (r - r0) / (r1 - r0);
    }
    }
    return 0.5;
}

double PsiSpec::max_slope() const
{
    switch (kind) {
    case Kind::step: return std::numeric_limits<double>::infinity();
    case Kind::linear: return 0.5 - epsilon;
    case Kind::table: {
        double slope = 0.0;
        for (std::size_t i = 1; i < r_nodes.size(); ++i) {
            slope = std::max(slope, (values[i] - values[i - 1]) / (r_nodes[i] - r_nodes[i - 1]));
        }
        return slope;
    }
    }
    return 0.0;
}

double PsiSpec::max_increment_per_flip(std::int64_t window) const
{
    const double jump = 1.0 - 2.0 * epsilon;
    if (kind == Kind::step) { return jump; }
    return std::min(jump, max_slope() * 2.0 / static_cast<double>(window));
}

void PsiSpec::validate() const
{
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("PsiSpec: epsilon must be in (0, 1/2)");
    }
    if (kind == Kind::table) {
        if (r_nodes.size() < 2 || r_nodes.size() != values.size()) {
            throw std::invalid_argument("PsiSpec: malformed table");
        }
        if (r_nodes.front() != -1.0 || r_nodes.back() != 1.0) {
            throw std::invalid_argument("PsiSpec: table nodes must span [-1, 1]");
        }
        for (std::size_t i = 1; i < r_nodes.size(); ++i) {
            if (!(r_nodes[i] > r_nodes[i - 1])) {
                throw std::invalid_argument("PsiSpec: table nodes must increase");
            }
        }
    }
    const int grid = 257;
    double    prev = -1.0;
    for (int i = 0; i < grid; ++i) {
        const double r = -1.0 + 2.0 * static_cast<double>(i) / (grid - 1);
        const double v = (*this)(r);
        if (v < epsilon - 1e-12 || v > 1.0 - epsilon + 1e-12) {
            throw std::invalid_argument("PsiSpec: range escapes [eps, 1-eps]");
        }
        if (i > 0 && v < prev - 1e-12) {
            throw std::invalid_argument("PsiSpec: not nondecreasing");
        }
        // r = 0 is excluded: the step kind jumps there, and odd windows never
        // produce a zero mean.
        if (r != 0.0 && std::abs((*this)(r) + (*this)(-r) - 1.0) > 1e-12) {
            throw std::invalid_argument("PsiSpec: psi(r) + psi(-r) != 1 on grid");
        }
        prev = v;
    }
}

// ---------------------------------------------------------------------------
// PhiSpec
// ---------------------------------------------------------------------------

PhiSpec PhiSpec::table(std::vector<double> r, std::vector<double> v, double lip_lo,
                       double lip_hi)
{
    PhiSpec s;
    s.kind      = Kind::table;
    s.r_nodes   = std::move(r);
    s.values    = std::move(v);
    s.lip_lower = lip_lo;
    s.lip_upper = lip_hi;
    return s;
}

double PhiSpec::operator()(double r) const
{
    if (kind == Kind::logit) { return 1.0 / (1.0 + std::exp(-2.0 * r)); }
    if (r <= r_nodes.front()) { return values.front(); }
    if (r >= r_nodes.back()) { return values.back(); }
    const auto it = std::upper_bound(r_nodes.begin(), r_nodes.end(), r);
    const auto i  = static_cast<std::size_t>(it - r_nodes.begin());
    const double r0 = r_nodes[i - 1], r1 = r_nodes[i];
    const double v0 = values[i - 1], v1 = values[i];
    return v0 + (v1 - v0) * (r - r0) / (r1 - r0);
}

double PhiSpec::max_slope() const { return kind == Kind::logit ? 0.5 : lip_upper; }

double PhiSpec::min_slope_on(double radius) const
{
    if (kind == Kind::logit) {
        const double p = (*this)(radius);
        return 2.0 * p * (1.0 - p);
    }
    return lip_lower;
}

void PhiSpec::validate() const
{
    if (kind == Kind::logit) { return; }
    if (r_nodes.size() < 2 || r_nodes.size() != values.size()) {
        throw std::invalid_argument("PhiSpec: malformed table");
    }
    if (!(lip_lower > 0.0) || !(lip_upper >= lip_lower)) {
        throw std::invalid_argument("PhiSpec: need 0 < lip_lower <= lip_upper");
    }
    double prev = 0.0;
    for (std::size_t i = 0; i < r_nodes.size(); ++i) {
        if (i > 0 && !(r_nodes[i] > r_nodes[i - 1])) {
            throw std::invalid_argument("PhiSpec: table nodes must increase");
        }
        const double v = values[i];
        if (!(v > 0.0 && v < 1.0)) {
            throw std::invalid_argument("PhiSpec: values must lie in (0, 1)");
        }
        if (i > 0 && !(v > prev)) {
            throw std::invalid_argument("PhiSpec: values must strictly increase");
        }
        prev = v;
    }
    for (double r : r_nodes) {
        if (std::abs((*this)(r) + (*this)(-r) - 1.0) > 1e-12) {
            throw std::invalid_argument("PhiSpec: phi(r) + phi(-r) != 1 on grid");
        }
    }
}

// ---------------------------------------------------------------------------
// BetaSequence
// ---------------------------------------------------------------------------

BetaSequence::BetaSequence(std::vector<double> prefix, std::optional<PowerLawTail> tail)
    : prefix_(std::move(prefix)), tail_(tail)
{
    if (tail_.has_value()) {
        if (!(tail_->exponent > 1.0)) {
            throw std::invalid_argument(
                "BetaSequence: tail exponent must exceed 1 (absolute summability)");
        }
        if (tail_->start < static_cast<std::int64_t>(prefix_.size()) + 1) {
            throw std::invalid_argument("BetaSequence: tail start overlaps prefix");
        }
    }
    all_nonneg_ = std::all_of(prefix_.begin(), prefix_.end(),
                              [](double b) { return b >= 0.0; })
                  && (!tail_.has_value() || tail_->c >= 0.0);
}

double BetaSequence::at(std::int64_t n) const
{
    if (n < 1) { throw std::invalid_argument("BetaSequence::at: n >= 1"); }
    if (n <= static_cast<std::int64_t>(prefix_.size())) {
        return prefix_[static_cast<std::size_t>(n - 1)];
    }
    if (tail_.has_value() && n >= tail_->start) {
        return tail_->c * std::pow(static_cast<double>(n), -tail_->exponent);
    }
    return 0.0;
}

double BetaSequence::tail_sum(std::int64_t k) const
{
    if (k < 0) { throw std::invalid_argument("BetaSequence::tail_sum: k >= 0"); }
    CompensatedSum s;
    const auto     P = static_cast<std::int64_t>(prefix_.size());
    for (std::int64_t n = k + 1; n <= P; ++n) {
        s.add(prefix_[static_cast<std::size_t>(n - 1)]);
    }
    if (tail_.has_value() && tail_->c != 0.0) {
        const std::int64_t first = std::max(k + 1, tail_->start);
        s.add(tail_->c
              * arithmetic_power_tail(static_cast<double>(first), 1.0, tail_->exponent));
    }
    return s.value();
}

double BetaSequence::abs_tail_sum(std::int64_t k) const
{
    if (k < 0) { throw std::invalid_argument("BetaSequence::abs_tail_sum: k >= 0"); }
    CompensatedSum s;
    const auto     P = static_cast<std::int64_t>(prefix_.size());
    for (std::int64_t n = k + 1; n <= P; ++n) {
        s.add(std::abs(prefix_[static_cast<std::size_t>(n - 1)]));
    }
    if (tail_.has_value() && tail_->c != 0.0) {
        const std::int64_t first = std::max(k + 1, tail_->start);
        s.add(std::abs(tail_->c)
              * arithmetic_power_tail(static_cast<double>(first), 1.0, tail_->exponent));
    }
    return s.value();
}

double BetaSequence::progression_sum(std::int64_t first, std::int64_t step) const
{
    if (first < 1 || step < 1) {
        throw std::invalid_argument("BetaSequence::progression_sum: bad arguments");
    }
    CompensatedSum s;
    const auto     P = static_cast<std::int64_t>(prefix_.size());
    for (std::int64_t n = first; n <= P; n += step) {
        s.add(prefix_[static_cast<std::size_t>(n - 1)]);
    }
    if (tail_.has_value() && tail_->c != 0.0) {
        std::int64_t n0 = first;
        if (n0 < tail_->start) {
            const std::int64_t gap = tail_->start - n0;
            n0 += (gap + step - 1) / step * step;
        }
        s.add(tail_->c
              * arithmetic_power_tail(static_cast<double>(n0), static_cast<double>(step),
                                      tail_->exponent));
    }
    return s.value();
}

std::optional<std::int64_t> BetaSequence::finite_support() const
{
    if (tail_.has_value() && tail_->c != 0.0) { return std::nullopt; }
    for (auto n = static_cast<std::int64_t>(prefix_.size()); n >= 1; --n) {
        if (prefix_[static_cast<std::size_t>(n - 1)] != 0.0) { return n; }
    }
    return 0;
}

std::int64_t BetaSequence::decay_index(double tol, std::int64_t cap) const
{
    if (abs_tail_sum(0) <= tol) { return 0; }
    if (abs_tail_sum(cap) > tol) { return cap; }
    std::int64_t lo = 0, hi = cap;
    while (lo + 1 < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (abs_tail_sum(mid) <= tol) { hi = mid; }
        else { lo = mid; }
    }
    return hi;
}

// ---------------------------------------------------------------------------
// Parameter validation
// ---------------------------------------------------------------------------

void BkfParams::validate() const
{
    if (m.empty() || m.size() != lambda.size()) {
        throw std::invalid_argument("BkfParams: m and lambda must be nonempty and matched");
    }
    std::int64_t prev = 0;
    for (std::int64_t mj : m) {
        if (mj <= 0 || mj % 2 == 0) {
            throw std::invalid_argument("BkfParams: each m_j must be positive and odd");
        }
        if (mj <= prev) { throw std::invalid_argument("BkfParams: m must strictly increase"); }
        prev = mj;
    }
    CompensatedSum s;
    for (double l : lambda) {
        if (!(l > 0.0)) { throw std::invalid_argument("BkfParams: lambda_j must be positive"); }
        s.add(l);
    }
    if (std::abs(s.value() - 1.0) > 1e-15) {
        throw std::invalid_argument("BkfParams: sum of lambda must equal 1 within 1e-15");
    }
    psi.validate();
    if (!(r0 >= 0.0 && r0 < 1.0)) {
        throw std::invalid_argument("BkfParams: r0 must lie in [0, 1)");
    }
}

bool BkfParams::lacunary() const
{
    if (!(psi(r0) > psi(-r0))) { return false; }
    const double ratio = 4.0 / (1.0 - r0);
    for (std::size_t j = 0; j + 1 < m.size(); ++j) {
        if (static_cast<double>(m[j + 1]) < ratio * static_cast<double>(m[j])) {
            return false;
        }
    }
    return true;
}

void ArParams::validate() const
{
    phi.validate();
    if (phi.kind == PhiSpec::Kind::table) {
        const double radius = field_radius();
        if (phi.r_nodes.front() > -radius || phi.r_nodes.back() < radius) {
            throw std::invalid_argument("ArParams: phi table must cover the field range");
        }
    }
}

bool ArParams::attractive() const { return beta.all_nonnegative() && delta >= 0.0; }

double ArParams::field_radius() const { return beta.abs_tail_sum(0) + std::abs(delta); }

double ArParams::bi_lipschitz_gamma() const
{
    const double lo    = phi.min_slope_on(field_radius());
    double       gamma = std::max(1.0, 2.0 * phi.max_slope());
    if (lo > 0.0) { gamma = std::max(gamma, 1.0 / (2.0 * lo)); }
    return gamma;
}

double RenewalParams::q(std::int64_t i) const
{
    if (i < 0) { throw std::invalid_argument("RenewalParams::q: i >= 0"); }
    if (i < static_cast<std::int64_t>(q_prefix.size())) {
        return q_prefix[static_cast<std::size_t>(i)];
    }
    switch (tail_kind) {
    case TailKind::constant: return q_inf;
    case TailKind::power: return q_inf + a * std::pow(static_cast<double>(i) + 1.0, -theta);
    case TailKind::geometric: return q_inf + a * std::pow(rho, static_cast<double>(i));
    }
    return q_inf;
}

void RenewalParams::validate() const
{
    if (!(q_inf > 0.0 && q_inf < 1.0)) {
        throw std::invalid_argument("RenewalParams: q_inf must lie in (0, 1)");
    }
    if (a < 0.0) { throw std::invalid_argument("RenewalParams: tail amplitude must be >= 0"); }
    if (tail_kind == TailKind::power && !(theta > 0.0)) {
        throw std::invalid_argument("RenewalParams: power tail needs theta > 0");
    }
    if (tail_kind == TailKind::geometric && !(rho > 0.0 && rho < 1.0)) {
        throw std::invalid_argument("RenewalParams: geometric tail needs rho in (0, 1)");
    }
    double prev = 1.0;
    for (std::size_t i = 0; i < q_prefix.size(); ++i) {
        const double qi = q_prefix[i];
        if (!(qi > 0.0 && qi < 1.0)) {
            throw std::invalid_argument("RenewalParams: q_i must lie in (0, 1)");
        }
        if (i > 0 && qi > prev + 1e-15) {
            throw std::invalid_argument("RenewalParams: q must be nonincreasing");
        }
        if (qi < q_inf - 1e-15) {
            throw std::invalid_argument("RenewalParams: q_i must stay >= q_inf");
        }
        prev = qi;
    }
    const auto P = static_cast<std::int64_t>(q_prefix.size());
    if (P > 0 && q(P) > q_prefix.back() + 1e-15) {
        throw std::invalid_argument("RenewalParams: tail form breaks monotonicity at prefix end");
    }
    if (!(q(0) < 1.0)) { throw std::invalid_argument("RenewalParams: q_0 must be < 1"); }
}

void FiniteMemoryParams::validate() const
{
    if (order < 0) { throw std::invalid_argument("FiniteMemoryParams: order >= 0"); }
    if (order > 24) { throw std::invalid_argument("FiniteMemoryParams: order too large"); }
    const std::size_t rows = row_count();
    const auto        B    = static_cast<std::size_t>(alphabet.size());
    if (table.size() != rows * B) {
        throw std::invalid_argument("FiniteMemoryParams: table size mismatch");
    }
    for (std::size_t r = 0; r < rows; ++r) {
        CompensatedSum s;
        for (std::size_t a = 0; a < B; ++a) {
            const double p = table[r * B + a];
            if (!(p > 0.0)) {
                throw std::invalid_argument("FiniteMemoryParams: entries must be positive");
            }
            s.add(p);
        }
        if (std::abs(s.value() - 1.0) > 1e-12) {
            throw std::invalid_argument("FiniteMemoryParams: row does not sum to 1");
        }
    }
}

std::size_t FiniteMemoryParams::row_count() const
{
    std::size_t rows = 1;
    for (int i = 0; i < order; ++i) { rows *= static_cast<std::size_t>(alphabet.size()); }
    return rows;
}

std::int64_t FiniteMemoryParams::context_index(const Past& past) const
{
    const auto   B   = static_cast<std::int64_t>(alphabet.size());
    std::int64_t ctx = 0;
    for (int i = 1; i <= order; ++i) { ctx = ctx * B + past.lookup(i); }
    return ctx;
}

// ---------------------------------------------------------------------------
// Embedded window sums over a base past
// ---------------------------------------------------------------------------

namespace {

class PastEmbedSums {
  public:
    PastEmbedSums(const Past& past, const Alphabet& alphabet)
    {
        suffix_cum_.reserve(static_cast<std::size_t>(past.suffix_length()) + 1);
        suffix_cum_.push_back(0.0);
        for (int s : past.suffix()) {
            suffix_cum_.push_back(suffix_cum_.back() + alphabet.embed(s));
        }
        tail_cum_.reserve(static_cast<std::size_t>(past.tail_period()) + 1);
        tail_cum_.push_back(0.0);
        for (int s : past.tail()) { tail_cum_.push_back(tail_cum_.back() + alphabet.embed(s)); }
    }

    /// Sum of embedded symbols over lags 1..n (n >= 0).
    double first_lags(std::int64_t n) const
    {
        const auto L = static_cast<std::int64_t>(suffix_cum_.size()) - 1;
        if (n <= L) { return suffix_cum_[static_cast<std::size_t>(n)]; }
        const auto p      = static_cast<std::int64_t>(tail_cum_.size()) - 1;
        const auto beyond = n - L;
        const auto full   = beyond / p;
        const auto rest   = beyond % p;
        return suffix_cum_[static_cast<std::size_t>(L)]
               + static_cast<double>(full) * tail_cum_[static_cast<std::size_t>(p)]
               + tail_cum_[static_cast<std::size_t>(rest)];
    }

  private:
    std::vector<double> suffix_cum_;
    std::vector<double> tail_cum_;
};

void require_spin_history(const Past& past)
{
    if (past.max_symbol() > 1) {
        throw std::invalid_argument("binary kernel: past contains non-spin symbols");
    }
}

// ---------------------------------------------------------------------------
// BKF kernel
// ---------------------------------------------------------------------------

class BkfStepper final : public KernelStepper {
  public:
    BkfStepper(const BkfParams& p, const Past& base)
        : p_(&p), base_(base, Alphabet::spin())
    {
        gen_cum_.push_back(0.0);
    }

    void push(int symbol) override
    {
        gen_cum_.push_back(gen_cum_.back() + (symbol == 1 ? 1.0 : -1.0));
    }

    void pop() override
    {
        if (gen_cum_.size() <= 1) { throw std::logic_error("BkfStepper::pop on empty history"); }
        gen_cum_.pop_back();
    }

    void dist(std::span<double> out) const override
    {
        const auto t    = static_cast<std::int64_t>(gen_cum_.size()) - 1;
        double     plus = 0.0, minus = 0.0;
        for (std::size_t j = 0; j < p_->m.size(); ++j) {
            const std::int64_t m        = p_->m[j];
            const std::int64_t gen_part = std::min(m, t);
            const double       gen_sum  = gen_cum_[static_cast<std::size_t>(t)]
                                   - gen_cum_[static_cast<std::size_t>(t - gen_part)];
            const double base_sum = base_.first_lags(m - gen_part);
            const double mean     = (gen_sum + base_sum) / static_cast<double>(m);
            plus += p_->lambda[j] * p_->psi(mean);
            minus += p_->lambda[j] * p_->psi(-mean);
        }
        out[0] = minus;
        out[1] = plus;
    }

    std::int64_t depth() const noexcept override
    {
        return static_cast<std::int64_t>(gen_cum_.size()) - 1;
    }

  private:
    const BkfParams*    p_;
    PastEmbedSums       base_;
    std::vector<double> gen_cum_;
};

class BkfKernel final : public Kernel {
  public:
    explicit BkfKernel(BkfParams params) : p_(std::move(params)) { p_.validate(); }

    const Alphabet& alphabet() const noexcept override { return Alphabet::spin(); }
    double non_null_bound() const noexcept override { return p_.psi.epsilon; }

    double eval(int symbol, const Past& past) const override
    {
        if (symbol < 0 || symbol > 1) {
            throw std::invalid_argument("BkfKernel: binary alphabet required");
        }
        require_spin_history(past);
        const PastEmbedSums sums(past, Alphabet::spin());
        const double        sign = symbol == 1 ? 1.0 : -1.0;
        CompensatedSum      acc;
        for (std::size_t j = 0; j < p_.m.size(); ++j) {
            const double mean = sums.first_lags(p_.m[j]) / static_cast<double>(p_.m[j]);
            acc.add(p_.lambda[j] * p_.psi(sign * mean));
        }
        return acc.value();
    }

    std::unique_ptr<KernelStepper> stepper(const Past& base, std::int64_t) const override
    {
        require_spin_history(base);
        return std::make_unique<BkfStepper>(p_, base);
    }

    bool attractive() const noexcept override { return true; }

    std::optional<std::int64_t> memory_order() const override { return p_.m.back(); }

    std::optional<double> closed_form_variation(std::int64_t k) const override
    {
        if (k >= p_.m.back()) { return 0.0; }
        return std::nullopt;
    }

    std::optional<double> closed_form_oscillation(std::int64_t k) const override
    {
        if (k > p_.m.back()) { return 0.0; }
        if (p_.psi.kind != PsiSpec::Kind::linear) { return std::nullopt; }
        // Linear psi: every flip at lag k <= m_j moves Q_j by exactly
        // (1 - 2 eps) / m_j, independently of the context.
        CompensatedSum s;
        for (std::size_t j = 0; j < p_.m.size(); ++j) {
            if (p_.m[j] >= k) { s.add(p_.lambda[j] / static_cast<double>(p_.m[j])); }
        }
        return 2.0 * (1.0 - 2.0 * p_.psi.epsilon) * s.value();
    }

    std::optional<double> oscillation_upper_bound(std::int64_t k) const override
    {
        if (k > p_.m.back()) { return 0.0; }
        CompensatedSum s;
        for (std::size_t j = 0; j < p_.m.size(); ++j) {
            if (p_.m[j] >= k) {
                s.add(p_.lambda[j] * p_.psi.max_increment_per_flip(p_.m[j]));
            }
        }
        return 2.0 * s.value();
    }

    std::optional<double> oscillation_tail_bound(std::int64_t k_max) const override
    {
        CompensatedSum s;
        for (std::size_t j = 0; j < p_.m.size(); ++j) {
            const std::int64_t extra = std::max<std::int64_t>(0, p_.m[j] - k_max);
            if (extra > 0) {
                s.add(p_.lambda[j] * p_.psi.max_increment_per_flip(p_.m[j])
                      * static_cast<double>(extra));
            }
        }
        return 2.0 * s.value();
    }

    std::optional<double> variation_upper_bound(std::int64_t k) const override
    {
        const double   jump = 1.0 - 2.0 * p_.psi.epsilon;
        CompensatedSum s;
        for (std::size_t j = 0; j < p_.m.size(); ++j) {
            if (p_.m[j] <= k) { continue; }
            double contrib = jump;
            if (p_.psi.kind != PsiSpec::Kind::step) {
                const double mean_gap = 2.0 * static_cast<double>(p_.m[j] - k)
                                        / static_cast<double>(p_.m[j]);
                contrib = std::min(jump, p_.psi.max_slope() * mean_gap);
            }
            s.add(p_.lambda[j] * contrib);
        }
        return s.value();
    }

    std::optional<Ell2Certificate> ell2_certificate(std::int64_t k_max) const override
    {
        // var_k vanishes beyond m_J and var_k <= (1-2eps) Lambda(k) with
        // Lambda(k) = sum of weights of blocks longer than k, piecewise
        // constant between block sizes: the remainder has an O(J) form.
        const double    jump = 1.0 - 2.0 * p_.psi.epsilon;
        Ell2Certificate cert;
        CompensatedSum  rem;
        double          tail   = 1.0;
        std::int64_t    prev_m = 0;
        for (std::size_t j = 0; j < p_.m.size(); ++j) {
            const std::int64_t lo = std::max(k_max + 1, prev_m);
            const std::int64_t hi = p_.m[j]; // segment [lo, hi): Lambda = tail
            if (hi > lo) {
                const double v = jump * tail;
                rem.add(static_cast<double>(hi - lo) * v * v);
            }
            tail -= p_.lambda[j];
            prev_m = p_.m[j];
        }
        cert.remainder = rem.value();
        cert.text      = "finite mixture: var_k = 0 for k >= m_J";
        return cert;
    }

    double memory_scale() const override { return static_cast<double>(p_.m.back()); }

    std::string schema_json() const override { return canonical_json(p_); }

    const BkfParams& params() const noexcept { return p_; }

  private:
    BkfParams p_;
};

// ---------------------------------------------------------------------------
// AR kernel
// ---------------------------------------------------------------------------

/// Field dot product over the generated symbols. The pragma licenses SIMD
/// reassociation for this loop alone (the result is still deterministic for
/// a fixed binary); compensated accumulation elsewhere keeps strict order.
inline double shifted_dot(const double* w, const double* br, std::int64_t t)
{
    double acc = 0.0;
#pragma omp simd reduction(+ : acc)
    for (std::int64_t i = 0; i < t; ++i) { acc += w[i] * br[i]; }
    return acc;
}

/// beta_rev[cap - n] = beta_n for n = 1..cap.
std::vector<double> ar_beta_rev(const ArParams& p, std::int64_t cap)
{
    std::vector<double> out(static_cast<std::size_t>(cap), 0.0);
    for (std::int64_t n = 1; n <= cap; ++n) {
        out[static_cast<std::size_t>(cap - n)] = p.beta.at(n);
    }
    return out;
}

/// Base-past field schedule B(t) = sum_{m>=1} beta_{t+m} x_{-m}, t = 0..cap.
/// The explicit suffix is summed directly; beyond it the past is periodic
/// and the lag sums are arithmetic-progression power sums computed by
/// backward recursion from certified top values.
std::vector<double> ar_base_field(const ArParams& params, const Past& base,
                                  std::int64_t cap)
{
    const auto L = base.suffix_length();
    const auto p = base.tail_period();

    const std::int64_t  top = cap + L + p;
    std::vector<double> r(static_cast<std::size_t>(top + p + 1), 0.0);
    for (std::int64_t u = top + p; u > top; --u) {
        r[static_cast<std::size_t>(u)] = params.beta.progression_sum(u, p);
    }
    for (std::int64_t u = top; u >= 1; --u) {
        r[static_cast<std::size_t>(u)] =
            params.beta.at(u) + r[static_cast<std::size_t>(u + p)];
    }

    std::vector<double> suffix_embed;
    suffix_embed.reserve(static_cast<std::size_t>(L));
    for (int s : base.suffix()) { suffix_embed.push_back(s == 1 ? 1.0 : -1.0); }
    std::vector<double> tail_embed;
    tail_embed.reserve(static_cast<std::size_t>(p));
    for (int s : base.tail()) { tail_embed.push_back(s == 1 ? 1.0 : -1.0); }

    std::vector<double> field(static_cast<std::size_t>(cap) + 1, 0.0);
    for (std::int64_t t = 0; t <= cap; ++t) {
        CompensatedSum b;
        for (std::int64_t m = 1; m <= L; ++m) {
            b.add(params.beta.at(t + m) * suffix_embed[static_cast<std::size_t>(m - 1)]);
        }
        for (std::int64_t j = 0; j < p; ++j) {
            b.add(tail_embed[static_cast<std::size_t>(j)]
                  * r[static_cast<std::size_t>(t + L + 1 + j)]);
        }
        field[static_cast<std::size_t>(t)] = b.value();
    }
    return field;
}

class ArStepper final : public KernelStepper {
  public:
    ArStepper(const ArParams& p, const Past& base, std::int64_t depth_hint)
        : p_(&p), base_(base)
    {
        ensure_capacity(std::max<std::int64_t>(depth_hint, 16));
    }

    void push(int symbol) override
    {
        omega_.push_back(symbol == 1 ? 1.0 : -1.0);
        if (static_cast<std::int64_t>(omega_.size()) > cap_) {
            ensure_capacity(2 * cap_);
        }
    }

    void pop() override
    {
        if (omega_.empty()) { throw std::logic_error("ArStepper::pop on empty history"); }
        omega_.pop_back();
    }

    void dist(std::span<double> out) const override
    {
        const auto    t  = static_cast<std::int64_t>(omega_.size());
        const double* w  = omega_.data();
        const double* br = beta_rev_.data() + (cap_ - t);
        const double field =
            shifted_dot(w, br, t) + base_field_[static_cast<std::size_t>(t)] + p_->delta;
        out[0]             = p_->phi(-field);
        out[1]             = p_->phi(field);
    }

    std::int64_t depth() const noexcept override
    {
        return static_cast<std::int64_t>(omega_.size());
    }

  private:
    const ArParams*     p_;
    Past                base_;
    std::int64_t        cap_ = 0;
    std::vector<double> omega_;      // embedded generated symbols, time order
    std::vector<double> beta_rev_;
    std::vector<double> base_field_;

    void ensure_capacity(std::int64_t cap)
    {
        cap_        = cap;
        beta_rev_   = ar_beta_rev(*p_, cap_);
        base_field_ = ar_base_field(*p_, base_, cap_);
    }
};

/// Shared-symbol pair of autoregressive histories: one field dot product
/// serves both conditionals; only the base-past schedules differ.
class ArPairStepper final : public KernelPairStepper {
  public:
    ArPairStepper(const ArParams& p, const Past& base_x, const Past& base_y,
                  std::int64_t depth_hint)
        : p_(&p), base_x_(base_x), base_y_(base_y)
    {
        ensure_capacity(std::max<std::int64_t>(depth_hint, 16));
    }

    void push(int symbol) override
    {
        omega_.push_back(symbol == 1 ? 1.0 : -1.0);
        if (static_cast<std::int64_t>(omega_.size()) > cap_) {
            ensure_capacity(2 * cap_);
        }
    }

    void pop() override
    {
        if (omega_.empty()) {
            throw std::logic_error("ArPairStepper::pop on empty history");
        }
        omega_.pop_back();
    }

    void dists(std::span<double> out_x, std::span<double> out_y) const override
    {
        const auto    t   = static_cast<std::int64_t>(omega_.size());
        const double* w   = omega_.data();
        const double* br  = beta_rev_.data() + (cap_ - t);
        const double  acc = shifted_dot(w, br, t);
        const double fx = acc + field_x_[static_cast<std::size_t>(t)] + p_->delta;
        const double fy = acc + field_y_[static_cast<std::size_t>(t)] + p_->delta;
        out_x[0]        = p_->phi(-fx);
        out_x[1]        = p_->phi(fx);
        out_y[0]        = p_->phi(-fy);
        out_y[1]        = p_->phi(fy);
    }

    std::int64_t depth() const noexcept override
    {
        return static_cast<std::int64_t>(omega_.size());
    }

  private:
    const ArParams*     p_;
    Past                base_x_;
    Past                base_y_;
    std::int64_t        cap_ = 0;
    std::vector<double> omega_;
    std::vector<double> beta_rev_;
    std::vector<double> field_x_;
    std::vector<double> field_y_;

    void ensure_capacity(std::int64_t cap)
    {
        cap_      = cap;
        beta_rev_ = ar_beta_rev(*p_, cap_);
        field_x_  = ar_base_field(*p_, base_x_, cap_);
        field_y_  = ar_base_field(*p_, base_y_, cap_);
    }
};

class ArKernel final : public Kernel {
  public:
    explicit ArKernel(ArParams params) : p_(std::move(params))
    {
        p_.validate();
        radius_         = p_.field_radius();
        gamma_          = p_.phi(-radius_);
        total_abs_      = p_.beta.abs_tail_sum(0);
        dense_interval_ = compute_dense_interval();
    }

    const Alphabet& alphabet() const noexcept override { return Alphabet::spin(); }
    double non_null_bound() const noexcept override { return gamma_; }

    double eval(int symbol, const Past& past) const override
    {
        if (symbol < 0 || symbol > 1) {
            throw std::invalid_argument("ArKernel: binary alphabet required");
        }
        require_spin_history(past);
        const double sign = symbol == 1 ? 1.0 : -1.0;
        return p_.phi(sign * (field(past) + p_.delta));
    }

    std::unique_ptr<KernelStepper> stepper(const Past& base,
                                           std::int64_t depth_hint) const override
    {
        require_spin_history(base);
        return std::make_unique<ArStepper>(p_, base, depth_hint);
    }

    std::unique_ptr<KernelPairStepper> pair_stepper(const Past& base_x,
                                                    const Past& base_y,
                                                    std::int64_t depth_hint) const override
    {
        require_spin_history(base_x);
        require_spin_history(base_y);
        return std::make_unique<ArPairStepper>(p_, base_x, base_y, depth_hint);
    }

    bool attractive() const noexcept override { return p_.attractive(); }

    std::optional<std::int64_t> memory_order() const override
    {
        if (auto s = p_.beta.finite_support(); s.has_value()) { return *s; }
        return std::nullopt;
    }

    std::optional<double> closed_form_oscillation(std::int64_t k) const override
    {
        const double bk = std::abs(p_.beta.at(k));
        if (bk == 0.0) { return 0.0; }
        // Exact when the residual field reaches zero: the flip supremum is
        // attained at a balanced context.
        if (!dense_interval_ || std::abs(p_.delta) > total_abs_ - bk) {
            return std::nullopt;
        }
        return 2.0 * (p_.phi(bk) - p_.phi(-bk));
    }

    std::optional<double> oscillation_upper_bound(std::int64_t k) const override
    {
        const double bk = std::abs(p_.beta.at(k));
        if (bk == 0.0) { return 0.0; }
        if (p_.phi.kind == PhiSpec::Kind::logit) {
            // phi(R+b) - phi(R-b) is maximized at R = 0 for the logit link.
            return 2.0 * (p_.phi(bk) - p_.phi(-bk));
        }
        return 2.0 * std::min(1.0 - 2.0 * gamma_, 2.0 * p_.phi.max_slope() * bk);
    }

    std::optional<double> oscillation_tail_bound(std::int64_t k_max) const override
    {
        return 4.0 * p_.phi.max_slope() * p_.beta.abs_tail_sum(k_max);
    }

    std::optional<double> variation_upper_bound(std::int64_t k) const override
    {
        return 2.0 * p_.phi.max_slope() * p_.beta.abs_tail_sum(k);
    }

    std::optional<Ell2Certificate> ell2_certificate(std::int64_t k_max) const override
    {
        Ell2Certificate cert;
        if (auto support = p_.beta.finite_support(); support.has_value()) {
            CompensatedSum rem;
            for (std::int64_t k = k_max + 1; k < *support; ++k) {
                const double ub = *variation_upper_bound(k);
                rem.add(ub * ub);
            }
            cert.remainder = rem.value();
            cert.text      = "finite beta support";
            return cert;
        }
        const auto&  tail = *p_.beta.tail();
        const double eps  = tail.exponent - 1.0; // beta_n = c n^-(1+eps)
        const double L    = p_.phi.max_slope();
        const double c    = std::abs(tail.c);
        if (2.0 * eps > 1.0) {
            // var_n <= 2 L T_n and T_n <= (c/eps) n^-eps beyond the prefix;
            // integral test on the square.
            const std::int64_t n0 =
                std::max<std::int64_t>(k_max, std::max<std::int64_t>(
                                                  tail.start,
                                                  static_cast<std::int64_t>(p_.beta.prefix().size()) + 1));
            CompensatedSum bridge;
            for (std::int64_t k = k_max + 1; k <= n0; ++k) {
                const double ub = *variation_upper_bound(k);
                bridge.add(ub * ub);
            }
            const double amp = 2.0 * L * c / eps;
            const double rem = amp * amp / (2.0 * eps - 1.0)
                               * std::pow(static_cast<double>(n0), 1.0 - 2.0 * eps);
            cert.remainder = bridge.value() + rem;
            cert.text      = "integral-test remainder on (2 L sum_{n>k} beta_n)^2";
            return cert;
        }
        const double lo = p_.phi.min_slope_on(radius_);
        if (p_.attractive() && lo > 0.0) {
            cert.divergent = true;
            cert.text = "var_k >= 2 l sum_{n>k} beta_n with power-law tail, 2 eps <= 1: "
                        "integral lower bound diverges";
            return cert;
        }
        return std::nullopt;
    }

    double memory_scale() const override
    {
        const std::int64_t cap = 1000000;
        return static_cast<double>(p_.beta.decay_index(1e-6, cap));
    }

    std::string schema_json() const override { return canonical_json(p_); }

    const ArParams& params() const noexcept { return p_; }
    double          field_radius() const noexcept { return radius_; }

    double field(const Past& past) const
    {
        const auto L  = past.suffix_length();
        const auto p  = past.tail_period();
        const auto P  = static_cast<std::int64_t>(p_.beta.prefix().size());
        const auto K0 = std::max(L, P);
        CompensatedSum s;
        for (std::int64_t n = 1; n <= K0; ++n) {
            s.add(p_.beta.at(n) * (past.lookup(n) == 1 ? 1.0 : -1.0));
        }
        // Beyond K0 the past is purely periodic and beta is pure tail.
        for (std::int64_t j = 0; j < p; ++j) {
            const std::int64_t lag = K0 + 1 + j;
            const double       x   = past.lookup(lag) == 1 ? 1.0 : -1.0;
            s.add(x * p_.beta.progression_sum(lag, p));
        }
        return s.value();
    }

  private:
    ArParams p_;
    double   radius_         = 0.0;
    double   gamma_          = 0.0;
    double   total_abs_      = 0.0;
    bool     dense_interval_ = false;

    /// The achievable values of sum_n beta_n x_{-n} fill an interval when
    /// every coefficient is dominated by the sum of the later ones. Checked
    /// numerically through the prefix and analytically in the power-law tail.
    bool compute_dense_interval() const
    {
        if (!p_.beta.all_nonnegative()) { return false; }
        if (!p_.beta.tail().has_value() || p_.beta.tail()->c <= 0.0) { return false; }
        const auto P     = static_cast<std::int64_t>(p_.beta.prefix().size());
        const auto check = P + 64;
        for (std::int64_t n = 1; n <= check; ++n) {
            if (p_.beta.at(n) > p_.beta.abs_tail_sum(n) + 1e-15) { return false; }
        }
        // Pure power-law region beyond: T_n / beta_n >= n 2^{1-s} / (s-1),
        // increasing in n.
        const double s = p_.beta.tail()->exponent;
        return static_cast<double>(check) * std::pow(2.0, 1.0 - s) / (s - 1.0) >= 1.0;
    }
};

// ---------------------------------------------------------------------------
// Renewal kernel
// ---------------------------------------------------------------------------

/// Distance state: r >= 0 is the paper's renewal index; -1 encodes an all -1
/// history (q_inf applies).
class RenewalStepper final : public KernelStepper {
  public:
    RenewalStepper(const RenewalParams& p, const Past& base) : p_(&p)
    {
        r_stack_.push_back(base_renewal_index(base));
    }

    void push(int symbol) override
    {
        const std::int64_t r = r_stack_.back();
        if (symbol == 1) { r_stack_.push_back(0); }
        else { r_stack_.push_back(r < 0 ? -1 : r + 1); }
    }

    void pop() override
    {
        if (r_stack_.size() <= 1) {
            throw std::logic_error("RenewalStepper::pop on empty history");
        }
        r_stack_.pop_back();
    }

    void dist(std::span<double> out) const override
    {
        const std::int64_t r  = r_stack_.back();
        const double       qp = r < 0 ? p_->q_inf : p_->q(r);
        out[0]                = 1.0 - qp;
        out[1]                = qp;
    }

    std::int64_t depth() const noexcept override
    {
        return static_cast<std::int64_t>(r_stack_.size()) - 1;
    }

    static std::int64_t base_renewal_index(const Past& base)
    {
        const auto L = base.suffix_length();
        for (std::int64_t k = 1; k <= L; ++k) {
            if (base.lookup(k) == 1) { return k - 1; }
        }
        const auto p = base.tail_period();
        for (std::int64_t k = L + 1; k <= L + p; ++k) {
            if (base.lookup(k) == 1) { return k - 1; }
        }
        return -1;
    }

  private:
    const RenewalParams*      p_;
    std::vector<std::int64_t> r_stack_;
};

class RenewalKernel final : public Kernel {
  public:
    explicit RenewalKernel(RenewalParams params) : p_(std::move(params))
    {
        p_.validate();
        gamma_ = std::min(p_.q_inf, 1.0 - p_.q(0));
    }

    const Alphabet& alphabet() const noexcept override { return Alphabet::spin(); }
    double non_null_bound() const noexcept override { return gamma_; }

    double eval(int symbol, const Past& past) const override
    {
        if (symbol < 0 || symbol > 1) {
            throw std::invalid_argument("RenewalKernel: binary alphabet required");
        }
        require_spin_history(past);
        const std::int64_t r  = RenewalStepper::base_renewal_index(past);
        const double       qp = r < 0 ? p_.q_inf : p_.q(r);
        return symbol == 1 ? qp : 1.0 - qp;
    }

    std::unique_ptr<KernelStepper> stepper(const Past& base, std::int64_t) const override
    {
        require_spin_history(base);
        return std::make_unique<RenewalStepper>(p_, base);
    }

    bool attractive() const noexcept override { return true; }

    std::optional<std::int64_t> memory_order() const override
    {
        if (p_.tail_kind == RenewalParams::TailKind::constant || p_.a == 0.0) {
            return static_cast<std::int64_t>(p_.q_prefix.size());
        }
        return std::nullopt;
    }

    std::optional<double> closed_form_variation(std::int64_t k) const override
    {
        return p_.q(k) - p_.q_inf;
    }

    std::optional<double> closed_form_oscillation(std::int64_t k) const override
    {
        // Flip at lag k with nothing more recent: r moves between k-1 and the
        // next renewal beyond, whose q approaches q_inf.
        return 2.0 * (p_.q(k - 1) - p_.q_inf);
    }

    std::optional<double> oscillation_tail_bound(std::int64_t k_max) const override
    {
        // sum_{k > k_max} 2 (q(k-1) - q_inf)
        const auto P = static_cast<std::int64_t>(p_.q_prefix.size());
        CompensatedSum s;
        for (std::int64_t k = k_max + 1; k <= P; ++k) { s.add(p_.q(k - 1) - p_.q_inf); }
        const std::int64_t from = std::max(k_max, P);
        switch (p_.tail_kind) {
        case RenewalParams::TailKind::constant: break;
        case RenewalParams::TailKind::power: {
            if (p_.theta <= 1.0) { return std::nullopt; }
            // sum_{k > from} a (k+1)^-theta
            s.add(p_.a
                  * arithmetic_power_tail(static_cast<double>(from) + 2.0, 1.0, p_.theta));
            break;
        }
        case RenewalParams::TailKind::geometric:
            s.add(p_.a * std::pow(p_.rho, static_cast<double>(from) + 1.0) / (1.0 - p_.rho));
            break;
        }
        return 2.0 * s.value();
    }

    std::optional<double> variation_upper_bound(std::int64_t k) const override
    {
        return p_.q(k) - p_.q_inf;
    }

    std::optional<Ell2Certificate> ell2_certificate(std::int64_t k_max) const override
    {
        Ell2Certificate cert;
        switch (p_.tail_kind) {
        case RenewalParams::TailKind::constant: cert.remainder = 0.0; break;
        case RenewalParams::TailKind::power: {
            if (2.0 * p_.theta <= 1.0) {
                cert.divergent = true;
                cert.text      = "var_k^2 = a^2 (k+1)^-2 theta with 2 theta <= 1";
                return cert;
            }
            const std::int64_t from =
                std::max(k_max, static_cast<std::int64_t>(p_.q_prefix.size()));
            CompensatedSum bridge;
            for (std::int64_t k = k_max + 1; k <= from; ++k) {
                const double v = p_.q(k) - p_.q_inf;
                bridge.add(v * v);
            }
            bridge.add(p_.a * p_.a
                       * arithmetic_power_tail(static_cast<double>(from) + 2.0, 1.0,
                                               2.0 * p_.theta));
            cert.remainder = bridge.value();
            break;
        }
        case RenewalParams::TailKind::geometric: {
            const std::int64_t from =
                std::max(k_max, static_cast<std::int64_t>(p_.q_prefix.size()));
            CompensatedSum bridge;
            for (std::int64_t k = k_max + 1; k <= from; ++k) {
                const double v = p_.q(k) - p_.q_inf;
                bridge.add(v * v);
            }
            const double r2 = p_.rho * p_.rho;
            bridge.add(p_.a * p_.a * std::pow(r2, static_cast<double>(from) + 1.0)
                       / (1.0 - r2));
            cert.remainder = bridge.value();
            break;
        }
        }
        cert.text = cert.text.empty() ? "closed-form var_k = q_k - q_inf" : cert.text;
        return cert;
    }

    double memory_scale() const override
    {
        const std::int64_t cap = 1000000;
        std::int64_t       lo = 0, hi = cap;
        if (p_.q(cap) - p_.q_inf > 1e-6) { return static_cast<double>(cap); }
        while (lo + 1 < hi) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (p_.q(mid) - p_.q_inf <= 1e-6) { hi = mid; }
            else { lo = mid; }
        }
        return static_cast<double>(hi);
    }

    std::string schema_json() const override { return canonical_json(p_); }

    const RenewalParams& params() const noexcept { return p_; }

  private:
    RenewalParams p_;
    double        gamma_ = 0.0;
};

// ---------------------------------------------------------------------------
// Finite-memory kernel
// ---------------------------------------------------------------------------

class FiniteMemoryStepper final : public KernelStepper {
  public:
    FiniteMemoryStepper(const FiniteMemoryParams& p, const Past& base) : p_(&p)
    {
        ctx_stack_.push_back(p_->context_index(base));
    }

    void push(int symbol) override
    {
        const auto B = static_cast<std::int64_t>(p_->alphabet.size());
        if (p_->order == 0) {
            ctx_stack_.push_back(0);
            return;
        }
        std::int64_t high = 1;
        for (int i = 1; i < p_->order; ++i) { high *= B; }
        const std::int64_t ctx = ctx_stack_.back();
        ctx_stack_.push_back(symbol * high + ctx / B);
    }

    void pop() override
    {
        if (ctx_stack_.size() <= 1) {
            throw std::logic_error("FiniteMemoryStepper::pop on empty history");
        }
        ctx_stack_.pop_back();
    }

    void dist(std::span<double> out) const override
    {
        const auto B   = static_cast<std::size_t>(p_->alphabet.size());
        const auto row = static_cast<std::size_t>(ctx_stack_.back());
        for (std::size_t a = 0; a < B; ++a) { out[a] = p_->table[row * B + a]; }
    }

    std::int64_t depth() const noexcept override
    {
        return static_cast<std::int64_t>(ctx_stack_.size()) - 1;
    }

  private:
    const FiniteMemoryParams* p_;
    std::vector<std::int64_t> ctx_stack_;
};

class FiniteMemoryKernel final : public Kernel {
  public:
    explicit FiniteMemoryKernel(FiniteMemoryParams params) : p_(std::move(params))
    {
        p_.validate();
        gamma_ = *std::min_element(p_.table.begin(), p_.table.end());
    }

    const Alphabet& alphabet() const noexcept override { return p_.alphabet; }
    double non_null_bound() const noexcept override { return gamma_; }

    double eval(int symbol, const Past& past) const override
    {
        if (symbol < 0 || symbol >= p_.alphabet.size()) {
            throw std::invalid_argument("FiniteMemoryKernel: symbol out of range");
        }
        if (past.max_symbol() >= p_.alphabet.size()) {
            throw std::invalid_argument("FiniteMemoryKernel: past symbol out of range");
        }
        const auto B   = static_cast<std::size_t>(p_.alphabet.size());
        const auto row = static_cast<std::size_t>(p_.context_index(past));
        return p_.table[row * B + static_cast<std::size_t>(symbol)];
    }

    std::unique_ptr<KernelStepper> stepper(const Past& base, std::int64_t) const override
    {
        return std::make_unique<FiniteMemoryStepper>(p_, base);
    }

    std::optional<std::int64_t> memory_order() const override { return p_.order; }

    std::optional<double> closed_form_variation(std::int64_t k) const override
    {
        if (k >= p_.order) { return 0.0; }
        return std::nullopt;
    }

    std::optional<double> closed_form_oscillation(std::int64_t k) const override
    {
        if (k > p_.order) { return 0.0; }
        return std::nullopt;
    }

    std::optional<double> oscillation_upper_bound(std::int64_t k) const override
    {
        if (k > p_.order) { return 0.0; }
        // Per-symbol column spread over rows bounds any single-flip change.
        const auto     B = static_cast<std::size_t>(p_.alphabet.size());
        CompensatedSum s;
        for (std::size_t a = 0; a < B; ++a) {
            double lo = 1.0, hi = 0.0;
            for (std::size_t r = 0; r < p_.row_count(); ++r) {
                lo = std::min(lo, p_.table[r * B + a]);
                hi = std::max(hi, p_.table[r * B + a]);
            }
            s.add(hi - lo);
        }
        return s.value();
    }

    std::optional<double> oscillation_tail_bound(std::int64_t k_max) const override
    {
        if (k_max >= p_.order) { return 0.0; }
        return std::nullopt;
    }

    std::optional<double> variation_upper_bound(std::int64_t k) const override
    {
        if (k >= p_.order) { return 0.0; }
        return 1.0 - 2.0 * gamma_;
    }

    std::optional<Ell2Certificate> ell2_certificate(std::int64_t k_max) const override
    {
        Ell2Certificate cert;
        double          rem = 0.0;
        for (std::int64_t k = k_max + 1; k < p_.order; ++k) {
            const double ub = 1.0 - 2.0 * gamma_;
            rem += ub * ub;
        }
        cert.remainder = rem;
        cert.text      = "finite memory";
        return cert;
    }

    double memory_scale() const override
    {
        return static_cast<double>(std::max(p_.order, 1));
    }

    std::string schema_json() const override { return canonical_json(p_); }

    const FiniteMemoryParams& params() const noexcept { return p_; }

  private:
    FiniteMemoryParams p_;
    double             gamma_ = 0.0;
};

} // namespace

// ---------------------------------------------------------------------------
// Factories and parameter access
// ---------------------------------------------------------------------------

std::shared_ptr<const Kernel> make_bkf_kernel(BkfParams params)
{
    return std::make_shared<BkfKernel>(std::move(params));
}

std::shared_ptr<const Kernel> make_ar_kernel(ArParams params)
{
    return std::make_shared<ArKernel>(std::move(params));
}

std::shared_ptr<const Kernel> make_renewal_kernel(RenewalParams params)
{
    return std::make_shared<RenewalKernel>(std::move(params));
}

std::shared_ptr<const Kernel> make_finite_memory_kernel(FiniteMemoryParams params)
{
    return std::make_shared<FiniteMemoryKernel>(std::move(params));
}

std::shared_ptr<const Kernel> make_iid_kernel(std::vector<double> probs, Alphabet alphabet)
{
    FiniteMemoryParams p;
    p.order    = 0;
    p.alphabet = std::move(alphabet);
    p.table    = std::move(probs);
    return make_finite_memory_kernel(std::move(p));
}

const BkfParams* bkf_params(const Kernel& k)
{
    const auto* b = dynamic_cast<const BkfKernel*>(&k);
    return b != nullptr ? &b->params() : nullptr;
}

const ArParams* ar_params(const Kernel& k)
{
    const auto* a = dynamic_cast<const ArKernel*>(&k);
    return a != nullptr ? &a->params() : nullptr;
}

const RenewalParams* renewal_params(const Kernel& k)
{
    const auto* r = dynamic_cast<const RenewalKernel*>(&k);
    return r != nullptr ? &r->params() : nullptr;
}

const FiniteMemoryParams* finite_memory_params(const Kernel& k)
{
    const auto* f = dynamic_cast<const FiniteMemoryKernel*>(&k);
    return f != nullptr ? &f->params() : nullptr;
}

// ---------------------------------------------------------------------------
// Bound series
// ---------------------------------------------------------------------------

namespace {

/// Verdict for a finite run of nonnegative terms from their geometric trend.
/// A max term ratio < 1 over the whole range yields a geometric remainder
/// bound (truncation only speeds the collapse, so the bound stays valid). A
/// min ratio > 1 over the LEADING half certifies the divergence trend of the
/// parametric family; the trailing blocks are excluded because truncating
/// the mixture collapses its last tail sums regardless of the trend.
SeriesClassification classify_term_trend(const std::vector<double>& horizons,
                                         const std::vector<double>& terms,
                                         const std::vector<double>& sums,
                                         const SeriesPolicy&        policy)
{
    const std::size_t n_ratios = terms.size() >= 2 ? terms.size() - 1 : 0;
    const std::size_t half     = std::max<std::size_t>(n_ratios / 2, std::min<std::size_t>(n_ratios, 2));
    double min_lead_ratio = std::numeric_limits<double>::infinity();
    double max_ratio      = 0.0;
    bool   has_ratio      = false;
    for (std::size_t i = 1; i < terms.size(); ++i) {
        if (!(terms[i - 1] > 0.0) || !(terms[i] > 0.0)) { continue; }
        const double r = terms[i] / terms[i - 1];
        max_ratio      = std::max(max_ratio, r);
        if (i <= half) { min_lead_ratio = std::min(min_lead_ratio, r); }
        has_ratio = true;
    }
    std::optional<double> tail_bound;
    bool                  divergent = false;
    std::string           text;
    char                  buf[200];
    if (has_ratio && max_ratio < 1.0) {
        tail_bound = terms.back() * max_ratio / (1.0 - max_ratio);
        std::snprintf(buf, sizeof buf,
                      "terms decay geometrically (max ratio %.6g); geometric remainder bound",
                      max_ratio);
        text = buf;
    }
    else if (has_ratio && min_lead_ratio > 1.0) {
        divergent = true;
        std::snprintf(buf, sizeof buf,
                      "terms grow geometrically (min ratio %.6g over the leading %zu "
                      "blocks; truncation collapses the trailing tail sums)",
                      min_lead_ratio, half);
        text = buf;
    }
    return classify_series(horizons, sums, policy, tail_bound, divergent, std::move(text));
}

} // namespace

L2BoundSeries bkf_l2_bound_series(const BkfParams& params, std::int64_t n_max,
                                  const SeriesPolicy& policy)
{
    params.validate();
    if (n_max < 1) { throw std::invalid_argument("bkf_l2_bound_series: n_max >= 1"); }
    if (!params.lacunary()) {
        throw std::invalid_argument(
            "bkf_l2_bound_series: lower bound requires a lacunary block sequence");
    }
    const auto J     = static_cast<std::int64_t>(params.m.size());
    const auto n_top = std::min(n_max, J);

    // Raw terms m_n (sum_{k>=n} lambda_k)^2.
    std::vector<double> lambda_tail(static_cast<std::size_t>(J) + 1, 0.0);
    for (std::int64_t j = J - 1; j >= 0; --j) {
        lambda_tail[static_cast<std::size_t>(j)] =
            lambda_tail[static_cast<std::size_t>(j + 1)] + params.lambda[static_cast<std::size_t>(j)];
    }
    const double dpsi  = params.psi(params.r0) - params.psi(-params.r0);
    const double lower_pref = (1.0 - params.r0) / 4.0 * dpsi * dpsi;
    const double upper_pref =
        (1.0 - params.psi.epsilon) * (1.0 - params.psi.epsilon);

    std::vector<double> h_lo, t_lo, s_lo, h_up, t_up, s_up;
    CompensatedSum      acc_lo, acc_up;
    for (std::int64_t n = 1; n <= n_top; ++n) {
        const double tail = lambda_tail[static_cast<std::size_t>(n - 1)];
        const double raw  = static_cast<double>(params.m[static_cast<std::size_t>(n - 1)])
                           * tail * tail;
        acc_up.add(upper_pref * raw);
        h_up.push_back(static_cast<double>(n));
        t_up.push_back(upper_pref * raw);
        s_up.push_back(acc_up.value());
        if (n >= 2) {
            acc_lo.add(lower_pref * raw);
            h_lo.push_back(static_cast<double>(n));
            t_lo.push_back(lower_pref * raw);
            s_lo.push_back(acc_lo.value());
        }
    }

    L2BoundSeries out;
    out.lower_prefactor = lower_pref;
    out.upper_prefactor = upper_pref;
    out.lower           = classify_term_trend(h_lo, t_lo, s_lo, policy);
    out.upper           = classify_term_trend(h_up, t_up, s_up, policy);
    if (n_max >= J) {
        // Truncated families have no terms beyond J; series not already
        // classified as divergent trends are exactly summable.
        const auto settle = [](SeriesClassification& s) {
            if (s.certified_divergent || s.verdict == Verdict::divergent) { return; }
            if (!s.analytic_tail_bound.has_value()) { s.analytic_tail_bound = 0.0; }
            s.certified = true;
            if (s.verdict == Verdict::inconclusive) { s.verdict = Verdict::convergent; }
        };
        settle(out.lower);
        settle(out.upper);
    }
    return out;
}

L2BoundSeries ar_l2_bound_series(const ArParams& params, std::int64_t n_max,
                                 const SeriesPolicy& policy)
{
    params.validate();
    if (n_max < 1) { throw std::invalid_argument("ar_l2_bound_series: n_max >= 1"); }

    const double gamma = params.bi_lipschitz_gamma();
    const double lower_pref = 1.0 / (gamma * gamma);
    const double upper_pref = gamma * gamma;

    std::vector<double> horizons, terms, sums_lo, sums_up;
    CompensatedSum      acc;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const double t = params.beta.tail_sum(n);
        acc.add(t * t);
        horizons.push_back(static_cast<double>(n));
        terms.push_back(t * t);
        sums_lo.push_back(lower_pref * acc.value());
        sums_up.push_back(upper_pref * acc.value());
    }

    std::optional<double> upper_tail;
    bool                  lower_divergent = false;
    std::string           text_lo, text_up;
    if (auto support = params.beta.finite_support(); support.has_value()) {
        // Finitely many nonzero terms beyond n_max.
        CompensatedSum rem;
        for (std::int64_t n = n_max + 1; n < *support; ++n) {
            const double t = params.beta.tail_sum(n);
            rem.add(t * t);
        }
        upper_tail = upper_pref * rem.value();
        text_up    = "finite beta support";
        text_lo    = "finite beta support: series terminates";
    }
    else {
        const auto&  tail = *params.beta.tail();
        const double eps  = tail.exponent - 1.0;
        const double c    = std::abs(tail.c);
        const auto   n0   = std::max(
            n_max, std::max(tail.start,
                              static_cast<std::int64_t>(params.beta.prefix().size()) + 1));
        char buf[160];
        if (2.0 * eps > 1.0) {
            CompensatedSum bridge;
            for (std::int64_t n = n_max + 1; n <= n0; ++n) {
                const double t = params.beta.abs_tail_sum(n);
                bridge.add(t * t);
            }
            const double amp = c / eps;
            bridge.add(amp * amp / (2.0 * eps - 1.0)
                       * std::pow(static_cast<double>(n0), 1.0 - 2.0 * eps));
            upper_tail = upper_pref * bridge.value();
            std::snprintf(buf, sizeof buf,
                          "integral test: tail_n^2 <= (c/eps)^2 n^{-2 eps}, 2 eps = %.3g > 1",
                          2.0 * eps);
            text_up = buf;
        }
        else {
            lower_divergent = true;
            std::snprintf(buf, sizeof buf,
                          "integral test: tail_n >= (c/eps)(n+1)^{-eps}, 2 eps = %.3g <= 1",
                          2.0 * eps);
            text_lo = buf;
        }
    }

    // Both series share the raw sum of squared beta tails, so a certificate
    // for one transfers to the other up to the prefactor.
    std::optional<double> lower_tail;
    if (upper_tail.has_value()) {
        lower_tail = *upper_tail * lower_pref / upper_pref;
        if (text_lo.empty()) { text_lo = text_up; }
    }
    L2BoundSeries out;
    out.lower_prefactor = lower_pref;
    out.upper_prefactor = upper_pref;
    out.lower = classify_series(horizons, sums_lo, policy, lower_tail, lower_divergent,
                                text_lo);
    out.upper = classify_series(horizons, sums_up, policy, upper_tail, lower_divergent,
                                text_up.empty() ? text_lo : text_up);
    return out;
}

} // namespace gchain
