#include "gchain/kernel.hpp"

#include <stdexcept>
#include <vector>

namespace gchain {

namespace {

/// Fallback stepper: materializes the history as a Past on every dist() call.
class GenericStepper final : public KernelStepper {
  public:
    GenericStepper(const Kernel& kernel, Past base)
        : kernel_(kernel), base_(std::move(base))
    {
    }

    void push(int symbol) override { generated_.push_back(symbol); }

    void pop() override
    {
        if (generated_.empty()) { throw std::logic_error("KernelStepper::pop on empty history"); }
        generated_.pop_back();
    }

    void dist(std::span<double> out) const override
    {
        std::vector<int> recent(generated_.rbegin(), generated_.rend());
        const Past history = base_.with_prefix(recent);
        kernel_.eval_all(history, out);
    }

    std::int64_t depth() const noexcept override
    {
        return static_cast<std::int64_t>(generated_.size());
    }

  private:
    const Kernel&    kernel_;
    Past             base_;
    std::vector<int> generated_;
};

class TwoSteppers final : public KernelPairStepper {
  public:
    TwoSteppers(std::unique_ptr<KernelStepper> x, std::unique_ptr<KernelStepper> y)
        : x_(std::move(x)), y_(std::move(y))
    {
    }

    void push(int symbol) override
    {
        x_->push(symbol);
        y_->push(symbol);
    }

    void pop() override
    {
        x_->pop();
        y_->pop();
    }

    void dists(std::span<double> out_x, std::span<double> out_y) const override
    {
        x_->dist(out_x);
        y_->dist(out_y);
    }

    std::int64_t depth() const noexcept override { return x_->depth(); }

  private:
    std::unique_ptr<KernelStepper> x_;
    std::unique_ptr<KernelStepper> y_;
};

} // namespace

std::unique_ptr<KernelPairStepper> Kernel::pair_stepper(const Past& base_x,
                                                        const Past& base_y,
                                                        std::int64_t depth_hint) const
{
    return std::make_unique<TwoSteppers>(stepper(base_x, depth_hint),
                                         stepper(base_y, depth_hint));
}

void Kernel::eval_all(const Past& past, std::span<double> out) const
{
    const int n = alphabet().size();
    if (out.size() < static_cast<std::size_t>(n)) {
        throw std::invalid_argument("Kernel::eval_all: output span too small");
    }
    for (int a = 0; a < n; ++a) { out[static_cast<std::size_t>(a)] = eval(a, past); }
}

std::unique_ptr<KernelStepper> Kernel::stepper(const Past& base, std::int64_t) const
{
    return std::make_unique<GenericStepper>(*this, base);
}

std::optional<double> Kernel::closed_form_variation(std::int64_t) const { return std::nullopt; }
std::optional<double> Kernel::closed_form_oscillation(std::int64_t) const { return std::nullopt; }
std::optional<double> Kernel::oscillation_upper_bound(std::int64_t k) const
{
    return closed_form_oscillation(k);
}
std::optional<double> Kernel::oscillation_tail_bound(std::int64_t) const { return std::nullopt; }
std::optional<double> Kernel::variation_upper_bound(std::int64_t) const { return std::nullopt; }
std::optional<Kernel::Ell2Certificate> Kernel::ell2_certificate(std::int64_t) const
{
    return std::nullopt;
}
std::optional<double> Kernel::dobrushin_tail_bound(std::int64_t k_max) const
{
    auto osc = oscillation_tail_bound(k_max);
    if (!osc.has_value()) { return std::nullopt; }
    // Half the L1 flip oscillation bounds the interdependence coefficient.
    return *osc / 2.0;
}

std::string Kernel::id_hash() const
{
    const std::string s = schema_json();
    std::uint64_t     h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string        out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

void SearchBudget::validate() const
{
    if (exhaustive_limit == 0 && random_prefixes == 0) {
        throw std::invalid_argument("SearchBudget: zero budget");
    }
    if (past_period_max < 1) {
        throw std::invalid_argument("SearchBudget: past_period_max must be >= 1");
    }
}

} // namespace gchain
