#pragma once

#include "gchain/kernel.hpp"
#include "gchain/series.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace gchain {

// ---------------------------------------------------------------------------
// Link functions
// ---------------------------------------------------------------------------

/// Nondecreasing psi: [-1,1] -> [eps, 1-eps] with psi(r) + psi(-r) = 1.
struct PsiSpec {
    enum class Kind { step, linear, table };

    Kind                kind    = Kind::step;
    double              epsilon = 0.1;
    std::vector<double> r_nodes;  // table kind: strictly increasing over [-1,1]
    std::vector<double> values;   // table kind: psi at the nodes

    static PsiSpec step(double eps) { return {Kind::step, eps, {}, {}}; }
    static PsiSpec linear(double eps) { return {Kind::linear, eps, {}, {}}; }
    static PsiSpec table(std::vector<double> r, std::vector<double> v, double eps);

    double operator()(double r) const;
    /// Largest change of psi under one spin flip in a window of `window`
    /// symbols (for step psi this is the full jump 1-2eps).
    double max_increment_per_flip(std::int64_t window) const;
    /// Largest slope (infinite for step psi: returns the jump instead when
    /// asked through max_increment_per_flip).
    double max_slope() const;
    void   validate() const;
};

/// Increasing phi: R -> (0,1) with phi(r) + phi(-r) = 1.
struct PhiSpec {
    enum class Kind { logit, table };

    Kind                kind = Kind::logit;
    std::vector<double> r_nodes;  // table kind
    std::vector<double> values;
    double              lip_upper = 0.5; // declared Lipschitz constant
    double              lip_lower = 0.0; // declared inverse-Lipschitz slope floor

    /// phi(r) = 1 / (1 + exp(-2r)). Increasing, phi(r) + phi(-r) = 1.
    static PhiSpec logit() { return {}; }
    static PhiSpec table(std::vector<double> r, std::vector<double> v,
                         double lip_lo, double lip_hi);

    double operator()(double r) const;
    double max_slope() const;
    /// Slope floor over [-radius, radius].
    double min_slope_on(double radius) const;
    void   validate() const;
};

// ---------------------------------------------------------------------------
// Coefficient sequence with certified power-law tail
// ---------------------------------------------------------------------------

/// beta_n = c * n^-exponent for n >= start (exponent > 1).
struct PowerLawTail {
    double       c        = 0.0;
    double       exponent = 2.0;
    std::int64_t start    = 1;
};

/// (beta_n)_{n>=1} as explicit prefix + optional power-law tail. All tail
/// sums are evaluated with certified error <= ~1e-13 (Euler-Maclaurin), never
/// by bare truncation.
class BetaSequence {
  public:
    BetaSequence() = default;
    BetaSequence(std::vector<double> prefix, std::optional<PowerLawTail> tail);

    double at(std::int64_t n) const; // n >= 1

    /// sum_{n>k} beta_n (exact; k >= 0).
    double tail_sum(std::int64_t k) const;
    /// sum_{n>k} |beta_n|.
    double abs_tail_sum(std::int64_t k) const;
    /// sum_{i>=0} beta_{first + i*step} (arithmetic progression; first >= 1).
    double progression_sum(std::int64_t first, std::int64_t step) const;

    bool all_nonnegative() const noexcept { return all_nonneg_; }
    /// Largest n with beta_n != 0; nullopt when the tail is infinite.
    std::optional<std::int64_t> finite_support() const;

    const std::vector<double>&         prefix() const noexcept { return prefix_; }
    const std::optional<PowerLawTail>& tail() const noexcept { return tail_; }

    /// Smallest n with sum_{m>n} |beta_m| <= tol, capped (power-law tails can
    /// push this past any horizon; the cap is reported by the caller).
    std::int64_t decay_index(double tol, std::int64_t cap) const;

  private:
    std::vector<double>         prefix_;
    std::optional<PowerLawTail> tail_;
    bool                        all_nonneg_ = true;
};

// ---------------------------------------------------------------------------
// Family parameter sets
// ---------------------------------------------------------------------------

/// Mixture-of-majorities kernel on {-1,+1}: g(a | x) = sum_j lambda_j *
/// psi(a * mean(x_{-1..-m_j})) with odd window sizes m_1 < m_2 < ...
struct BkfParams {
    std::vector<std::int64_t> m;
    std::vector<double>       lambda;
    PsiSpec                   psi;
    double                    r0 = 0.0; // reference point for the lacunarity check

    void validate() const;
    bool lacunary() const; // psi(r0) > psi(-r0) and m_{j+1} >= 4/(1-r0) m_j
};

/// Binary autoregressive kernel on {-1,+1}:
/// g(a | x) = phi(a * (sum_n beta_n x_{-n} + delta)).
struct ArParams {
    PhiSpec      phi;
    BetaSequence beta;
    double       delta = 0.0;

    void   validate() const;
    bool   attractive() const; // all beta_n >= 0 and delta >= 0
    double field_radius() const; // sum |beta_n| + |delta|
    /// Bi-Lipschitz constant gamma_phi with
    /// (1/gamma_phi) T_k <= var_k <= gamma_phi T_k, T_k = sum_{n>k} beta_n.
    double bi_lipschitz_gamma() const;
};

/// Renewal kernel: g(+1 | x) = q_r where r = (steps back to the most recent
/// +1) - 1; an all -1 history yields q_inf.
struct RenewalParams {
    enum class TailKind { constant, power, geometric };

    std::vector<double> q_prefix; // q_0, q_1, ...
    double              q_inf = 0.5;
    TailKind            tail_kind = TailKind::constant;
    double              a     = 0.0; // power: q_i = q_inf + a/(i+1)^theta
    double              theta = 1.0;
    double              rho   = 0.5; // geometric: q_i = q_inf + a * rho^i

    double q(std::int64_t i) const; // i >= 0
    void   validate() const;
};

/// Order-k table kernel; rows indexed by the last k symbols with x_{-1} as
/// the most significant digit. Doubles as the i.i.d. kernel at order 0 and as
/// the oracle cross-check family.
struct FiniteMemoryParams {
    int                 order = 0;
    Alphabet            alphabet = Alphabet::spin();
    std::vector<double> table; // |S|^order rows of |S| entries

    void        validate() const;
    std::size_t row_count() const;
    std::int64_t context_index(const Past& past) const;
};

// ---------------------------------------------------------------------------
// Kernel construction
// ---------------------------------------------------------------------------

std::shared_ptr<const Kernel> make_bkf_kernel(BkfParams params);
std::shared_ptr<const Kernel> make_ar_kernel(ArParams params);
std::shared_ptr<const Kernel> make_renewal_kernel(RenewalParams params);
std::shared_ptr<const Kernel> make_finite_memory_kernel(FiniteMemoryParams params);
/// i.i.d. sugar: order-0 finite-memory kernel over the spin alphabet.
std::shared_ptr<const Kernel> make_iid_kernel(std::vector<double> probs,
                                              Alphabet alphabet = Alphabet::spin());

/// Param access for kernels built above (nullptr when the family differs).
const BkfParams*          bkf_params(const Kernel& k);
const ArParams*           ar_params(const Kernel& k);
const RenewalParams*      renewal_params(const Kernel& k);
const FiniteMemoryParams* finite_memory_params(const Kernel& k);

// ---------------------------------------------------------------------------
// Analytic bound series (the l2 dichotomy calculators)
// ---------------------------------------------------------------------------

struct L2BoundSeries {
    SeriesClassification lower;           // lower-bound series (divergence witness)
    SeriesClassification upper;           // upper-bound series (convergence witness)
    double               lower_prefactor = 0.0;
    double               upper_prefactor = 0.0;
};

/// Series sum_n m_n (sum_{k>=n} lambda_k)^2 with prefactors
/// (1-r0)/4 (psi(r0)-psi(-r0))^2 (lower, from n=2; requires lacunarity) and
/// (1-eps)^2 (upper, from n=1). Verdicts come from the geometric behavior of
/// the terms over the computed range.
L2BoundSeries bkf_l2_bound_series(const BkfParams& params, std::int64_t n_max,
                                  const SeriesPolicy& policy = {});

/// Series sum_n (sum_{k>n} beta_k)^2 with prefactors 1/gamma^2 and gamma^2;
/// power-law tails receive integral-test certification.
L2BoundSeries ar_l2_bound_series(const ArParams& params, std::int64_t n_max,
                                 const SeriesPolicy& policy = {});

// Canonical parameter serialization (implemented with the schema I/O).
std::string canonical_json(const BkfParams& p);
std::string canonical_json(const ArParams& p);
std::string canonical_json(const RenewalParams& p);
std::string canonical_json(const FiniteMemoryParams& p);

} // namespace gchain
