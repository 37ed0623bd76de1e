#pragma once

#include "gchain/alphabet.hpp"
#include "gchain/past.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

namespace gchain {

/// Incremental evaluator of one chain history: a base past plus symbols
/// appended in time order. push/pop support the enumeration tree walk of the
/// oracle as well as forward simulation; dist() is the conditional law of the
/// next symbol given the current history.
class KernelStepper {
  public:
    virtual ~KernelStepper() = default;

    virtual void push(int symbol)                       = 0;
    virtual void pop()                                  = 0;
    virtual void dist(std::span<double> out) const      = 0;
    virtual std::int64_t depth() const noexcept         = 0;
};

/// Two histories that differ only in their base pasts and share every
/// generated symbol. Families can evaluate both conditionals much cheaper
/// than two independent steppers (the autoregressive field over the shared
/// symbols is computed once).
class KernelPairStepper {
  public:
    virtual ~KernelPairStepper() = default;

    virtual void push(int symbol)                                      = 0;
    virtual void pop()                                                 = 0;
    virtual void dists(std::span<double> out_x, std::span<double> out_y) const = 0;
    virtual std::int64_t depth() const noexcept                        = 0;
};

/// Probability kernel g(a | past) on a finite alphabet, strongly non-null
/// with bound gamma <= inf g. Immutable and shareable across workers.
class Kernel {
  public:
    virtual ~Kernel() = default;

    virtual const Alphabet& alphabet() const noexcept = 0;

    /// gamma in (0,1) with gamma <= g(a | past) for every (a, past).
    virtual double non_null_bound() const noexcept = 0;

    virtual double eval(int symbol, const Past& past) const = 0;

    virtual void eval_all(const Past& past, std::span<double> out) const;

    /// Incremental evaluator rooted at `base`. `depth_hint` is the maximum
    /// number of symbols that will be pushed (used for precomputation).
    virtual std::unique_ptr<KernelStepper> stepper(const Past& base,
                                                   std::int64_t depth_hint) const;

    /// Evaluator of two histories sharing their generated symbols (defaults
    /// to two independent steppers).
    virtual std::unique_ptr<KernelPairStepper>
    pair_stepper(const Past& base_x, const Past& base_y, std::int64_t depth_hint) const;

    // ---- structural declarations used by the criterion evaluators ----

    /// Monotone in the past: flipping a past spin up never decreases
    /// g(top-symbol | .). Makes the constant extremal pasts exact maximizers
    /// in the variation search.
    virtual bool attractive() const noexcept { return false; }

    /// var_k = 0 for all k >= value (finite memory).
    virtual std::optional<std::int64_t> memory_order() const { return std::nullopt; }

    /// Exact var_k when the family has a closed form.
    virtual std::optional<double> closed_form_variation(std::int64_t k) const;

    /// Exact osc_k (sum over symbols of the single-flip supremum) when the
    /// family has a closed form.
    virtual std::optional<double> closed_form_oscillation(std::int64_t k) const;

    /// Analytic upper bound on osc_k (valid even when no closed form exists).
    virtual std::optional<double> oscillation_upper_bound(std::int64_t k) const;

    /// Certified upper bound on sum_{k > k_max} osc_k.
    virtual std::optional<double> oscillation_tail_bound(std::int64_t k_max) const;

    /// Analytic upper bound on var_k (for series certification).
    virtual std::optional<double> variation_upper_bound(std::int64_t k) const;

    /// Certified classification of sum_k var_k^2 beyond a computed horizon:
    /// either a finite bound on the remainder or a divergence witness.
    struct Ell2Certificate {
        std::optional<double> remainder;
        bool                  divergent = false;
        std::string           text;
    };
    virtual std::optional<Ell2Certificate> ell2_certificate(std::int64_t k_max) const;

    /// Certified upper bound on sum_{k > k_max} of the one-sided Dobrushin
    /// interdependence coefficients (half the per-flip L1 oscillation).
    virtual std::optional<double> dobrushin_tail_bound(std::int64_t k_max) const;

    /// Scale used by the default burn-in heuristic (block size, tail index).
    virtual double memory_scale() const { return 1.0; }

    /// Canonical parameter serialization (JSON text) of this kernel.
    virtual std::string schema_json() const = 0;

    /// FNV-1a hash of schema_json(), as fixed-width hex. Identifies the model
    /// in trajectory dumps and reports.
    std::string id_hash() const;
};

/// How the uncomputable suprema in var_k / osc_k are approximated.
/// Exhaustive prefix enumeration runs when |S|^k <= exhaustive_limit;
/// otherwise `random_prefixes` sampled prefixes are tried. Pasts beyond the
/// prefix are the two constant extremal pasts for attractive families, else
/// `random_pasts` random periodic pasts per side.
struct SearchBudget {
    std::uint64_t exhaustive_limit = std::uint64_t{1} << 20;
    std::uint32_t random_prefixes  = 512;
    std::uint32_t random_pasts     = 64;
    std::int64_t  past_period_max  = 6;
    std::uint64_t seed             = 0x5eed5eed5eed5eedull;

    void validate() const;
};

/// Value of an approximated supremum: always a valid lower bound, `exact`
/// when certified to equal the supremum, with an analytic upper bound when
/// the family provides one.
struct SearchResult {
    double                value = 0.0;
    bool                  exact = false;
    std::optional<double> upper_bound;
    std::uint64_t         evaluations = 0;
};

} // namespace gchain
