#pragma once

#include "km/search.hpp"
#include "km/sequent.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace km {

enum class InterpMode {
    /// Collect the contribution of every row match.
    Full,
    /// A matching starred (invertible) row defines the result outright.
    Greedy,
};

/// Recursive context of the row for Γ', □ψ.
enum class Ep9Context {
    /// □E(□⁻¹Γ'): the matched box is dropped.
    Remainder,
    /// □E(□⁻¹Γ) = □E(□⁻¹Γ', ψ).
    WholeGamma,
};

/// Second disjunct of the consequent in the row for Γ', (δ1→δ2)→δ3.
enum class Ep8Third {
    /// E(Γ', δ1→δ3, δ1)
    Literal,
    /// E(Γ', δ2→δ3, δ1), the left-premise context of (→→L)
    DeltaTwo,
};

struct InterpConfig {
    InterpMode mode = InterpMode::Full;
    Ep9Context ep9 = Ep9Context::WholeGamma;
    Ep8Third ep8 = Ep8Third::DeltaTwo;
    /// Check that every recursive call is on a ≺-smaller sequent.
    bool assert_measure = true;

    friend bool operator==(const InterpConfig&, const InterpConfig&) = default;
};

/// The clause table as printed: remainder context and δ1→δ3.
inline constexpr InterpConfig kPrintedTableConfig{InterpMode::Full, Ep9Context::Remainder, Ep8Third::Literal, true};

std::string describe(const InterpConfig& cfg);

struct InterpStats {
    std::uint64_t e_computed = 0;
    std::uint64_t a_computed = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t measure_checks = 0;
};

/// Computes E_p(Γ) and A_p(Γ ⇒ Δ) for one variable and one configuration.
/// Results are cached for the lifetime of the object. Not thread-safe.
class Interpolator {
public:
    explicit Interpolator(std::string var, InterpConfig cfg = {});

    /// Conjunction of the contributions; top when nothing matches.
    Formula E(const FMultiset& gamma);
    /// Disjunction of the contributions; bottom when nothing matches.
    Formula A(const Sequent& s);

    [[nodiscard]] const std::string& var() const { return var_; }
    [[nodiscard]] const InterpConfig& config() const { return cfg_; }
    [[nodiscard]] const InterpStats& stats() const { return stats_; }

private:
    Formula call_e(const FMultiset& gamma);
    Formula call_a(const Sequent& s);
    void check_measure(const Sequent& callee);

    std::optional<Formula> e_row(int row, Formula f, const FMultiset& gamma);
    std::optional<Formula> a_left_row(int row, Formula f, const Sequent& s);
    std::optional<Formula> a_right_row(int row, Formula f, const Sequent& s);
    Formula compute_e(const FMultiset& gamma);
    Formula compute_a(const Sequent& s);

    [[nodiscard]] bool is_var(Formula f) const { return f.is_atom() && f.name() == var_; }
    [[nodiscard]] bool is_other_atom(Formula f) const { return f.is_atom() && f.name() != var_; }

    std::string var_;
    Formula var_atom_;
    InterpConfig cfg_;
    InterpStats stats_;
    std::vector<Sequent> frames_;
    std::unordered_map<FMultiset, Formula> e_cache_;
    std::unordered_map<Sequent, Formula> a_cache_;
};

/// ∃p.f := E_p({f})
Formula exists_p(const std::string& var, Formula f, const InterpConfig& cfg = {});
/// ∀p.f := A_p(∅ ⇒ {f})
Formula forall_p(const std::string& var, Formula f, const InterpConfig& cfg = {});

struct VerifyBudget {
    /// Largest weight of the sampled p-free formulas ψ.
    std::uint64_t max_weight = 9;
    /// Every ψ up to this weight is tested; heavier ones are sampled.
    std::uint64_t exhaustive_weight = 4;
    std::size_t random_samples = 120;
    /// Random (Π, Σ, Δ) triples for the sequent-level clauses.
    std::size_t sequent_samples = 12;
    std::uint64_t seed = 1;
};

struct VerificationFailure {
    std::string check;
    std::string witness;
};

struct VerificationReport {
    Formula input;
    Formula exists;
    Formula forall;
    bool p_free = true;
    bool implication = true;
    bool uniformity = true;
    bool sequent_clauses = true;
    std::size_t psi_tested = 0;
    /// ψ with ⊢ f ⇒ ψ (resp. ⊢ ψ ⇒ f): the cases where uniformity had work to do.
    std::size_t psi_consequences = 0;
    std::size_t psi_antecedents = 0;
    std::size_t sequent_checks = 0;
    std::vector<VerificationFailure> failures;

    [[nodiscard]] bool passed() const { return failures.empty(); }
};

/// Checks p-freeness, implication and sampled uniformity of ∃p.f / ∀p.f,
/// plus the sequent-level uniformity clauses on sampled contexts.
VerificationReport verify_interpolant(const std::string& var, Formula f, const InterpConfig& cfg,
                                      const VerifyBudget& budget, Prover& prover);
VerificationReport verify_interpolant(const std::string& var, Formula f, const InterpConfig& cfg = {},
                                      const VerifyBudget& budget = {});

} // namespace km
