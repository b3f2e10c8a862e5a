#pragma once

#include "km/calculus.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace km {

struct SearchConfig {
    bool memoize = true;
    /// Apply one invertible instance eagerly instead of branching over it.
    bool saturate_invertible = true;
    /// Assert premise ≺ conclusion at every expansion.
    bool trace_measure = true;
    /// Report unprovable as soon as an invertible premise of a branching
    /// instance fails.
    bool prune_invertible_premises = true;
    /// Decide the duplicate-free form of each sequent (contraction and
    /// weakening are admissible, so the verdict is the same).
    bool contract_duplicates = true;
    /// Close Γ, φ ⇒ φ, Δ and Γ ⇒ ⊥→φ, Δ at once; drop ⊥→φ on the left and
    /// ⊥ on the right (all justified by cut and weakening).
    bool shortcut_closure = true;
    /// Formulas with at most this many distinct subformulas are classified
    /// once as theorem / refutable / neither; theorems are dropped on the
    /// left and close the sequent on the right, dually for refutable ones.
    /// Zero disables the probe.
    std::size_t theorem_probe_limit = 48;
    /// Answer provable when a proved sequent is contained in the current one
    /// (weakening is admissible).
    bool subsumption = true;
    /// Rewrite every atom a that occurs on the left to ⊤ inside the other
    /// formulas, then simplify ⊤ and ⊥ units away (⊤∧φ to φ, φ∨⊥ to φ,
    /// ⊤→φ to φ, □⊤ to ⊤, ...). Sound because a ⊢ □a (CP) and
    /// interderivable formulas may be exchanged in any context. No formula
    /// ever gets heavier.
    bool unit_rewrite = true;
    /// Answer unprovable when one of the finite Kripke models on at most
    /// three worlds refutes the sequent (soundness). Atoms after the first
    /// this many seen by the prover are false everywhere. Zero disables it.
    std::size_t semantic_filter_atoms = 3;
    /// Before expanding a sequent, first try the sub-sequent left after
    /// greedily dropping formulas (heaviest first) while no small model
    /// refutes it. Needs the semantic filter; sound by weakening.
    bool relevance_slicing = true;
    /// Before the branching rules, try the admissible (→L): from Γ ⇒ φ, Δ
    /// and Γ, ψ ⇒ Δ conclude Γ, φ→ψ ⇒ Δ. Certificates never contain it.
    bool admissible_arrow_left = false;
    /// Diagnostic cap on expanded nodes; termination never depends on it.
    std::optional<std::uint64_t> max_steps;
    /// When set, branch alternatives are tried in a seeded permuted order.
    std::optional<std::uint64_t> branch_seed;
};

/// Every optimisation off: plain backward search over the thirteen rules.
SearchConfig plain_search_config();

struct SearchStats {
    std::uint64_t expanded = 0;
    /// Expanded sequents found unprovable.
    std::uint64_t refuted = 0;
    std::uint64_t memo_hits = 0;
    std::uint64_t measure_checks = 0;
    /// Sequents closed by a contained, already proved sequent.
    std::uint64_t subsumed = 0;
    /// Sequents refuted by the small-model filter.
    std::uint64_t countermodels = 0;
    /// Sequents proved through a strictly smaller relevant slice.
    std::uint64_t sliced = 0;
    /// Sequents closed by the admissible (→L).
    std::uint64_t arrow_left = 0;
    /// Formulas classified by the theorem probe.
    std::uint64_t probes = 0;
};

struct ProofResult {
    bool provable = false;
    /// Present iff provable.
    std::optional<ProofTree> tree;
    SearchStats stats;
};

/// Raised when a premise fails to decrease or the diagnostic step cap is hit.
class SearchInternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Backward proof search with a verdict cache that persists across calls.
/// Not thread-safe; use one Prover per thread.
class Prover {
public:
    explicit Prover(SearchConfig cfg = {});

    ProofResult prove(const Sequent& s);
    bool provable(const Sequent& s);

    [[nodiscard]] const SearchConfig& config() const { return cfg_; }
    [[nodiscard]] const SearchStats& stats() const { return stats_; }
    [[nodiscard]] std::size_t cache_size() const { return memo_.size(); }
    void clear_cache() {
        memo_.clear();
        proved_.clear();
    }

private:
    enum class Probe : std::uint8_t { Theorem, Refutable, Neither, TooLarge };
    /// Refuted: an invertible premise failed, so the conclusion is unprovable.
    enum class Outcome { Proved, Failed, Refuted };

    bool decide(const Sequent& s);
    bool decide_normal(const Sequent& s);
    bool decide_uncached(const Sequent& s);
    /// Normal form used as the cache key; nullopt when closed outright.
    std::optional<Sequent> normalize(const Sequent& s);
    Probe probe(Formula f);
    std::uint64_t atom_mask(Formula f);
    Formula rewrite_units(Formula f, std::uint64_t mask);
    Formula canonical(Formula f);
    Formula substitute(Formula f, std::uint64_t mask);
    const std::vector<std::uint64_t>& truth(Formula f);
    bool semantically_refuted(const Sequent& s);
    std::optional<Sequent> relevant_slice(const Sequent& s);
    std::optional<RuleInstance> saturation_step(const Sequent& s) const;
    std::vector<RuleInstance> alternatives(const Sequent& s) const;
    Outcome try_instance(const RuleInstance& inst);
    void check_measure(const RuleInstance& inst);
    ProofTree build(const Sequent& s);

    SearchConfig cfg_;
    SearchStats stats_;
    std::uint64_t steps_ = 0;
    std::unordered_map<Sequent, bool> memo_;
    std::unordered_map<Formula, Probe> probes_;
    std::unique_ptr<Prover> side_;
    std::unordered_map<std::string, unsigned> atom_bits_;
    std::unordered_map<const void*, std::uint64_t> atom_masks_;
    std::unordered_map<const void*, Formula> canonical_;
    struct RewriteKeyHash {
        std::size_t operator()(const std::pair<const void*, std::uint64_t>& k) const {
            return std::hash<const void*>{}(k.first) ^ (k.second * 0x9e3779b97f4a7c15ULL);
        }
    };
    std::unordered_map<std::pair<const void*, std::uint64_t>, Formula, RewriteKeyHash> rewrites_;
    std::unordered_map<const void*, std::vector<std::uint64_t>> truth_;

    struct Proved {
        std::uint64_t lsig = 0;
        std::uint64_t rsig = 0;
        Sequent seq;
    };
    bool subsumed(const Sequent& s) const;
    void record_proved(const Sequent& s);
    /// Proved sequents keyed by their least right-hand formula (or null).
    std::unordered_map<const void*, std::vector<Proved>> proved_;
};

ProofResult prove(const Sequent& s, const SearchConfig& cfg = {});
bool prove_bool(const Sequent& s);

enum class AdmissibleRule {
    WeakL,       // Γ ⇒ Δ                       / Γ, φ ⇒ Δ
    WeakR,       // Γ ⇒ Δ                       / Γ ⇒ φ, Δ
    ContrL,      // Γ, φ, φ ⇒ Δ                 / Γ, φ ⇒ Δ
    ContrR,      // Γ ⇒ φ, φ, Δ                 / Γ ⇒ φ, Δ
    Cut,         // Γ ⇒ Δ, φ   and  Γ, φ ⇒ Δ    / Γ ⇒ Δ
    ArrL,        // Γ ⇒ φ, Δ   and  Γ, ψ ⇒ Δ    / Γ, φ→ψ ⇒ Δ
    ArrArrLDup,  // Γ, (φ→ψ)→χ ⇒ Δ              / Γ, φ, ψ→χ, ψ→χ ⇒ Δ
    ArrArrLInv,  // Γ, (φ→ψ)→χ ⇒ Δ              / Γ, φ, ψ→χ ⇒ Δ
    OrRInv,      // Γ ⇒ φ∨ψ, Δ                  / Γ ⇒ φ, ψ, Δ
    ImpRInv,     // Γ ⇒ φ→ψ, Δ                  / Γ, φ ⇒ ψ, Δ
};

std::string_view admissible_name(AdmissibleRule r);

/// A rule instance given by its context and the formulas it mentions
/// (φ, ψ, χ in the order of the comments above; unused ones are ignored).
struct AdmissibilityWitness {
    FMultiset gamma;
    FMultiset delta;
    std::vector<Formula> formulas;
};

struct RuleShape {
    std::vector<Sequent> premises;
    Sequent conclusion;
};

/// Premises and conclusion of the admissible rule at the witness.
RuleShape admissible_shape(AdmissibleRule r, const AdmissibilityWitness& w);

struct AdmissibilityResult {
    /// Index of the first premise that is not provable, if any.
    std::optional<std::size_t> failed_premise;
    bool conclusion_provable = false;

    /// Premises provable and conclusion provable.
    [[nodiscard]] bool holds() const { return !failed_premise && conclusion_provable; }
};

AdmissibilityResult admissibility_probe(AdmissibleRule r, const AdmissibilityWitness& w, Prover& prover);

} // namespace km
