#pragma once

#include "km/interpolation.hpp"
#include "km/search.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace km {

struct SuiteResult {
    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    /// The first few failure descriptions.
    std::vector<std::string> messages;

    [[nodiscard]] bool passed() const { return failures == 0; }
    void fail(std::string message);
};

/// The seeded regression corpus: random sequents over p, q, r with total
/// weight at most max_weight.
std::vector<Sequent> sequent_corpus(std::size_t n, std::uint64_t seed, std::uint64_t max_weight = 25);
/// Random formulas over p, q, r of weight at most max_weight.
std::vector<Formula> formula_corpus(std::size_t n, std::uint64_t seed, std::uint64_t max_weight = 15);

/// Runs prove with measure tracing on every sequent; a measure violation
/// or internal error is a failure. Provable results must pass check_proof.
SuiteResult suite_termination(const std::vector<Sequent>& corpus, Prover& prover);
/// The verdict must not depend on saturation, on the branch order or on
/// the search optimisations.
SuiteResult suite_order_independence(const std::vector<Sequent>& corpus, std::size_t seeds);
/// Every provable sequent is valid on every Kripke model up to max_worlds
/// worlds, and every sequent with a countermodel is unprovable.
SuiteResult suite_kripke_soundness(const std::vector<Sequent>& corpus, Prover& prover, std::size_t max_worlds);
/// Every provable Γ ⇒ Δ has Γ entailing ⋁Δ on all KM-algebras up to
/// max_size elements.
SuiteResult suite_algebra_soundness(const std::vector<Sequent>& corpus, Prover& prover, std::size_t max_size);
/// Persistence, the box-inverse observation and strictness of R on all
/// models up to max_worlds worlds over p, q.
SuiteResult suite_kripke_properties(const std::vector<Formula>& formulas, std::size_t max_worlds);
/// Enumerated algebras validate, and every scheme instance is top.
SuiteResult suite_algebra_axioms(std::size_t max_size);
/// Bundled Hilbert proofs pass both checkers and agree with search and
/// with the semantics.
SuiteResult suite_hilbert(Prover& prover);
/// Text printed by the printer parses back to the same formula.
SuiteResult suite_parser(const std::vector<Formula>& formulas);

struct AdmissibilitySample {
    std::size_t attempts = 0;
    /// Witnesses whose premises were all provable.
    std::size_t instances = 0;
    /// Of those, the ones with a provable conclusion.
    std::size_t holds = 0;
    std::vector<std::string> failures;
};

/// Draws random witnesses for r until `wanted` of them have provable
/// premises or max_attempts is reached.
AdmissibilitySample sample_admissibility(AdmissibleRule r, std::size_t wanted, std::uint64_t seed, Prover& prover,
                                         std::size_t max_attempts);

/// Rules sampled by the admissibility suite.
const std::vector<AdmissibleRule>& admissibility_suite_rules();
SuiteResult suite_admissibility(std::size_t per_rule, std::uint64_t seed, Prover& prover);

/// verify_interpolant on every formula, in Full and Greedy mode, plus
/// inter-derivability of the two modes' outputs.
SuiteResult suite_interpolation(const std::vector<Formula>& formulas, const InterpConfig& base,
                                const VerifyBudget& budget, Prover& prover);
/// ∃p.p, ∀p.p, ∃p.q, ∀p.q and ∃p.(p∧q) against ⊤, ⊥, q, q, q.
SuiteResult suite_golden(const InterpConfig& cfg, Prover& prover);

struct SelftestOptions {
    std::size_t corpus_size = 100;
    std::uint64_t seed = 1;
    /// Test hook: the named suite reports one extra failure.
    std::string inject_fault;
};

struct SelftestReport {
    std::uint64_t seed = 0;
    std::size_t corpus_size = 0;
    std::vector<SuiteResult> suites;

    [[nodiscard]] bool passed() const;
    /// Deterministic text report, one line per suite.
    [[nodiscard]] std::string text() const;
};

SelftestReport run_selftest(const SelftestOptions& opts);

} // namespace km
