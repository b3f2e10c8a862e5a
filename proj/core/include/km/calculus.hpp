#pragma once

#include "km/sequent.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace km {

/// The thirteen rules of the terminating calculus.
enum class RuleId {
    BotL,     // Γ, ⊥ ⇒ Δ
    IdP,      // Γ, p ⇒ p, Δ   (atoms only)
    AndL,
    AndR,
    OrL,
    OrR,
    AndImpL,  // (φ∧ψ)→χ  ~>  φ→(ψ→χ)
    OrImpL,   // (φ∨ψ)→χ  ~>  φ→χ, ψ→χ
    AtomImpL, // p, p→φ   ~>  p, φ
    BoxR,
    BoxImpL,
    ImpR,
    ImpImpL,
};

inline constexpr RuleId kAllRules[] = {RuleId::BotL,    RuleId::IdP,    RuleId::AndL,     RuleId::AndR, RuleId::OrL,
                                       RuleId::OrR,     RuleId::AndImpL, RuleId::OrImpL,  RuleId::AtomImpL,
                                       RuleId::BoxR,    RuleId::BoxImpL, RuleId::ImpR,    RuleId::ImpImpL};

/// ASCII name used in JSON and on the command line ("impR", "boxImpL", ...).
std::string_view rule_name(RuleId r);
/// Display symbol ("→R", "□→L", ...).
std::string_view rule_symbol(RuleId r);
std::optional<RuleId> rule_from_name(std::string_view name);

/// Rules applied eagerly by saturation: the single-premise and both-premise
/// rules whose premises are derivable from their conclusion.
bool is_invertible(RuleId r);

/// True iff premise `index` of r is derivable from r's conclusion, using the
/// admissible inverses and weakening. The first premise of →R and of →→L, the
/// last premise of →→L and of □→L.
bool is_invertible_premise(RuleId r, std::size_t index);

struct RuleInstance {
    RuleId rule;
    Sequent conclusion;
    /// The decomposed formula; for AtomImpL the pair (p, p→φ).
    std::vector<Formula> principal;
    std::vector<Sequent> premises;
};

using RuleMask = std::uint32_t;
constexpr RuleMask rule_bit(RuleId r) { return RuleMask{1} << static_cast<unsigned>(r); }
inline constexpr RuleMask kAllRulesMask = (RuleMask{1} << 13) - 1;

/// Every instance of every rule in `mask` whose conclusion is s, grouped by
/// rule in declaration order. Equal occurrences of a principal formula yield
/// a single instance.
std::vector<RuleInstance> applicable_instances(const Sequent& s, RuleMask mask = kAllRulesMask);

/// True iff ⊥L or IdP closes s.
bool is_axiom(const Sequent& s);

struct ProofTree {
    RuleInstance node;
    std::vector<ProofTree> children;

    [[nodiscard]] const Sequent& conclusion() const { return node.conclusion; }
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::size_t height() const;
};

struct ProofCheck {
    bool ok = true;
    /// Child indices from the root to the first bad node.
    std::vector<std::size_t> path;
    std::string reason;

    explicit operator bool() const { return ok; }
};

/// Re-derives every node from its conclusion and compares.
ProofCheck check_proof(const ProofTree& t);

/// Rules kept out of proof search: the (→→L2) variant and three admissible
/// inverses.
enum class VariantRule { ImpImpL2, OrRInv, ImpRInv, ImpImpLInv };

std::string_view variant_name(VariantRule r);

/// For ImpImpL2, `source` is the conclusion and `derived` the three premises.
/// For the inverse rules, `source` is the premise and `derived` holds the one
/// sequent the admissible rule concludes from it.
struct VariantInstance {
    VariantRule rule;
    Sequent source;
    std::vector<Formula> principal;
    std::vector<Sequent> derived;
};

std::vector<VariantInstance> variant_rule_instances(const Sequent& s);

/// JSON form {rule, conclusion, principal, children}, formulas printed.
std::string proof_to_json(const ProofTree& t, int indent = 2);
/// Builds a tree from JSON without validating it; premises are taken from
/// the children's conclusions. Throws std::invalid_argument when malformed.
ProofTree proof_from_json(std::string_view text);

/// Plain-text rendering, one node per line, indented by depth.
std::string render_proof(const ProofTree& t);

} // namespace km
