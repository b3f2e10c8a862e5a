#pragma once

#include "km/formula.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace km {

/// Metavariable name to formula.
using Substitution = std::map<std::string, Formula>;

/// Formula shape over metavariables φ, ψ, χ. Atoms never occur.
struct Pattern {
    enum class Tag { Meta, Bottom, And, Or, Imp, Box };
    Tag tag = Tag::Bottom;
    /// Metavariable name ("phi", "psi" or "chi") for Tag::Meta.
    std::string meta;
    std::vector<Pattern> kids;
};

struct Scheme {
    std::string id;
    Pattern pattern;
};

/// Scheme text with φ, ψ, χ for the metavariables.
std::string print_scheme(const Scheme& s);

/// The nine intuitionistic schemes ipc1..ipc9 followed by K, SL and KM.
const std::vector<Scheme>& schemes();
/// Throws std::invalid_argument for an unknown id.
const Scheme& scheme(std::string_view id);

/// Binds the scheme's metavariables so that the pattern equals candidate.
std::optional<Substitution> scheme_match(std::string_view id, Formula candidate);
/// Replaces metavariables; throws std::invalid_argument if one is unbound.
Formula instantiate(std::string_view id, const Substitution& s);

enum class HRule { Ax, EI, MP, Nec };

std::string_view rule_name(HRule r);

/// One line of a linear proof. Step indices are 0-based and must point to
/// earlier steps. For MP, `i` proves φ and `j` proves φ → formula.
struct HStep {
    HRule rule = HRule::Ax;
    /// Ax only. An empty substitution means "match the formula".
    std::string scheme;
    Substitution subst;
    std::size_t i = 0;
    std::size_t j = 0;
    Formula formula;
};

/// Linear certificate for the consecution context ⊢ (last step's formula).
struct HProof {
    FormulaSet context;
    std::vector<HStep> steps;

    /// Formula of the last step; throws std::logic_error when there is none.
    [[nodiscard]] Formula goal() const;
};

struct HCheckResult {
    bool ok = true;
    /// Index of the first rejected step; unset for an empty proof.
    std::optional<std::size_t> bad_step;
    std::string reason;

    explicit operator bool() const { return ok; }
};

/// Checks every step against (Ax), (EI), (MP) and (Nec) with an arbitrary
/// context.
HCheckResult check_hproof(const HProof& p);

/// Same, but (Nec) may only be applied to steps that do not depend on any
/// (EI) step, so their formulas are provable from the empty context.
HCheckResult nec_variant_check(const HProof& p);

/// Appends steps to a proof. The derived helpers expand into plain steps
/// and return the index of the step holding the announced formula.
class HProofBuilder {
public:
    explicit HProofBuilder(FormulaSet context = {}) { proof_.context = std::move(context); }

    std::size_t ax(std::string_view id, const Substitution& s);
    std::size_t ei(Formula f);
    std::size_t mp(std::size_t i, std::size_t j);
    std::size_t nec(std::size_t i);

    /// a → a
    std::size_t identity(Formula a);
    /// From ⊢ x derive h → x.
    std::size_t weaken(std::size_t i, Formula h);
    /// From a → b and b → c derive a → c.
    std::size_t chain(std::size_t i, std::size_t j);
    /// From h → a and h → (a → b) derive h → b.
    std::size_t lifted_mp(std::size_t i, std::size_t j);
    /// From h → (a → b) and h → (b → c) derive h → (a → c).
    std::size_t lifted_chain(std::size_t i, std::size_t j);

    [[nodiscard]] Formula formula(std::size_t i) const { return proof_.steps.at(i).formula; }
    [[nodiscard]] std::size_t size() const { return proof_.steps.size(); }
    [[nodiscard]] const HProof& proof() const { return proof_; }

private:
    std::size_t push(HStep s);
    HProof proof_;
};

struct HFixture {
    std::string name;
    HProof proof;
};

/// ∅ ⊢ φ → □φ for any φ.
HProof cp_proof(Formula phi);
/// Bundled certificates: single axioms K, SL, KM; derived 4, GL and CP;
/// □⊤ by Nec; and a small proof under a nonempty context. All are
/// accepted by both checkers.
const std::vector<HFixture>& hilbert_fixtures();

std::string hproof_to_json(const HProof& p, int indent = -1);
/// Throws std::invalid_argument on malformed input (including formulas
/// that do not parse); does not check the proof.
HProof hproof_from_json(std::string_view text);

} // namespace km
