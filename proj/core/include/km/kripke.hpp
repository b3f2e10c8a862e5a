#pragma once

#include "km/sequent.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace km {

/// Largest model the evaluator accepts (truth sets are 64-bit masks).
inline constexpr std::size_t kMaxModelWorlds = 64;

/// Finite Kripke model. Only ≤ is stored; the modal relation R is always
/// derived as the strict part of ≤.
struct FiniteModel {
    std::size_t worlds = 0;
    std::vector<std::vector<bool>> leq;
    /// Atom to the worlds where it holds. Missing atoms hold nowhere.
    std::map<std::string, std::set<std::size_t>> val;

    [[nodiscard]] bool le(std::size_t w, std::size_t v) const { return leq[w][v]; }
    /// wRv iff w ≤ v and not v ≤ w.
    [[nodiscard]] bool strict(std::size_t w, std::size_t v) const { return leq[w][v] && !leq[v][w]; }
    [[nodiscard]] bool holds(const std::string& atom, std::size_t w) const;

    /// Model on n worlds with ≤ the identity and an empty valuation.
    static FiniteModel discrete(std::size_t n);

    friend bool operator==(const FiniteModel&, const FiniteModel&) = default;
};

struct ModelViolation {
    /// "shape", "reflexivity", "transitivity", "persistence" or "range".
    std::string condition;
    std::size_t w = 0;
    std::size_t v = 0;
    std::size_t u = 0;
    std::string atom;
    std::string message;
};

/// Checks the matrix shape, the preorder axioms and persistence of the
/// valuation; reports the first violated condition.
std::optional<ModelViolation> validate_model(const FiniteModel& m);

/// Evaluates formulas on one model. Truth sets are cached per subformula,
/// so repeated queries on shared formulas are cheap.
class ModelEvaluator {
public:
    /// Throws std::invalid_argument if the model fails validation or has
    /// more than kMaxModelWorlds worlds.
    explicit ModelEvaluator(const FiniteModel& m);

    /// Bit w is set iff w forces f.
    std::uint64_t truth(Formula f);
    bool forces(std::size_t w, Formula f) { return truth(f) >> w & 1; }
    /// Worlds forcing every member of g.
    std::uint64_t truth_all(const FMultiset& g);
    /// Worlds forcing some member of g.
    std::uint64_t truth_any(const FMultiset& g);

    [[nodiscard]] const FiniteModel& model() const { return model_; }

private:
    FiniteModel model_;
    std::uint64_t all_ = 0;
    std::vector<std::uint64_t> up_;
    std::vector<std::uint64_t> succ_;
    std::map<const void*, std::uint64_t> cache_;
};

/// The forcing relation at world w. The model must validate.
bool forces(const FiniteModel& m, std::size_t w, Formula f);

struct ValidityVerdict {
    /// Least world forcing all of the left side and nothing on the right.
    std::optional<std::size_t> refuted_at;

    [[nodiscard]] bool valid() const { return !refuted_at; }
};

/// Γ ⇒ Δ holds on m iff every world forcing all of Γ forces some member of Δ.
ValidityVerdict sequent_valid_on(const FiniteModel& m, const Sequent& s);

/// ≤ matrices of rooted preorders on n worlds (world 0 below every world),
/// one per isomorphism class, in a fixed order. 1 <= n <= kMaxFrameWorlds.
inline constexpr std::size_t kMaxFrameWorlds = 6;
const std::vector<std::vector<std::vector<bool>>>& rooted_frames(std::size_t n);

/// Up-closed subsets of the frame as bit masks, in increasing numeric order.
std::vector<std::uint64_t> up_sets(const std::vector<std::vector<bool>>& leq);

struct Countermodel {
    FiniteModel model;
    std::size_t world = 0;
};

/// Enumerates rooted frames by increasing size and every persistent
/// valuation of the sequent's atoms (sorted by name), returning the first
/// model whose root refutes s. An empty result says nothing about
/// provability.
/// max_worlds is at most kMaxFrameWorlds.
std::optional<Countermodel> countermodel_search(const Sequent& s, std::size_t max_worlds = 4);

/// Calls visit(model) for every rooted model on at most max_worlds worlds
/// over the given atoms, in the same order countermodel_search uses. Stops
/// early when visit returns false.
void for_each_model(const std::vector<std::string>& atoms, std::size_t max_worlds,
                    const std::function<bool(const FiniteModel&)>& visit);

struct PropertyFailure {
    /// "persistence", "observation" or "strictness".
    std::string property;
    std::size_t w = 0;
    std::size_t v = 0;
    std::string witness;
};

struct PropertyReport {
    std::size_t persistence_checks = 0;
    std::size_t observation_checks = 0;
    std::vector<PropertyFailure> failures;

    [[nodiscard]] bool passed() const { return failures.empty(); }
};

/// Checks, on a validated model:
///  - persistence of forcing along ≤ for every subformula of the formulas;
///  - for every wRv and every context, w ⊩ Γ implies v ⊩ □⁻¹Γ;
///  - R is irreflexive and transitive.
PropertyReport property_probes(const FiniteModel& m, const std::vector<Formula>& formulas,
                               const std::vector<FMultiset>& contexts);

std::string model_to_json(const FiniteModel& m, int indent = -1);
/// Parses {"worlds": n, "leq": [[bool...]...], "val": {"p": [w...]}}.
/// Throws std::invalid_argument on malformed input; does not validate.
FiniteModel model_from_json(std::string_view text);

} // namespace km
