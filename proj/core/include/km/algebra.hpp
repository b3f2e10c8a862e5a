#pragma once

#include "km/formula.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace km {

using Element = std::size_t;

/// Finite KM-algebra on the carrier 0..size-1, stored as full operation
/// tables. Build one with from_order() to derive meet, join and → from the
/// order; hand-built tables are accepted but should pass validate_algebra.
struct FiniteKMAlgebra {
    std::size_t size = 0;
    std::vector<std::vector<Element>> meet;
    std::vector<std::vector<Element>> join;
    std::vector<std::vector<Element>> imp;
    Element bot = 0;
    std::vector<Element> box;

    /// a ≤ b iff a = a ∧ b.
    [[nodiscard]] bool le(Element a, Element b) const { return meet[a][b] == a; }
    /// ⊥ → ⊥
    [[nodiscard]] Element top() const { return imp[bot][bot]; }

    /// Derives the operations from a partial order given as a matrix.
    /// Throws std::invalid_argument unless the order is a bounded lattice
    /// with a Heyting implication and box maps into the carrier.
    static FiniteKMAlgebra from_order(const std::vector<std::vector<bool>>& leq, std::vector<Element> box);

    /// The order matrix recovered from meet.
    [[nodiscard]] std::vector<std::vector<bool>> order() const;

    friend bool operator==(const FiniteKMAlgebra&, const FiniteKMAlgebra&) = default;
};

struct AlgebraViolation {
    /// Identifier of the failed law, for instance "distributivity" or
    /// "box_strength".
    std::string equation;
    std::vector<Element> witnesses;
    std::string message;
};

/// Exhaustively checks the bounded distributive lattice laws, residuation
/// of →, and the five box equations:
///   box_top       □⊤ = ⊤
///   box_meet      □a ∧ □b = □(a ∧ b)
///   box_unit      a ≤ □a
///   box_imp       □a → a = a
///   box_strength  □a ≤ b ∨ (b → a)
std::optional<AlgebraViolation> validate_algebra(const FiniteKMAlgebra& a);

using Valuation = std::map<std::string, Element>;

/// Interprets f. Throws std::out_of_range on an unbound atom or an element
/// outside the carrier.
Element evaluate(const FiniteKMAlgebra& a, const Valuation& v, Formula f);

struct AlgebraCounterexample {
    std::size_t algebra = 0;
    Valuation valuation;
};

/// First algebra (by index) and valuation of the occurring atoms under
/// which every member of gamma is ⊤ but f is not.
std::optional<AlgebraCounterexample> algebra_counterexample(const std::vector<FiniteKMAlgebra>& algebras,
                                                            const std::vector<Formula>& gamma, Formula f);

inline bool entails_on(const std::vector<FiniteKMAlgebra>& algebras, const std::vector<Formula>& gamma, Formula f) {
    return !algebra_counterexample(algebras, gamma, f);
}

inline constexpr std::size_t kMaxAlgebraSize = 6;

/// All KM-algebras with 1 to max_size elements up to isomorphism, ordered
/// by size, then lattice, then box vector. Throws std::invalid_argument
/// when max_size is 0 or above kMaxAlgebraSize.
const std::vector<FiniteKMAlgebra>& enumerate_km_algebras(std::size_t max_size);

/// Distributive lattices with n elements up to isomorphism, as order
/// matrices in which i ≤ j implies i <= j numerically.
std::vector<std::vector<std::vector<bool>>> distributive_lattices(std::size_t n);

std::string algebra_to_json(const FiniteKMAlgebra& a, int indent = -1);
/// Parses {"size": n, "leq": [[...]], "box": [...], "bot": b} and
/// re-derives the operations. Throws std::invalid_argument on bad input.
FiniteKMAlgebra algebra_from_json(std::string_view text);

} // namespace km
