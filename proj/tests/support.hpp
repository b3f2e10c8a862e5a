#pragma once

#include "km/parser.hpp"
#include "km/search.hpp"

namespace km::test {

inline Formula F(std::string_view text) { return parse_formula(text); }
inline Sequent S(std::string_view text) { return parse_sequent(text); }

/// Both implications provable.
inline bool equivalent(Prover& prover, Formula a, Formula b) {
    return prover.provable({FMultiset{a}, FMultiset{b}}) && prover.provable({FMultiset{b}, FMultiset{a}});
}

} // namespace km::test
