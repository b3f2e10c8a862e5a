#pragma once

#include "km/multiset.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace km {

struct Sequent {
    FMultiset lhs;
    FMultiset rhs;

    friend bool operator==(const Sequent& a, const Sequent& b) { return a.lhs == b.lhs && a.rhs == b.rhs; }
    friend bool operator!=(const Sequent& a, const Sequent& b) { return !(a == b); }

    [[nodiscard]] std::size_t hash() const { return lhs.hash() * 31 + rhs.hash(); }
};

/// lhs + rhs + rhs: the multiset the sequent ordering compares.
FMultiset measure_multiset(const Sequent& s);

/// The well-founded sequent ordering: Dershowitz-Manna comparison of
/// (lhs, rhs, rhs) under formula weight.
bool seq_less(const Sequent& a, const Sequent& b);

/// Sum of 3^weight over lhs + rhs + rhs. Exact (arbitrary precision).
boost::multiprecision::cpp_int sequent_weight(const Sequent& s);

std::set<std::string> vars(const Sequent& s);

/// Same sequent with every multiplicity reduced to one.
Sequent contract(const Sequent& s);

} // namespace km

template <>
struct std::hash<km::Sequent> {
    std::size_t operator()(const km::Sequent& s) const noexcept { return s.hash(); }
};
