#pragma once

#include "km/formula.hpp"

#include <cstdint>
#include <initializer_list>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace km {

/// Finite multiset of formulas, stored as (formula, count) pairs sorted by
/// the canonical formula order. Counts are always positive.
class FMultiset {
public:
    using Entry = std::pair<Formula, std::uint32_t>;
    using const_iterator = std::vector<Entry>::const_iterator;

    FMultiset() = default;
    FMultiset(std::initializer_list<Formula> items);
    explicit FMultiset(const std::vector<Formula>& items);

    void insert(Formula f, std::uint32_t n = 1);
    /// Removes one occurrence; returns false if f is absent.
    bool erase_one(Formula f);

    [[nodiscard]] std::uint32_t count(Formula f) const;
    [[nodiscard]] bool contains(Formula f) const { return count(f) > 0; }
    /// Total number of occurrences.
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::size_t distinct() const { return entries_.size(); }
    [[nodiscard]] bool empty() const { return entries_.empty(); }

    [[nodiscard]] const_iterator begin() const { return entries_.begin(); }
    [[nodiscard]] const_iterator end() const { return entries_.end(); }
    [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }

    /// Copy with one more occurrence of each argument.
    [[nodiscard]] FMultiset with(Formula f) const;
    [[nodiscard]] FMultiset with(std::initializer_list<Formula> fs) const;
    /// Copy with one occurrence of f removed (f must be present).
    [[nodiscard]] FMultiset without(Formula f) const;

    /// Every occurrence, in canonical order.
    [[nodiscard]] std::vector<Formula> occurrences() const;

    [[nodiscard]] std::size_t hash() const;

    /// Disjoint sum.
    friend FMultiset operator+(const FMultiset& a, const FMultiset& b);
    friend bool operator==(const FMultiset& a, const FMultiset& b) { return a.entries_ == b.entries_; }
    friend bool operator!=(const FMultiset& a, const FMultiset& b) { return !(a == b); }

private:
    std::vector<Entry>::iterator find_slot(Formula f);
    [[nodiscard]] std::vector<Entry>::const_iterator find_slot(Formula f) const;

    std::vector<Entry> entries_;
};

/// Keeps non-boxed occurrences and unboxes boxed ones, occurrence-wise.
FMultiset box_inverse(const FMultiset& g);

std::set<std::string> vars(const FMultiset& g);

/// Dershowitz-Manna extension of the weight order to multisets: true iff a
/// is strictly below b.
bool dm_less(const FMultiset& a, const FMultiset& b);

/// Conjunction / disjunction over the distinct members in canonical order,
/// left-nested. Empty conjunction is top, empty disjunction is bottom.
Formula big_and(const FormulaSet& fs);
Formula big_or(const FormulaSet& fs);
/// Disjunction over every occurrence of a multiset (bottom when empty).
Formula big_or(const FMultiset& g);

} // namespace km

template <>
struct std::hash<km::FMultiset> {
    std::size_t operator()(const km::FMultiset& m) const noexcept { return m.hash(); }
};
