#include "km/multiset.hpp"

#include <algorithm>
#include <stdexcept>

namespace km {

namespace {

bool entry_less(const FMultiset::Entry& e, Formula f) { return compare(e.first, f) < 0; }

} // namespace

FMultiset::FMultiset(std::initializer_list<Formula> items) {
    for (Formula f : items)
        insert(f);
}

FMultiset::FMultiset(const std::vector<Formula>& items) {
    for (Formula f : items)
        insert(f);
}

std::vector<FMultiset::Entry>::iterator FMultiset::find_slot(Formula f) {
    return std::lower_bound(entries_.begin(), entries_.end(), f, entry_less);
}

std::vector<FMultiset::Entry>::const_iterator FMultiset::find_slot(Formula f) const {
    return std::lower_bound(entries_.begin(), entries_.end(), f, entry_less);
}

void FMultiset::insert(Formula f, std::uint32_t n) {
    if (n == 0)
        return;
    auto it = find_slot(f);
    if (it != entries_.end() && it->first == f)
        it->second += n;
    else
        entries_.insert(it, {f, n});
}

bool FMultiset::erase_one(Formula f) {
    auto it = find_slot(f);
    if (it == entries_.end() || it->first != f)
        return false;
    if (--it->second == 0)
        entries_.erase(it);
    return true;
}

std::uint32_t FMultiset::count(Formula f) const {
    auto it = find_slot(f);
    return it != entries_.end() && it->first == f ? it->second : 0;
}

std::size_t FMultiset::size() const {
    std::size_t n = 0;
    for (const auto& [f, c] : entries_)
        n += c;
    return n;
}

FMultiset FMultiset::with(Formula f) const {
    FMultiset out = *this;
    out.insert(f);
    return out;
}

FMultiset FMultiset::with(std::initializer_list<Formula> fs) const {
    FMultiset out = *this;
    for (Formula f : fs)
        out.insert(f);
    return out;
}

FMultiset FMultiset::without(Formula f) const {
    FMultiset out = *this;
    if (!out.erase_one(f))
        throw std::logic_error("FMultiset::without: formula not present");
    return out;
}

std::vector<Formula> FMultiset::occurrences() const {
    std::vector<Formula> out;
    out.reserve(size());
    for (const auto& [f, c] : entries_)
        out.insert(out.end(), c, f);
    return out;
}

std::size_t FMultiset::hash() const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& [f, c] : entries_) {
        h ^= f.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= c + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

FMultiset operator+(const FMultiset& a, const FMultiset& b) {
    FMultiset out = a;
    for (const auto& [f, c] : b)
        out.insert(f, c);
    return out;
}

FMultiset box_inverse(const FMultiset& g) {
    FMultiset out;
    for (const auto& [f, c] : g)
        out.insert(f.is_box() ? f.body() : f, c);
    return out;
}

std::set<std::string> vars(const FMultiset& g) {
    std::set<std::string> out;
    for (const auto& [f, c] : g)
        out.merge(vars(f));
    return out;
}

bool dm_less(const FMultiset& a, const FMultiset& b) {
    // Cancel common occurrences; a < b iff something of b survives and
    // every survivor of a is lighter than some survivor of b.
    std::uint64_t max_a = 0;
    std::uint64_t max_b = 0;
    bool b_left = false;
    auto ia = a.begin();
    auto ib = b.begin();
    auto note_a = [&](Formula f) { max_a = std::max(max_a, f.weight()); };
    auto note_b = [&](Formula f) {
        max_b = std::max(max_b, f.weight());
        b_left = true;
    };
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && compare(ia->first, ib->first) < 0)) {
            note_a(ia->first);
            ++ia;
        } else if (ia == a.end() || compare(ib->first, ia->first) < 0) {
            note_b(ib->first);
            ++ib;
        } else {
            if (ia->second > ib->second)
                note_a(ia->first);
            else if (ib->second > ia->second)
                note_b(ib->first);
            ++ia;
            ++ib;
        }
    }
    return b_left && max_a < max_b;
}

Formula big_and(const FormulaSet& fs) {
    if (fs.empty())
        return Formula::top();
    auto it = fs.begin();
    Formula acc = *it;
    for (++it; it != fs.end(); ++it)
        acc = Formula::conj(acc, *it);
    return acc;
}

Formula big_or(const FormulaSet& fs) {
    if (fs.empty())
        return Formula::bottom();
    auto it = fs.begin();
    Formula acc = *it;
    for (++it; it != fs.end(); ++it)
        acc = Formula::disj(acc, *it);
    return acc;
}

Formula big_or(const FMultiset& g) {
    auto occ = g.occurrences();
    if (occ.empty())
        return Formula::bottom();
    Formula acc = occ.front();
    for (std::size_t i = 1; i < occ.size(); ++i)
        acc = Formula::disj(acc, occ[i]);
    return acc;
}

} // namespace km
