#include "km/corpus.hpp"

#include <algorithm>
#include <stdexcept>

namespace km {

CorpusGenerator::CorpusGenerator(std::vector<std::string> atoms, std::uint64_t seed)
    : atoms_(std::move(atoms)), rng_(seed) {
    if (atoms_.empty())
        throw std::invalid_argument("corpus generator needs at least one atom");
}

Formula CorpusGenerator::leaf() {
    // Bottom appears about one time in eight.
    if (below(8) == 0)
        return Formula::bottom();
    return Formula::atom(atoms_[below(atoms_.size())]);
}

Formula CorpusGenerator::formula_exact(std::uint64_t w) {
    if (w == 0)
        throw std::invalid_argument("weight must be positive");
    if (w == 1)
        return leaf();
    // Candidate top connectives that can reach weight w.
    enum Top { Box, Imp, Or, And };
    std::vector<Top> options{Box};
    if (w >= 3) {
        options.push_back(Imp);
        options.push_back(Imp);
        options.push_back(Or);
    }
    if (w >= 4)
        options.push_back(And);
    Top top = options[below(options.size())];
    if (top == Box)
        return Formula::box(formula_exact(w - 1));
    std::uint64_t inner = w - (top == And ? 2 : 1);
    std::uint64_t lw = 1 + below(inner - 1);
    Formula l = formula_exact(lw);
    Formula r = formula_exact(inner - lw);
    switch (top) {
    case Imp:
        return Formula::imp(l, r);
    case Or:
        return Formula::disj(l, r);
    default:
        return Formula::conj(l, r);
    }
}

Formula CorpusGenerator::formula(std::uint64_t max_weight) { return formula_exact(1 + below(max_weight)); }

FMultiset CorpusGenerator::multiset(std::size_t n, std::uint64_t max_weight) {
    FMultiset out;
    for (std::size_t i = 0; i < n; ++i)
        out.insert(formula(max_weight));
    return out;
}

Sequent CorpusGenerator::sequent(std::uint64_t max_total) {
    std::size_t nl = below(4), nr = below(3);
    if (nl + nr == 0)
        nr = 1;
    std::uint64_t share = std::max<std::uint64_t>(1, max_total / (nl + nr));
    Sequent s;
    for (std::size_t i = 0; i < nl; ++i)
        s.lhs.insert(formula(share));
    for (std::size_t i = 0; i < nr; ++i)
        s.rhs.insert(formula(share));
    return s;
}

std::vector<Formula> enumerate_formulas(const std::vector<std::string>& atoms, std::uint64_t max_weight,
                                        bool include_bottom) {
    std::vector<std::vector<Formula>> by_weight(max_weight + 1);
    if (max_weight >= 1) {
        if (include_bottom)
            by_weight[1].push_back(Formula::bottom());
        for (const auto& a : atoms)
            by_weight[1].push_back(Formula::atom(a));
    }
    for (std::uint64_t w = 2; w <= max_weight; ++w) {
        auto& out = by_weight[w];
        for (Formula f : by_weight[w - 1])
            out.push_back(Formula::box(f));
        for (std::uint64_t lw = 1; lw + 1 < w; ++lw)
            for (Formula l : by_weight[lw])
                for (Formula r : by_weight[w - 1 - lw]) {
                    out.push_back(Formula::imp(l, r));
                    out.push_back(Formula::disj(l, r));
                }
        for (std::uint64_t lw = 1; lw + 2 < w; ++lw)
            for (Formula l : by_weight[lw])
                for (Formula r : by_weight[w - 2 - lw])
                    out.push_back(Formula::conj(l, r));
        std::sort(out.begin(), out.end(), FormulaLess{});
    }
    std::vector<Formula> all;
    for (auto& v : by_weight)
        all.insert(all.end(), v.begin(), v.end());
    return all;
}

std::vector<std::string> default_atoms(std::size_t n) {
    static const char* names[] = {"p", "q", "r", "s", "t", "u", "v", "w", "x", "y", "z"};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(i < std::size(names) ? names[i] : "a" + std::to_string(i));
    return out;
}

} // namespace km
