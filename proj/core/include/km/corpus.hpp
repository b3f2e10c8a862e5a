#pragma once

#include "km/sequent.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace km {

/// Seeded random formulas and sequents. The same seed and atoms always give
/// the same stream, on every platform.
class CorpusGenerator {
public:
    CorpusGenerator(std::vector<std::string> atoms, std::uint64_t seed);

    /// A formula of weight exactly w (w >= 1).
    Formula formula_exact(std::uint64_t w);
    /// A formula of weight uniform in [1, max_weight].
    Formula formula(std::uint64_t max_weight);
    /// n formulas of weight at most max_weight.
    FMultiset multiset(std::size_t n, std::uint64_t max_weight);
    /// Up to three formulas per side, total weight at most max_total.
    Sequent sequent(std::uint64_t max_total);

    [[nodiscard]] const std::vector<std::string>& atoms() const { return atoms_; }

private:
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }
    Formula leaf();

    std::vector<std::string> atoms_;
    std::mt19937_64 rng_;
};

/// Every formula over the atoms (and bottom, if asked) of weight at most
/// max_weight, ordered by weight then canonical order.
std::vector<Formula> enumerate_formulas(const std::vector<std::string>& atoms, std::uint64_t max_weight,
                                        bool include_bottom = true);

/// Standard atom names p, q, r, s, t, ... (at most 26).
std::vector<std::string> default_atoms(std::size_t n);

} // namespace km
