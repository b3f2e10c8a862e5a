#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>

namespace km {

enum class Kind : std::uint8_t { Atom, Bottom, And, Or, Imp, Box };

namespace detail {
struct Node;
}

/// Immutable, hash-consed modal formula.
///
/// Structurally equal formulas share one node, so equality is a pointer
/// comparison and copying a Formula is free. Nodes live for the whole
/// process; the intern table is guarded by a mutex, so formulas can be
/// built and read from any thread.
class Formula {
public:
    /// Defaults to bottom.
    Formula();

    static Formula atom(std::string_view name);
    static Formula bottom();
    /// Top is not primitive: it is bottom -> bottom.
    static Formula top();
    static Formula conj(Formula l, Formula r);
    static Formula disj(Formula l, Formula r);
    static Formula imp(Formula l, Formula r);
    static Formula box(Formula f);
    static Formula neg(Formula f) { return imp(f, bottom()); }

    [[nodiscard]] Kind kind() const;
    [[nodiscard]] bool is(Kind k) const { return kind() == k; }
    [[nodiscard]] bool is_atom() const { return is(Kind::Atom); }
    [[nodiscard]] bool is_bottom() const { return is(Kind::Bottom); }
    [[nodiscard]] bool is_box() const { return is(Kind::Box); }
    [[nodiscard]] bool is_imp() const { return is(Kind::Imp); }

    /// Atom name; empty for other kinds.
    [[nodiscard]] const std::string& name() const;
    /// Children of a binary connective.
    [[nodiscard]] Formula left() const;
    [[nodiscard]] Formula right() const;
    /// Operand of a box.
    [[nodiscard]] Formula body() const;

    /// Symbol count with conjunctions counted twice. Saturates at UINT64_MAX
    /// for very large shared DAGs.
    [[nodiscard]] std::uint64_t weight() const;
    /// Structural hash, stable across runs.
    [[nodiscard]] std::size_t hash() const { return hash_; }
    [[nodiscard]] const detail::Node* node() const { return node_; }

    friend bool operator==(Formula a, Formula b) { return a.node_ == b.node_; }
    friend bool operator!=(Formula a, Formula b) { return a.node_ != b.node_; }

private:
    explicit Formula(const detail::Node* n);
    const detail::Node* node_;
    std::size_t hash_;
};

/// Canonical total order: constructor tag first, then atom name or children
/// left to right. Returns <0, 0 or >0.
int compare(Formula a, Formula b);

struct FormulaLess {
    bool operator()(Formula a, Formula b) const { return compare(a, b) < 0; }
};

using FormulaSet = std::set<Formula, FormulaLess>;

/// Weight per the structural recursion: atoms and bottom 1, box and binary
/// connectives add 1, conjunction adds 2.
inline std::uint64_t weight(Formula f) { return f.weight(); }

std::set<std::string> vars(Formula f);

/// Number of distinct nodes reachable from f (the DAG size).
std::size_t dag_size(Formula f);

/// All distinct subformulas of f, including f itself.
FormulaSet subformulas(Formula f);

} // namespace km

template <>
struct std::hash<km::Formula> {
    std::size_t operator()(km::Formula f) const noexcept { return f.hash(); }
};
