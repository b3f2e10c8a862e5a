#include "km/formula.hpp"

#include <cctype>
#include <deque>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace km {

namespace detail {

struct Node {
    Kind kind;
    const Node* left;
    const Node* right;
    std::string name;
    std::uint64_t weight;
    std::size_t hash;
};

} // namespace detail

namespace {

using detail::Node;

std::size_t mix(std::size_t seed, std::size_t v) {
    // boost::hash_combine with a 64-bit constant
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::uint64_t add_sat(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = a + b;
    return r < a ? std::numeric_limits<std::uint64_t>::max() : r;
}

struct NodeKeyHash {
    using is_transparent = void;
    std::size_t operator()(const Node* n) const { return n->hash; }
};

struct NodeKeyEq {
    bool operator()(const Node* a, const Node* b) const {
        return a->kind == b->kind && a->left == b->left && a->right == b->right && a->name == b->name;
    }
};

class InternTable {
public:
    const Node* intern(Kind kind, const Node* l, const Node* r, std::string_view name) {
        Node probe{kind, l, r, std::string(name), 0, 0};
        probe.hash = structural_hash(probe);
        std::lock_guard lock(mu_);
        if (auto it = table_.find(&probe); it != table_.end())
            return *it;
        probe.weight = compute_weight(probe);
        const Node* stored = &storage_.emplace_back(std::move(probe));
        table_.insert(stored);
        return stored;
    }

private:
    static std::size_t structural_hash(const Node& n) {
        std::size_t h = std::hash<int>{}(static_cast<int>(n.kind)) * 0x100000001b3ULL;
        if (n.kind == Kind::Atom)
            h = mix(h, std::hash<std::string>{}(n.name));
        if (n.left)
            h = mix(h, n.left->hash);
        if (n.right)
            h = mix(h, n.right->hash);
        return h;
    }

    static std::uint64_t compute_weight(const Node& n) {
        switch (n.kind) {
        case Kind::Atom:
        case Kind::Bottom:
            return 1;
        case Kind::Box:
            return add_sat(1, n.left->weight);
        case Kind::And:
            return add_sat(2, add_sat(n.left->weight, n.right->weight));
        case Kind::Or:
        case Kind::Imp:
            return add_sat(1, add_sat(n.left->weight, n.right->weight));
        }
        return 1;
    }

    std::mutex mu_;
    std::deque<Node> storage_;
    std::unordered_set<const Node*, NodeKeyHash, NodeKeyEq> table_;
};

InternTable& table() {
    static InternTable t;
    return t;
}

const Node* bottom_node() {
    static const Node* n = table().intern(Kind::Bottom, nullptr, nullptr, {});
    return n;
}

bool is_identifier(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])))
        return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return s != "box" && s != "false" && s != "true";
}

int compare_nodes(const Node* a, const Node* b) {
    while (a != b) {
        if (a->kind != b->kind)
            return a->kind < b->kind ? -1 : 1;
        switch (a->kind) {
        case Kind::Atom:
            return a->name < b->name ? -1 : 1;
        case Kind::Bottom:
            return 0;
        case Kind::Box:
            a = a->left;
            b = b->left;
            continue;
        default:
            if (a->left != b->left) {
                a = a->left;
                b = b->left;
            } else {
                a = a->right;
                b = b->right;
            }
        }
    }
    return 0;
}

} // namespace

Formula::Formula() : Formula(bottom_node()) {}

Formula::Formula(const detail::Node* n) : node_(n), hash_(n->hash) {}

Formula Formula::atom(std::string_view name) {
    if (!is_identifier(name))
        throw std::invalid_argument("invalid atom name '" + std::string(name) + "'");
    return Formula(table().intern(Kind::Atom, nullptr, nullptr, name));
}

Formula Formula::bottom() { return Formula(bottom_node()); }

Formula Formula::top() { return imp(bottom(), bottom()); }

Formula Formula::conj(Formula l, Formula r) { return Formula(table().intern(Kind::And, l.node_, r.node_, {})); }

Formula Formula::disj(Formula l, Formula r) { return Formula(table().intern(Kind::Or, l.node_, r.node_, {})); }

Formula Formula::imp(Formula l, Formula r) { return Formula(table().intern(Kind::Imp, l.node_, r.node_, {})); }

Formula Formula::box(Formula f) { return Formula(table().intern(Kind::Box, f.node_, nullptr, {})); }

Kind Formula::kind() const { return node_->kind; }

const std::string& Formula::name() const { return node_->name; }

Formula Formula::left() const {
    if (!node_->right)
        throw std::logic_error("left() on a non-binary formula");
    return Formula(node_->left);
}

Formula Formula::right() const {
    if (!node_->right)
        throw std::logic_error("right() on a non-binary formula");
    return Formula(node_->right);
}

Formula Formula::body() const {
    if (node_->kind != Kind::Box)
        throw std::logic_error("body() on a non-box formula");
    return Formula(node_->left);
}

std::uint64_t Formula::weight() const { return node_->weight; }

int compare(Formula a, Formula b) { return compare_nodes(a.node(), b.node()); }

namespace {

template <typename Visit>
void walk_dag(Formula root, Visit&& visit) {
    std::unordered_set<const Node*> seen;
    std::vector<const Node*> stack{root.node()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second)
            continue;
        visit(n);
        if (n->left)
            stack.push_back(n->left);
        if (n->right)
            stack.push_back(n->right);
    }
}

} // namespace

std::set<std::string> vars(Formula f) {
    std::set<std::string> out;
    walk_dag(f, [&](const Node* n) {
        if (n->kind == Kind::Atom)
            out.insert(n->name);
    });
    return out;
}

std::size_t dag_size(Formula f) {
    std::size_t count = 0;
    walk_dag(f, [&](const Node*) { ++count; });
    return count;
}

FormulaSet subformulas(Formula f) {
    FormulaSet out;
    std::unordered_set<const Node*> seen;
    std::vector<Formula> stack{f};
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        if (!seen.insert(g.node()).second)
            continue;
        out.insert(g);
        if (g.is_box())
            stack.push_back(g.body());
        else if (!g.is_atom() && !g.is_bottom()) {
            stack.push_back(g.left());
            stack.push_back(g.right());
        }
    }
    return out;
}

} // namespace km
