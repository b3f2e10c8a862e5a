#include "km/algebra.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace km {

namespace {

using Matrix = std::vector<std::vector<bool>>;

std::string el(Element x) { return std::to_string(x); }

std::optional<AlgebraViolation> fail(std::string eq, std::vector<Element> w, std::string msg) {
    return AlgebraViolation{std::move(eq), std::move(w), std::move(msg)};
}

// The greatest element of `cands` under leq, if there is one.
std::optional<Element> greatest(const Matrix& leq, const std::vector<Element>& cands) {
    for (Element g : cands)
        if (std::all_of(cands.begin(), cands.end(), [&](Element c) { return leq[c][g]; }))
            return g;
    return std::nullopt;
}

std::optional<Element> least(const Matrix& leq, const std::vector<Element>& cands) {
    for (Element g : cands)
        if (std::all_of(cands.begin(), cands.end(), [&](Element c) { return leq[g][c]; }))
            return g;
    return std::nullopt;
}

bool is_partial_order(const Matrix& leq) {
    const std::size_t n = leq.size();
    for (const auto& row : leq)
        if (row.size() != n)
            return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (!leq[i][i])
            return false;
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && leq[i][j] && leq[j][i])
                return false;
            if (leq[i][j])
                for (std::size_t k = 0; k < n; ++k)
                    if (leq[j][k] && !leq[i][k])
                        return false;
        }
    }
    return true;
}

// Lattice operations of a partial order, or nullopt if some pair lacks a
// meet or a join.
struct Ops {
    std::vector<std::vector<Element>> meet, join;
};

std::optional<Ops> lattice_ops(const Matrix& leq) {
    const std::size_t n = leq.size();
    Ops o;
    o.meet.assign(n, std::vector<Element>(n));
    o.join.assign(n, std::vector<Element>(n));
    for (Element a = 0; a < n; ++a)
        for (Element b = 0; b < n; ++b) {
            std::vector<Element> lower, upper;
            for (Element c = 0; c < n; ++c) {
                if (leq[c][a] && leq[c][b])
                    lower.push_back(c);
                if (leq[a][c] && leq[b][c])
                    upper.push_back(c);
            }
            auto m = greatest(leq, lower);
            auto j = least(leq, upper);
            if (!m || !j)
                return std::nullopt;
            o.meet[a][b] = *m;
            o.join[a][b] = *j;
        }
    return o;
}

bool distributive(const Ops& o) {
    const std::size_t n = o.meet.size();
    for (Element a = 0; a < n; ++a)
        for (Element b = 0; b < n; ++b)
            for (Element c = 0; c < n; ++c)
                if (o.meet[a][o.join[b][c]] != o.join[o.meet[a][b]][o.meet[a][c]])
                    return false;
    return true;
}

std::uint64_t order_key(const Matrix& leq, const std::vector<std::size_t>& sigma) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < leq.size(); ++i)
        for (std::size_t j = 0; j < leq.size(); ++j)
            key = key << 1 | static_cast<std::uint64_t>(leq[sigma[i]][sigma[j]]);
    return key;
}

std::vector<std::vector<std::size_t>> automorphisms(const Matrix& leq) {
    const std::size_t n = leq.size();
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<std::vector<std::size_t>> out;
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = 0; j < n && ok; ++j)
                ok = leq[sigma[i]][sigma[j]] == leq[i][j];
        if (ok)
            out.push_back(sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

// The box equations only; the lattice part is assumed sound.
std::optional<AlgebraViolation> check_box(const FiniteKMAlgebra& a) {
    const std::size_t n = a.size;
    const Element top = a.top();
    const auto& bx = a.box;
    if (bx[top] != top)
        return fail("box_top", {top}, "box of top is " + el(bx[top]) + ", not top " + el(top));
    for (Element x = 0; x < n; ++x)
        if (!a.le(x, bx[x]))
            return fail("box_unit", {x}, el(x) + " is not below its box " + el(bx[x]));
    for (Element x = 0; x < n; ++x)
        if (a.imp[bx[x]][x] != x)
            return fail("box_imp", {x}, "box " + el(x) + " -> " + el(x) + " is " + el(a.imp[bx[x]][x]));
    for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
            if (a.meet[bx[x]][bx[y]] != bx[a.meet[x][y]])
                return fail("box_meet", {x, y}, "box " + el(x) + " & box " + el(y) + " differs from box of the meet");
    for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
            if (!a.le(bx[x], a.join[y][a.imp[y][x]]))
                return fail("box_strength", {x, y},
                            "box " + el(x) + " is not below " + el(y) + " | (" + el(y) + " -> " + el(x) + ")");
    return std::nullopt;
}

std::vector<FiniteKMAlgebra> algebras_of_size(std::size_t n) {
    std::vector<FiniteKMAlgebra> out;
    for (const Matrix& leq : distributive_lattices(n)) {
        FiniteKMAlgebra base = FiniteKMAlgebra::from_order(leq, std::vector<Element>(n, 0));
        const auto autos = automorphisms(leq);
        std::vector<Element> box(n, 0);
        while (true) {
            base.box = box;
            if (!check_box(base)) {
                // Keep the box only if no automorphism maps it to a smaller one.
                bool canonical = true;
                for (const auto& s : autos) {
                    std::vector<Element> conj(n);
                    for (Element x = 0; x < n; ++x)
                        conj[s[x]] = s[box[x]];
                    if (conj < box) {
                        canonical = false;
                        break;
                    }
                }
                if (canonical)
                    out.push_back(base);
            }
            std::size_t i = n;
            while (i > 0 && ++box[i - 1] == n)
                box[--i] = 0;
            if (i == 0)
                break;
        }
    }
    return out;
}

} // namespace

FiniteKMAlgebra FiniteKMAlgebra::from_order(const Matrix& leq, std::vector<Element> box) {
    const std::size_t n = leq.size();
    if (n == 0)
        throw std::invalid_argument("the carrier must not be empty");
    if (!is_partial_order(leq))
        throw std::invalid_argument("leq is not a partial order");
    auto ops = lattice_ops(leq);
    if (!ops)
        throw std::invalid_argument("the order is not a lattice");
    if (box.size() != n)
        throw std::invalid_argument("box has " + std::to_string(box.size()) + " entries, expected " + std::to_string(n));
    for (Element x : box)
        if (x >= n)
            throw std::invalid_argument("box value " + el(x) + " is outside the carrier");
    FiniteKMAlgebra a;
    a.size = n;
    a.meet = std::move(ops->meet);
    a.join = std::move(ops->join);
    std::vector<Element> all(n);
    std::iota(all.begin(), all.end(), 0);
    a.bot = *least(leq, all);
    a.imp.assign(n, std::vector<Element>(n));
    for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y) {
            std::vector<Element> cands;
            for (Element c = 0; c < n; ++c)
                if (leq[a.meet[c][x]][y])
                    cands.push_back(c);
            auto g = greatest(leq, cands);
            if (!g)
                throw std::invalid_argument("no Heyting implication " + el(x) + " -> " + el(y));
            a.imp[x][y] = *g;
        }
    a.box = std::move(box);
    return a;
}

Matrix FiniteKMAlgebra::order() const {
    Matrix m(size, std::vector<bool>(size));
    for (Element x = 0; x < size; ++x)
        for (Element y = 0; y < size; ++y)
            m[x][y] = le(x, y);
    return m;
}

std::optional<AlgebraViolation> validate_algebra(const FiniteKMAlgebra& a) {
    const std::size_t n = a.size;
    auto square = [n](const std::vector<std::vector<Element>>& t) {
        return t.size() == n && std::all_of(t.begin(), t.end(), [n](const auto& row) {
                   return row.size() == n &&
                          std::all_of(row.begin(), row.end(), [n](Element x) { return x < n; });
               });
    };
    if (n == 0)
        return fail("shape", {}, "the carrier is empty");
    if (!square(a.meet) || !square(a.join) || !square(a.imp))
        return fail("shape", {}, "operation tables must be " + el(n) + "x" + el(n) + " over the carrier");
    if (a.bot >= n || a.box.size() != n ||
        !std::all_of(a.box.begin(), a.box.end(), [n](Element x) { return x < n; }))
        return fail("shape", {}, "bot and box must lie in the carrier");

    const auto& m = a.meet;
    const auto& j = a.join;
    for (Element x = 0; x < n; ++x) {
        if (m[x][x] != x || j[x][x] != x)
            return fail("idempotence", {x}, "meet or join of " + el(x) + " with itself");
        for (Element y = 0; y < n; ++y) {
            if (m[x][y] != m[y][x] || j[x][y] != j[y][x])
                return fail("commutativity", {x, y}, "meet or join of " + el(x) + ", " + el(y));
            if (m[x][j[x][y]] != x || j[x][m[x][y]] != x)
                return fail("absorption", {x, y}, "absorption fails for " + el(x) + ", " + el(y));
            for (Element z = 0; z < n; ++z) {
                if (m[x][m[y][z]] != m[m[x][y]][z] || j[x][j[y][z]] != j[j[x][y]][z])
                    return fail("associativity", {x, y, z}, "meet or join not associative");
                if (m[x][j[y][z]] != j[m[x][y]][m[x][z]])
                    return fail("distributivity", {x, y, z},
                                el(x) + " & (" + el(y) + " | " + el(z) + ") differs from the distributed form");
            }
        }
    }
    for (Element x = 0; x < n; ++x)
        if (m[a.bot][x] != a.bot)
            return fail("bottom", {x}, "bot is not below " + el(x));
    for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
            for (Element z = 0; z < n; ++z)
                if (a.le(m[x][y], z) != a.le(x, a.imp[y][z]))
                    return fail("residuation", {x, y, z},
                                el(x) + " & " + el(y) + " <= " + el(z) + " disagrees with " + el(x) + " <= " + el(y) +
                                    " -> " + el(z));
    for (Element x = 0; x < n; ++x)
        if (!a.le(x, a.top()))
            return fail("top", {x}, el(x) + " is not below bot -> bot");
    return check_box(a);
}

Element evaluate(const FiniteKMAlgebra& a, const Valuation& v, Formula f) {
    std::unordered_map<const void*, Element> memo;
    auto go = [&](auto& self, Formula g) -> Element {
        if (auto it = memo.find(g.node()); it != memo.end())
            return it->second;
        Element r = 0;
        switch (g.kind()) {
        case Kind::Atom: {
            auto it = v.find(g.name());
            if (it == v.end())
                throw std::out_of_range("atom " + g.name() + " has no value");
            if (it->second >= a.size)
                throw std::out_of_range("value of " + g.name() + " is outside the carrier");
            r = it->second;
            break;
        }
        case Kind::Bottom:
            r = a.bot;
            break;
        case Kind::And:
            r = a.meet[self(self, g.left())][self(self, g.right())];
            break;
        case Kind::Or:
            r = a.join[self(self, g.left())][self(self, g.right())];
            break;
        case Kind::Imp:
            r = a.imp[self(self, g.left())][self(self, g.right())];
            break;
        case Kind::Box:
            r = a.box[self(self, g.body())];
            break;
        }
        memo.emplace(g.node(), r);
        return r;
    };
    return go(go, f);
}

std::optional<AlgebraCounterexample> algebra_counterexample(const std::vector<FiniteKMAlgebra>& algebras,
                                                            const std::vector<Formula>& gamma, Formula f) {
    std::set<std::string> names = vars(f);
    for (Formula g : gamma)
        for (const auto& p : vars(g))
            names.insert(p);
    const std::vector<std::string> atoms(names.begin(), names.end());
    for (std::size_t i = 0; i < algebras.size(); ++i) {
        const FiniteKMAlgebra& a = algebras[i];
        std::vector<Element> pick(atoms.size(), 0);
        while (true) {
            Valuation v;
            for (std::size_t k = 0; k < atoms.size(); ++k)
                v[atoms[k]] = pick[k];
            const Element top = a.top();
            bool premises = std::all_of(gamma.begin(), gamma.end(), [&](Formula g) { return evaluate(a, v, g) == top; });
            if (premises && evaluate(a, v, f) != top)
                return AlgebraCounterexample{i, v};
            std::size_t k = atoms.size();
            while (k > 0 && ++pick[k - 1] == a.size)
                pick[--k] = 0;
            if (k == 0)
                break;
        }
    }
    return std::nullopt;
}

std::vector<Matrix> distributive_lattices(std::size_t n) {
    if (n == 0)
        return {};
    // Pairs i < j strictly inside (0, n-1) are free; 0 is the least and
    // n-1 the greatest element.
    std::vector<std::pair<std::size_t, std::size_t>> free;
    for (std::size_t i = 1; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j + 1 < n; ++j)
            free.emplace_back(i, j);
    std::vector<Matrix> out;
    std::set<std::uint64_t> seen;
    std::vector<std::size_t> sigma(n);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free.size()); ++bits) {
        Matrix leq(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i) {
            leq[i][i] = true;
            leq[0][i] = true;
            leq[i][n - 1] = true;
        }
        for (std::size_t k = 0; k < free.size(); ++k)
            if (bits >> k & 1)
                leq[free[k].first][free[k].second] = true;
        if (!is_partial_order(leq))
            continue;
        auto ops = lattice_ops(leq);
        if (!ops || !distributive(*ops))
            continue;
        std::iota(sigma.begin(), sigma.end(), 0);
        std::uint64_t key = order_key(leq, sigma);
        while (std::next_permutation(sigma.begin(), sigma.end()))
            key = std::min(key, order_key(leq, sigma));
        if (seen.insert(key).second)
            out.push_back(std::move(leq));
    }
    return out;
}

const std::vector<FiniteKMAlgebra>& enumerate_km_algebras(std::size_t max_size) {
    if (max_size == 0 || max_size > kMaxAlgebraSize)
        throw std::invalid_argument("algebras are enumerated for 1 to " + std::to_string(kMaxAlgebraSize) +
                                    " elements");
    static std::array<std::once_flag, kMaxAlgebraSize + 1> once;
    static std::array<std::vector<FiniteKMAlgebra>, kMaxAlgebraSize + 1> upto;
    std::call_once(once[max_size], [max_size] {
        std::vector<FiniteKMAlgebra> all;
        for (std::size_t n = 1; n <= max_size; ++n) {
            auto part = algebras_of_size(n);
            all.insert(all.end(), part.begin(), part.end());
        }
        upto[max_size] = std::move(all);
    });
    return upto[max_size];
}

std::string algebra_to_json(const FiniteKMAlgebra& a, int indent) {
    nlohmann::ordered_json j;
    j["size"] = a.size;
    j["leq"] = nlohmann::ordered_json::array();
    for (const auto& row : a.order()) {
        auto r = nlohmann::ordered_json::array();
        for (bool b : row)
            r.push_back(b);
        j["leq"].push_back(r);
    }
    j["box"] = a.box;
    j["bot"] = a.bot;
    return j.dump(indent);
}

FiniteKMAlgebra algebra_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("leq") || !j.contains("box"))
        throw std::invalid_argument("algebra needs \"leq\" and \"box\"");
    Matrix leq;
    std::vector<Element> box;
    try {
        for (const auto& row : j.at("leq")) {
            std::vector<bool> r;
            for (const auto& b : row)
                r.push_back(b.is_boolean() ? b.get<bool>() : b.get<int>() != 0);
            leq.push_back(std::move(r));
        }
        box = j.at("box").get<std::vector<Element>>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad algebra field: ") + e.what());
    }
    if (j.contains("size") && j["size"] != leq.size())
        throw std::invalid_argument("\"size\" does not match \"leq\"");
    FiniteKMAlgebra a = FiniteKMAlgebra::from_order(leq, std::move(box));
    if (j.contains("bot") && j["bot"] != a.bot)
        throw std::invalid_argument("\"bot\" is not the least element of \"leq\"");
    return a;
}

} // namespace km
