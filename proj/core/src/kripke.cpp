#include "km/kripke.hpp"

#include "km/parser.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace km {

namespace {

using Matrix = std::vector<std::vector<bool>>;

std::uint64_t up_mask(const Matrix& leq, std::size_t w) {
    std::uint64_t m = 0;
    for (std::size_t v = 0; v < leq.size(); ++v)
        if (leq[w][v])
            m |= std::uint64_t{1} << v;
    return m;
}

std::uint64_t strict_mask(const Matrix& leq, std::size_t w) {
    std::uint64_t m = 0;
    for (std::size_t v = 0; v < leq.size(); ++v)
        if (leq[w][v] && !leq[v][w])
            m |= std::uint64_t{1} << v;
    return m;
}

std::uint64_t low_bits(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

// Extends every labeled preorder on k worlds rooted at 0 by world k.
// Transitivity holds iff the worlds below k form a down-set, the worlds
// above k an up-set, and everything below k is below everything above it.
void extend(Matrix& m, std::size_t k, std::size_t n, std::vector<Matrix>& out) {
    if (k == n) {
        out.push_back(m);
        return;
    }
    const std::uint64_t full = low_bits(k);
    std::vector<std::uint64_t> up(k);
    std::vector<std::uint64_t> down(k, 0);
    for (std::size_t w = 0; w < k; ++w) {
        up[w] = up_mask(m, w) & full;
        for (std::size_t v = 0; v < k; ++v)
            if (m[v][w])
                down[w] |= std::uint64_t{1} << v;
    }
    for (std::uint64_t d = 0; d <= full; ++d) {
        if (!(d & 1))
            continue; // the root stays below every world
        bool closed = true;
        for (std::size_t w = 0; w < k && closed; ++w)
            if (d >> w & 1)
                closed = (down[w] & ~d) == 0;
        if (!closed)
            continue;
        for (std::uint64_t u = 0; u <= full; ++u) {
            bool ok = true;
            for (std::size_t w = 0; w < k && ok; ++w) {
                if (u >> w & 1)
                    ok = (up[w] & ~u) == 0;
                if (ok && (d >> w & 1))
                    ok = (up[w] & u) == u;
            }
            if (!ok)
                continue;
            for (std::size_t w = 0; w < k; ++w) {
                m[w][k] = d >> w & 1;
                m[k][w] = u >> w & 1;
            }
            m[k][k] = true;
            extend(m, k + 1, n, out);
        }
    }
}

std::uint64_t key_under(const Matrix& m, const std::vector<std::size_t>& sigma) {
    std::uint64_t key = 0;
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            key = key << 1 | static_cast<std::uint64_t>(m[sigma[i]][sigma[j]]);
    return key;
}

// One representative per isomorphism class. Worlds are first required to be
// sorted by (more worlds above, fewer worlds below); any isomorphism between
// two sorted matrices preserves these blocks, so the representative is the
// sorted matrix with the least key under block-preserving permutations.
std::vector<Matrix> compute_frames(std::size_t n) {
    Matrix start(n, std::vector<bool>(n, false));
    start[0][0] = true;
    std::vector<Matrix> labeled;
    extend(start, 1, n, labeled);

    std::vector<Matrix> out;
    for (const Matrix& m : labeled) {
        std::vector<std::pair<int, int>> sig(n);
        for (std::size_t w = 0; w < n; ++w) {
            int above = std::popcount(up_mask(m, w));
            int below = 0;
            for (std::size_t v = 0; v < n; ++v)
                below += m[v][w];
            sig[w] = {-above, below};
        }
        if (!std::is_sorted(sig.begin(), sig.end()))
            continue;
        std::vector<std::size_t> sigma(n);
        std::iota(sigma.begin(), sigma.end(), 0);
        const std::uint64_t own = key_under(m, sigma);
        bool least = true;
        // Permute within runs of equal signature only.
        auto next_block_perm = [&]() {
            std::size_t end = n;
            while (end > 0) {
                std::size_t begin = end - 1;
                while (begin > 0 && sig[begin - 1] == sig[end - 1])
                    --begin;
                if (std::next_permutation(sigma.begin() + static_cast<std::ptrdiff_t>(begin),
                                          sigma.begin() + static_cast<std::ptrdiff_t>(end)))
                    return true;
                end = begin;
            }
            return false;
        };
        while (least && next_block_perm())
            least = key_under(m, sigma) >= own;
        if (least)
            out.push_back(m);
    }
    return out;
}

struct FrameMasks {
    std::vector<std::uint64_t> up;
    std::vector<std::uint64_t> succ;
    std::vector<std::uint64_t> upsets;
};

// Distinct subformulas, children before parents.
void post_order(Formula f, std::unordered_map<const void*, std::size_t>& index, std::vector<Formula>& out) {
    if (index.count(f.node()))
        return;
    switch (f.kind()) {
    case Kind::And:
    case Kind::Or:
    case Kind::Imp:
        post_order(f.left(), index, out);
        post_order(f.right(), index, out);
        break;
    case Kind::Box:
        post_order(f.body(), index, out);
        break;
    default:
        break;
    }
    index.emplace(f.node(), out.size());
    out.push_back(f);
}

std::uint64_t imp_truth(const std::vector<std::uint64_t>& up, std::uint64_t a, std::uint64_t b) {
    std::uint64_t t = 0;
    const std::uint64_t bad = a & ~b;
    for (std::size_t w = 0; w < up.size(); ++w)
        if ((up[w] & bad) == 0)
            t |= std::uint64_t{1} << w;
    return t;
}

std::uint64_t box_truth(const std::vector<std::uint64_t>& succ, std::uint64_t b) {
    std::uint64_t t = 0;
    for (std::size_t w = 0; w < succ.size(); ++w)
        if ((succ[w] & ~b) == 0)
            t |= std::uint64_t{1} << w;
    return t;
}

} // namespace

bool FiniteModel::holds(const std::string& atom, std::size_t w) const {
    auto it = val.find(atom);
    return it != val.end() && it->second.count(w) > 0;
}

FiniteModel FiniteModel::discrete(std::size_t n) {
    FiniteModel m;
    m.worlds = n;
    m.leq.assign(n, std::vector<bool>(n, false));
    for (std::size_t w = 0; w < n; ++w)
        m.leq[w][w] = true;
    return m;
}

std::optional<ModelViolation> validate_model(const FiniteModel& m) {
    const std::size_t n = m.worlds;
    if (m.leq.size() != n)
        return ModelViolation{"shape", 0, 0, 0, "", "leq has " + std::to_string(m.leq.size()) + " rows, expected " +
                                                        std::to_string(n)};
    for (std::size_t w = 0; w < n; ++w)
        if (m.leq[w].size() != n)
            return ModelViolation{"shape", w, 0, 0, "", "leq row " + std::to_string(w) + " has wrong length"};
    for (std::size_t w = 0; w < n; ++w)
        if (!m.leq[w][w])
            return ModelViolation{"reflexivity", w, w, 0, "", "world " + std::to_string(w) + " is not below itself"};
    for (std::size_t w = 0; w < n; ++w)
        for (std::size_t v = 0; v < n; ++v)
            if (m.leq[w][v])
                for (std::size_t u = 0; u < n; ++u)
                    if (m.leq[v][u] && !m.leq[w][u])
                        return ModelViolation{"transitivity", w, v, u, "",
                                              std::to_string(w) + " <= " + std::to_string(v) + " <= " +
                                                  std::to_string(u) + " but not " + std::to_string(w) +
                                                  " <= " + std::to_string(u)};
    for (const auto& [p, ws] : m.val)
        for (std::size_t w : ws)
            if (w >= n)
                return ModelViolation{"range", w, 0, 0, p, "atom " + p + " holds at missing world " + std::to_string(w)};
    for (const auto& [p, ws] : m.val)
        for (std::size_t w : ws)
            for (std::size_t v = 0; v < n; ++v)
                if (m.leq[w][v] && !ws.count(v))
                    return ModelViolation{"persistence", w, v, 0, p,
                                          "atom " + p + " holds at " + std::to_string(w) + " but not at " +
                                              std::to_string(v) + " above it"};
    return std::nullopt;
}

ModelEvaluator::ModelEvaluator(const FiniteModel& m) : model_(m) {
    if (m.worlds > kMaxModelWorlds)
        throw std::invalid_argument("model has more than " + std::to_string(kMaxModelWorlds) + " worlds");
    if (auto bad = validate_model(m))
        throw std::invalid_argument("invalid model: " + bad->message);
    all_ = low_bits(m.worlds);
    for (std::size_t w = 0; w < m.worlds; ++w) {
        up_.push_back(up_mask(m.leq, w));
        succ_.push_back(strict_mask(m.leq, w));
    }
}

std::uint64_t ModelEvaluator::truth(Formula f) {
    if (auto it = cache_.find(f.node()); it != cache_.end())
        return it->second;
    std::uint64_t t = 0;
    switch (f.kind()) {
    case Kind::Atom:
        if (auto it = model_.val.find(f.name()); it != model_.val.end())
            for (std::size_t w : it->second)
                t |= std::uint64_t{1} << w;
        break;
    case Kind::Bottom:
        break;
    case Kind::And:
        t = truth(f.left()) & truth(f.right());
        break;
    case Kind::Or:
        t = truth(f.left()) | truth(f.right());
        break;
    case Kind::Imp:
        t = imp_truth(up_, truth(f.left()), truth(f.right()));
        break;
    case Kind::Box:
        t = box_truth(succ_, truth(f.body()));
        break;
    }
    cache_.emplace(f.node(), t);
    return t;
}

std::uint64_t ModelEvaluator::truth_all(const FMultiset& g) {
    std::uint64_t t = all_;
    for (const auto& [f, n] : g)
        t &= truth(f);
    return t;
}

std::uint64_t ModelEvaluator::truth_any(const FMultiset& g) {
    std::uint64_t t = 0;
    for (const auto& [f, n] : g)
        t |= truth(f);
    return t;
}

bool forces(const FiniteModel& m, std::size_t w, Formula f) {
    if (w >= m.worlds)
        throw std::out_of_range("world " + std::to_string(w) + " is not in the model");
    ModelEvaluator ev(m);
    return ev.forces(w, f);
}

ValidityVerdict sequent_valid_on(const FiniteModel& m, const Sequent& s) {
    ModelEvaluator ev(m);
    const std::uint64_t bad = ev.truth_all(s.lhs) & ~ev.truth_any(s.rhs) & low_bits(m.worlds);
    if (bad == 0)
        return {};
    return {static_cast<std::size_t>(std::countr_zero(bad))};
}

const std::vector<Matrix>& rooted_frames(std::size_t n) {
    if (n == 0 || n > kMaxFrameWorlds)
        throw std::invalid_argument("frames are enumerated for 1 to " + std::to_string(kMaxFrameWorlds) + " worlds");
    static std::array<std::once_flag, kMaxFrameWorlds + 1> once;
    static std::array<std::vector<Matrix>, kMaxFrameWorlds + 1> frames;
    std::call_once(once[n], [n] { frames[n] = compute_frames(n); });
    return frames[n];
}

std::vector<std::uint64_t> up_sets(const Matrix& leq) {
    const std::size_t n = leq.size();
    if (n > 20)
        throw std::invalid_argument("up-set enumeration is limited to 20 worlds");
    std::vector<std::uint64_t> ups(n);
    for (std::size_t w = 0; w < n; ++w)
        ups[w] = up_mask(leq, w);
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = 0; s <= low_bits(n); ++s) {
        bool closed = true;
        for (std::size_t w = 0; w < n && closed; ++w)
            if (s >> w & 1)
                closed = (ups[w] & ~s) == 0;
        if (closed)
            out.push_back(s);
    }
    return out;
}

void for_each_model(const std::vector<std::string>& atoms, std::size_t max_worlds,
                    const std::function<bool(const FiniteModel&)>& visit) {
    for (std::size_t n = 1; n <= max_worlds; ++n)
        for (const Matrix& leq : rooted_frames(n)) {
            const auto ups = up_sets(leq);
            std::vector<std::size_t> pick(atoms.size(), 0);
            while (true) {
                FiniteModel m;
                m.worlds = n;
                m.leq = leq;
                for (std::size_t a = 0; a < atoms.size(); ++a) {
                    auto& ws = m.val[atoms[a]];
                    for (std::size_t w = 0; w < n; ++w)
                        if (ups[pick[a]] >> w & 1)
                            ws.insert(w);
                }
                if (!visit(m))
                    return;
                // Odometer with the first atom varying slowest.
                std::size_t a = atoms.size();
                while (a > 0 && ++pick[a - 1] == ups.size())
                    pick[--a] = 0;
                if (a == 0)
                    break;
            }
        }
}

std::optional<Countermodel> countermodel_search(const Sequent& s, std::size_t max_worlds) {
    const auto names = vars(s);
    const std::vector<std::string> atoms(names.begin(), names.end());
    std::unordered_map<const void*, std::size_t> index;
    std::vector<Formula> nodes;
    for (const auto& [f, k] : s.lhs)
        post_order(f, index, nodes);
    for (const auto& [f, k] : s.rhs)
        post_order(f, index, nodes);
    std::unordered_map<std::string, std::size_t> atom_slot;
    for (std::size_t a = 0; a < atoms.size(); ++a)
        atom_slot.emplace(atoms[a], a);

    std::vector<std::uint64_t> t(nodes.size());
    for (std::size_t n = 1; n <= max_worlds; ++n)
        for (const Matrix& leq : rooted_frames(n)) {
            FrameMasks fm;
            for (std::size_t w = 0; w < n; ++w) {
                fm.up.push_back(up_mask(leq, w));
                fm.succ.push_back(strict_mask(leq, w));
            }
            fm.upsets = up_sets(leq);
            std::vector<std::size_t> pick(atoms.size(), 0);
            while (true) {
                for (std::size_t i = 0; i < nodes.size(); ++i) {
                    Formula f = nodes[i];
                    switch (f.kind()) {
                    case Kind::Atom:
                        t[i] = fm.upsets[pick[atom_slot.at(f.name())]];
                        break;
                    case Kind::Bottom:
                        t[i] = 0;
                        break;
                    case Kind::And:
                        t[i] = t[index.at(f.left().node())] & t[index.at(f.right().node())];
                        break;
                    case Kind::Or:
                        t[i] = t[index.at(f.left().node())] | t[index.at(f.right().node())];
                        break;
                    case Kind::Imp:
                        t[i] = imp_truth(fm.up, t[index.at(f.left().node())], t[index.at(f.right().node())]);
                        break;
                    case Kind::Box:
                        t[i] = box_truth(fm.succ, t[index.at(f.body().node())]);
                        break;
                    }
                }
                bool refuted = true;
                for (const auto& [f, k] : s.lhs)
                    refuted = refuted && (t[index.at(f.node())] & 1);
                for (const auto& [f, k] : s.rhs)
                    refuted = refuted && !(t[index.at(f.node())] & 1);
                if (refuted) {
                    Countermodel cm;
                    cm.model.worlds = n;
                    cm.model.leq = leq;
                    for (std::size_t a = 0; a < atoms.size(); ++a) {
                        auto& ws = cm.model.val[atoms[a]];
                        for (std::size_t w = 0; w < n; ++w)
                            if (fm.upsets[pick[a]] >> w & 1)
                                ws.insert(w);
                    }
                    return cm;
                }
                std::size_t a = atoms.size();
                while (a > 0 && ++pick[a - 1] == fm.upsets.size())
                    pick[--a] = 0;
                if (a == 0)
                    break;
            }
        }
    return std::nullopt;
}

PropertyReport property_probes(const FiniteModel& m, const std::vector<Formula>& formulas,
                               const std::vector<FMultiset>& contexts) {
    ModelEvaluator ev(m);
    PropertyReport rep;
    const std::size_t n = m.worlds;
    FormulaSet subs;
    for (Formula f : formulas)
        for (Formula g : subformulas(f))
            subs.insert(g);
    for (Formula g : subs) {
        const std::uint64_t t = ev.truth(g);
        for (std::size_t w = 0; w < n; ++w)
            for (std::size_t v = 0; v < n; ++v)
                if (m.le(w, v)) {
                    ++rep.persistence_checks;
                    if ((t >> w & 1) && !(t >> v & 1))
                        rep.failures.push_back({"persistence", w, v, print_formula(g, 200)});
                }
    }
    for (const FMultiset& g : contexts) {
        const std::uint64_t here = ev.truth_all(g);
        const std::uint64_t there = ev.truth_all(box_inverse(g));
        for (std::size_t w = 0; w < n; ++w)
            for (std::size_t v = 0; v < n; ++v)
                if (m.strict(w, v)) {
                    ++rep.observation_checks;
                    if ((here >> w & 1) && !(there >> v & 1))
                        rep.failures.push_back({"observation", w, v, print_multiset(g, 200)});
                }
    }
    for (std::size_t w = 0; w < n; ++w) {
        if (m.strict(w, w))
            rep.failures.push_back({"strictness", w, w, "R is reflexive here"});
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t u = 0; u < n; ++u)
                if (m.strict(w, v) && m.strict(v, u) && !m.strict(w, u))
                    rep.failures.push_back({"strictness", w, u, "R is not transitive through " + std::to_string(v)});
    }
    return rep;
}

std::string model_to_json(const FiniteModel& m, int indent) {
    nlohmann::ordered_json j;
    j["worlds"] = m.worlds;
    j["leq"] = nlohmann::ordered_json::array();
    for (const auto& row : m.leq) {
        auto r = nlohmann::ordered_json::array();
        for (bool b : row)
            r.push_back(b);
        j["leq"].push_back(r);
    }
    j["val"] = nlohmann::ordered_json::object();
    for (const auto& [p, ws] : m.val)
        j["val"][p] = std::vector<std::size_t>(ws.begin(), ws.end());
    return j.dump(indent);
}

FiniteModel model_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("model must be a JSON object");
    FiniteModel m;
    if (!j.contains("worlds") || !j["worlds"].is_number_unsigned())
        throw std::invalid_argument("model needs a non-negative integer \"worlds\"");
    m.worlds = j["worlds"].get<std::size_t>();
    if (!j.contains("leq") || !j["leq"].is_array())
        throw std::invalid_argument("model needs a \"leq\" matrix");
    for (const auto& row : j["leq"]) {
        if (!row.is_array())
            throw std::invalid_argument("\"leq\" rows must be arrays");
        std::vector<bool> r;
        for (const auto& b : row) {
            if (b.is_boolean())
                r.push_back(b.get<bool>());
            else if (b.is_number_integer() && (b.get<int>() == 0 || b.get<int>() == 1))
                r.push_back(b.get<int>() == 1);
            else
                throw std::invalid_argument("\"leq\" entries must be booleans or 0/1");
        }
        m.leq.push_back(std::move(r));
    }
    if (j.contains("val")) {
        if (!j["val"].is_object())
            throw std::invalid_argument("\"val\" must map atoms to world lists");
        for (const auto& [p, ws] : j["val"].items()) {
            if (!ws.is_array())
                throw std::invalid_argument("\"val\"." + p + " must be an array");
            auto& set = m.val[p];
            for (const auto& w : ws) {
                if (!w.is_number_unsigned())
                    throw std::invalid_argument("\"val\"." + p + " must list world indices");
                set.insert(w.get<std::size_t>());
            }
        }
    }
    return m;
}

} // namespace km
