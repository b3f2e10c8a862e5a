#include "km/search.hpp"

#include "km/parser.hpp"

#include <algorithm>
#include <mutex>
#include <random>

namespace km {

namespace {

constexpr RuleId kSaturationOrder[] = {RuleId::AndL,    RuleId::OrR,      RuleId::AndImpL, RuleId::OrImpL,
                                       RuleId::AtomImpL, RuleId::AndR,    RuleId::OrL};
constexpr RuleId kBranchOrder[] = {RuleId::BoxR, RuleId::ImpR, RuleId::BoxImpL, RuleId::ImpImpL};

bool is_top_like(Formula f) { return f.is_imp() && f.left().is_bottom(); }

std::uint64_t signature(const FMultiset& m) {
    std::uint64_t sig = 0;
    for (const auto& [f, c] : m)
        sig |= std::uint64_t{1} << (f.hash() % 64);
    return sig;
}

// Sorted-merge inclusion on distinct members.
bool included(const FMultiset& a, const FMultiset& b) {
    auto it = b.begin();
    for (const auto& [f, c] : a) {
        while (it != b.end() && compare(it->first, f) < 0)
            ++it;
        if (it == b.end() || it->first != f)
            return false;
    }
    return true;
}

// Every rooted frame on at most three worlds with every persistent
// valuation of the first k atoms, flattened into one world list.
struct SmallModels {
    std::size_t worlds = 0;
    std::size_t words = 0;
    std::vector<std::vector<std::uint32_t>> up;     // v with w ≤ v, w included
    std::vector<std::vector<std::uint32_t>> strict; // v with w < v
    std::vector<std::vector<std::uint64_t>> atom;   // truth set per atom index
};

const SmallModels& small_models(std::size_t k) {
    static std::mutex m;
    static std::unordered_map<std::size_t, std::unique_ptr<SmallModels>> cache;
    std::lock_guard lock(m);
    auto& slot = cache[k];
    if (slot)
        return *slot;
    slot = std::make_unique<SmallModels>();
    SmallModels& sm = *slot;
    using Edges = std::vector<std::pair<int, int>>; // strict pairs, transitively closed
    const std::vector<std::pair<int, Edges>> frames = {
        {1, {}}, {2, {{0, 1}}}, {3, {{0, 1}, {1, 2}, {0, 2}}}, {3, {{0, 1}, {0, 2}}}};
    std::vector<std::vector<bool>> atom_bits(k);
    for (const auto& [n, edges] : frames) {
        auto less = [&](int a, int b) { return std::find(edges.begin(), edges.end(), std::pair{a, b}) != edges.end(); };
        std::vector<unsigned> upsets;
        for (unsigned set = 0; set < (1u << n); ++set) {
            bool closed = true;
            for (const auto& [a, b] : edges)
                if ((set >> a & 1) && !(set >> b & 1))
                    closed = false;
            if (closed)
                upsets.push_back(set);
        }
        std::size_t combos = 1;
        for (std::size_t i = 0; i < k; ++i)
            combos *= upsets.size();
        for (std::size_t c = 0; c < combos; ++c) {
            const auto base = static_cast<std::uint32_t>(sm.worlds);
            for (int w = 0; w < n; ++w) {
                std::vector<std::uint32_t> up{base + w}, st;
                for (int v = 0; v < n; ++v)
                    if (less(w, v)) {
                        up.push_back(base + v);
                        st.push_back(base + v);
                    }
                sm.up.push_back(std::move(up));
                sm.strict.push_back(std::move(st));
            }
            std::size_t code = c;
            for (std::size_t i = 0; i < k; ++i) {
                unsigned set = upsets[code % upsets.size()];
                code /= upsets.size();
                for (int w = 0; w < n; ++w)
                    atom_bits[i].push_back(set >> w & 1);
            }
            sm.worlds += n;
        }
    }
    sm.words = (sm.worlds + 63) / 64;
    for (const auto& bits : atom_bits) {
        std::vector<std::uint64_t> t(sm.words, 0);
        for (std::size_t w = 0; w < bits.size(); ++w)
            if (bits[w])
                t[w / 64] |= std::uint64_t{1} << (w % 64);
        sm.atom.push_back(std::move(t));
    }
    return sm;
}

bool bit(const std::vector<std::uint64_t>& t, std::size_t w) { return t[w / 64] >> (w % 64) & 1; }

} // namespace

SearchConfig plain_search_config() {
    SearchConfig c;
    c.saturate_invertible = false;
    c.prune_invertible_premises = false;
    c.contract_duplicates = false;
    c.shortcut_closure = false;
    c.theorem_probe_limit = 0;
    c.subsumption = false;
    c.unit_rewrite = false;
    c.semantic_filter_atoms = 0;
    c.relevance_slicing = false;
    c.admissible_arrow_left = false;
    return c;
}

Prover::Prover(SearchConfig cfg) : cfg_(cfg) {}

ProofResult Prover::prove(const Sequent& s) {
    SearchStats before = stats_;
    ProofResult r;
    r.provable = decide(s);
    if (r.provable)
        r.tree = build(s);
    r.stats.expanded = stats_.expanded - before.expanded;
    r.stats.refuted = stats_.refuted - before.refuted;
    r.stats.memo_hits = stats_.memo_hits - before.memo_hits;
    r.stats.measure_checks = stats_.measure_checks - before.measure_checks;
    r.stats.probes = stats_.probes - before.probes;
    r.stats.subsumed = stats_.subsumed - before.subsumed;
    r.stats.countermodels = stats_.countermodels - before.countermodels;
    r.stats.sliced = stats_.sliced - before.sliced;
    return r;
}

bool Prover::provable(const Sequent& s) { return decide(s); }

void Prover::check_measure(const RuleInstance& inst) {
    if (!cfg_.trace_measure)
        return;
    for (const Sequent& p : inst.premises) {
        ++stats_.measure_checks;
        if (!seq_less(p, inst.conclusion))
            throw SearchInternalError("measure did not decrease: " + std::string(rule_name(inst.rule)) + " from " +
                                      print_sequent(inst.conclusion, 400) + " to " + print_sequent(p, 400));
    }
}

Prover::Probe Prover::probe(Formula f) {
    if (auto it = probes_.find(f); it != probes_.end())
        return it->second;
    Probe r = Probe::TooLarge;
    if (dag_size(f) <= cfg_.theorem_probe_limit) {
        if (!side_) {
            SearchConfig side_cfg = cfg_;
            side_cfg.theorem_probe_limit = 0;
            side_cfg.max_steps.reset();
            side_ = std::make_unique<Prover>(side_cfg);
        }
        ++stats_.probes;
        if (side_->provable({{}, FMultiset{f}}))
            r = Probe::Theorem;
        else if (side_->provable({FMultiset{f}, {}}))
            r = Probe::Refutable;
        else
            r = Probe::Neither;
    }
    else if (cfg_.theorem_probe_limit > 0) {
        // Too large to decide directly: combine the verdicts of the parts.
        auto t = [this](Formula g) { return probe(g) == Probe::Theorem; };
        auto z = [this](Formula g) { return probe(g) == Probe::Refutable; };
        if (f.is(Kind::And)) {
            if (t(f.left()) && t(f.right()))
                r = Probe::Theorem;
            else if (z(f.left()) || z(f.right()))
                r = Probe::Refutable;
        } else if (f.is(Kind::Or)) {
            if (t(f.left()) || t(f.right()))
                r = Probe::Theorem;
            else if (z(f.left()) && z(f.right()))
                r = Probe::Refutable;
        } else if (f.is_imp()) {
            if (t(f.right()) || z(f.left()))
                r = Probe::Theorem;
            else if (t(f.left()) && z(f.right()))
                r = Probe::Refutable;
        } else if (f.is_box() && t(f.body())) {
            r = Probe::Theorem;
        }
    }
    probes_.emplace(f, r);
    return r;
}

namespace {
// Marker bits above the atom bits of Prover::atom_mask.
constexpr std::uint64_t kHasTop = std::uint64_t{1} << 63;
constexpr std::uint64_t kHasBottom = std::uint64_t{1} << 62;
constexpr unsigned kAtomBits = 62;
} // namespace

namespace {
void spine(Kind k, Formula f, std::vector<Formula>& out) {
    if (f.kind() == k) {
        spine(k, f.left(), out);
        spine(k, f.right(), out);
    } else {
        out.push_back(f);
    }
}

// Joins two already normal operands into a sorted, duplicate-free,
// right-nested chain. Reassociation keeps the weight; dropping duplicates
// lowers it.
Formula ac_join(Kind k, Formula l, Formula r) {
    std::vector<Formula> parts;
    spine(k, l, parts);
    spine(k, r, parts);
    std::sort(parts.begin(), parts.end(), [](Formula a, Formula b) { return compare(a, b) < 0; });
    parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
    // Absorption: φ ∧ (φ ∨ ψ) is φ, φ ∨ (φ ∧ ψ) is φ.
    const Kind dual = k == Kind::And ? Kind::Or : Kind::And;
    std::vector<Formula> kept;
    std::vector<Formula> inner;
    for (Formula p : parts) {
        bool absorbed = false;
        if (p.kind() == dual) {
            inner.clear();
            spine(dual, p, inner);
            for (Formula q : inner)
                if (q != p && std::binary_search(parts.begin(), parts.end(), q,
                                                 [](Formula a, Formula b) { return compare(a, b) < 0; }))
                    absorbed = true;
        }
        if (!absorbed)
            kept.push_back(p);
    }
    parts.swap(kept);
    Formula out = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;)
        out = k == Kind::And ? Formula::conj(parts[i], out) : Formula::disj(parts[i], out);
    return out;
}
} // namespace

// Atoms beyond the 62nd get no bit and are never rewritten.
std::uint64_t Prover::atom_mask(Formula f) {
    if (f.is_atom()) {
        auto [it, fresh] = atom_bits_.try_emplace(f.name(), static_cast<unsigned>(atom_bits_.size()));
        return it->second < 64 ? std::uint64_t{1} << it->second : 0;
    }
    if (f.is_bottom())
        return 0;
    if (auto it = atom_masks_.find(f.node()); it != atom_masks_.end())
        return it->second;
    std::uint64_t m = f.is_box() ? atom_mask(f.body()) : atom_mask(f.left()) | atom_mask(f.right());
    atom_masks_.emplace(f.node(), m);
    return m;
}

namespace {
// Simplifying constructor over operands that are already normal.
Formula rebuild(Kind k, Formula l, Formula r) {
    auto top = [](Formula g) { return is_top_like(g); };
    auto bot = [](Formula g) { return g.is_bottom(); };
    switch (k) {
    case Kind::Box:
        return top(l) ? l : Formula::box(l);
    case Kind::And:
        return bot(l) || top(r) ? l : bot(r) || top(l) ? r : ac_join(Kind::And, l, r);
    case Kind::Or:
        return top(l) || bot(r) ? l : top(r) || bot(l) ? r : ac_join(Kind::Or, l, r);
    default:
        return top(r) ? r : top(l) ? r : bot(l) ? Formula::top() : Formula::imp(l, r);
    }
}
} // namespace

Formula Prover::canonical(Formula f) {
    if (f.is_atom() || f.is_bottom())
        return f;
    if (auto it = canonical_.find(f.node()); it != canonical_.end())
        return it->second;
    Formula out;
    if (f.is_box()) {
        out = rebuild(Kind::Box, canonical(f.body()), {});
    } else if (is_top_like(f)) {
        out = Formula::top();
    } else {
        Formula l = canonical(f.left());
        Formula r = canonical(f.right());
        if (f.kind() == Kind::Imp) {
            // a ∧ ... → ψ: the antecedent atoms hold inside ψ.
            std::vector<Formula> ante;
            spine(Kind::And, l, ante);
            std::uint64_t m = 0;
            for (Formula a : ante)
                if (a.is_atom())
                    m |= atom_mask(a);
            out = rebuild(Kind::Imp, l, substitute(r, m));
        } else if (f.kind() == Kind::And) {
            out = rebuild(Kind::And, l, r);
            // Atoms among the conjuncts hold inside their siblings.
            std::vector<Formula> parts;
            spine(Kind::And, out, parts);
            std::uint64_t m = 0;
            for (Formula a : parts)
                if (a.is_atom())
                    m |= atom_mask(a);
            bool touched = false;
            for (Formula& p : parts)
                if (!p.is_atom() && (atom_mask(p) & m) != 0) {
                    p = substitute(p, m);
                    touched = true;
                }
            if (touched) {
                out = parts.front();
                for (std::size_t i = 1; i < parts.size(); ++i)
                    out = rebuild(Kind::And, out, parts[i]);
            }
        } else {
            out = rebuild(f.kind(), l, r);
        }
    }
    canonical_.emplace(f.node(), out);
    return out;
}

Formula Prover::rewrite_units(Formula f, std::uint64_t mask) {
    return substitute(canonical(f), mask);
}

// f is canonical; rewrites the atoms in mask to ⊤.
Formula Prover::substitute(Formula f, std::uint64_t mask) {
    if ((atom_mask(f) & mask) == 0 || f.is_bottom())
        return f;
    if (f.is_atom())
        return Formula::top();
    auto key = std::make_pair(static_cast<const void*>(f.node()), mask);
    if (auto it = rewrites_.find(key); it != rewrites_.end())
        return it->second;
    Formula out = f.is_box() ? rebuild(Kind::Box, substitute(f.body(), mask), {})
                             : rebuild(f.kind(), substitute(f.left(), mask), substitute(f.right(), mask));
    rewrites_.emplace(key, out);
    return out;
}

const std::vector<std::uint64_t>& Prover::truth(Formula f) {
    if (auto it = truth_.find(f.node()); it != truth_.end())
        return it->second;
    const SmallModels& sm = small_models(cfg_.semantic_filter_atoms);
    std::vector<std::uint64_t> t(sm.words, 0);
    switch (f.kind()) {
    case Kind::Atom: {
        std::uint64_t m = atom_mask(f);
        for (std::size_t i = 0; i < sm.atom.size(); ++i)
            if (m == std::uint64_t{1} << i)
                t = sm.atom[i];
        break;
    }
    case Kind::Bottom:
        break;
    case Kind::And:
    case Kind::Or: {
        const auto& l = truth(f.left());
        const auto& r = truth(f.right());
        for (std::size_t i = 0; i < sm.words; ++i)
            t[i] = f.kind() == Kind::And ? l[i] & r[i] : l[i] | r[i];
        break;
    }
    case Kind::Imp: {
        const auto& l = truth(f.left());
        const auto& r = truth(f.right());
        for (std::size_t w = 0; w < sm.worlds; ++w)
            if (std::all_of(sm.up[w].begin(), sm.up[w].end(), [&](std::uint32_t v) { return !bit(l, v) || bit(r, v); }))
                t[w / 64] |= std::uint64_t{1} << (w % 64);
        break;
    }
    case Kind::Box: {
        const auto& b = truth(f.body());
        for (std::size_t w = 0; w < sm.worlds; ++w)
            if (std::all_of(sm.strict[w].begin(), sm.strict[w].end(), [&](std::uint32_t v) { return bit(b, v); }))
                t[w / 64] |= std::uint64_t{1} << (w % 64);
        break;
    }
    }
    return truth_.emplace(f.node(), std::move(t)).first->second;
}

bool Prover::semantically_refuted(const Sequent& s) {
    const std::size_t words = small_models(cfg_.semantic_filter_atoms).words;
    std::vector<std::uint64_t> acc(words, ~std::uint64_t{0});
    for (const auto& [f, c] : s.lhs) {
        const auto& t = truth(f);
        for (std::size_t i = 0; i < words; ++i)
            acc[i] &= t[i];
    }
    for (const auto& [f, c] : s.rhs) {
        const auto& t = truth(f);
        for (std::size_t i = 0; i < words; ++i)
            acc[i] &= ~t[i];
    }
    const std::size_t tail = small_models(cfg_.semantic_filter_atoms).worlds % 64;
    if (tail != 0)
        acc.back() &= (std::uint64_t{1} << tail) - 1;
    return std::any_of(acc.begin(), acc.end(), [](std::uint64_t x) { return x != 0; });
}

std::optional<Sequent> Prover::relevant_slice(const Sequent& s) {
    struct Item {
        Formula f;
        bool left;
        const std::vector<std::uint64_t>* t;
        bool kept = true;
    };
    std::vector<Item> items;
    for (const auto& [f, c] : s.lhs)
        items.push_back({f, true, &truth(f)});
    for (const auto& [f, c] : s.rhs)
        items.push_back({f, false, &truth(f)});
    if (items.size() < 2)
        return std::nullopt;
    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return items[a].f.weight() > items[b].f.weight(); });
    const SmallModels& sm = small_models(cfg_.semantic_filter_atoms);
    const std::uint64_t tail = sm.worlds % 64 == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << (sm.worlds % 64)) - 1;
    auto refuted_without = [&](std::size_t skip) {
        for (std::size_t w = 0; w < sm.words; ++w) {
            std::uint64_t acc = w + 1 == sm.words ? tail : ~std::uint64_t{0};
            for (std::size_t i = 0; i < items.size() && acc != 0; ++i)
                if (i != skip && items[i].kept)
                    acc &= items[i].left ? (*items[i].t)[w] : ~(*items[i].t)[w];
            if (acc != 0)
                return true;
        }
        return false;
    };
    bool dropped = false;
    for (std::size_t i : order)
        if (!refuted_without(i)) {
            items[i].kept = false;
            dropped = true;
        }
    if (!dropped)
        return std::nullopt;
    Sequent out;
    for (const Item& it : items)
        if (it.kept)
            (it.left ? out.lhs : out.rhs).insert(it.f);
    return out;
}

std::optional<Sequent> Prover::normalize(const Sequent& given) {
    const Sequent* src = &given;
    Sequent rewritten;
    if (cfg_.unit_rewrite) {
        std::uint64_t mask = 0;
        for (const auto& [f, c] : given.lhs)
            if (f.is_atom())
                mask |= atom_mask(f);
        for (const auto& [f, c] : given.lhs) {
            Formula g = f.is_atom() ? f : rewrite_units(f, mask);
            if (g.is_bottom())
                return std::nullopt;
            if (!is_top_like(g))
                rewritten.lhs.insert(g, c);
        }
        for (const auto& [f, c] : given.rhs) {
            Formula g = rewrite_units(f, mask);
            if (is_top_like(g))
                return std::nullopt;
            if (!g.is_bottom())
                rewritten.rhs.insert(g, c);
        }
        src = &rewritten;
    }
    const Sequent& s = *src;
    Sequent out;
    const bool probing = cfg_.theorem_probe_limit > 0 && s.lhs.distinct() + s.rhs.distinct() > 1;
    for (auto [f, c] : s.lhs) {
        // θ→χ with ⊢ θ is interderivable with χ.
        if (probing)
            while (f.is_imp() && probe(f.left()) == Probe::Theorem)
                f = f.right();
        if (cfg_.shortcut_closure && is_top_like(f))
            continue;
        if (probing) {
            Probe p = probe(f);
            if (p == Probe::Theorem)
                continue;
            if (p == Probe::Refutable)
                return std::nullopt;
        }
        out.lhs.insert(f, cfg_.contract_duplicates ? 1 : c);
    }
    for (const auto& [f, c] : s.rhs) {
        if (cfg_.shortcut_closure) {
            if (f.is_bottom())
                continue;
            if (is_top_like(f) || s.lhs.contains(f))
                return std::nullopt;
        }
        if (probing) {
            Probe p = probe(f);
            if (p == Probe::Theorem)
                return std::nullopt;
            if (p == Probe::Refutable)
                continue;
        }
        out.rhs.insert(f, cfg_.contract_duplicates ? 1 : c);
    }
    return out;
}

bool Prover::decide(const Sequent& s) {
    if (!cfg_.contract_duplicates && !cfg_.shortcut_closure && cfg_.theorem_probe_limit == 0 && !cfg_.unit_rewrite)
        return decide_normal(s);
    auto n = normalize(s);
    if (!n)
        return true;
    return decide_normal(*n);
}

bool Prover::subsumed(const Sequent& s) const {
    const std::uint64_t lsig = signature(s.lhs), rsig = signature(s.rhs);
    auto scan = [&](const void* key) {
        auto it = proved_.find(key);
        if (it == proved_.end())
            return false;
        for (const Proved& p : it->second)
            if ((p.lsig & ~lsig) == 0 && (p.rsig & ~rsig) == 0 && included(p.seq.lhs, s.lhs) &&
                included(p.seq.rhs, s.rhs))
                return true;
        return false;
    };
    if (scan(nullptr))
        return true;
    for (const auto& [f, c] : s.rhs)
        if (scan(f.node()))
            return true;
    return false;
}

void Prover::record_proved(const Sequent& s) {
    const void* key = s.rhs.empty() ? nullptr : s.rhs.begin()->first.node();
    auto& bucket = proved_[key];
    // Subsumption is only a shortcut: keep the most recent entries per key.
    constexpr std::size_t kBucketLimit = 48;
    if (bucket.size() >= kBucketLimit)
        bucket.erase(bucket.begin());
    bucket.push_back({signature(s.lhs), signature(s.rhs), s});
}

bool Prover::decide_normal(const Sequent& s) {
    if (cfg_.memoize) {
        if (auto it = memo_.find(s); it != memo_.end()) {
            ++stats_.memo_hits;
            return it->second;
        }
    }
    if (cfg_.semantic_filter_atoms > 0 && semantically_refuted(s)) {
        ++stats_.countermodels;
        ++stats_.refuted;
        if (cfg_.memoize)
            memo_.emplace(s, false);
        return false;
    }
    if (cfg_.subsumption && subsumed(s)) {
        ++stats_.subsumed;
        if (cfg_.memoize)
            memo_.emplace(s, true);
        return true;
    }
    if (cfg_.relevance_slicing && cfg_.semantic_filter_atoms > 0) {
        if (auto slice = relevant_slice(s); slice && decide_normal(*slice)) {
            ++stats_.sliced;
            if (cfg_.subsumption)
                record_proved(s);
            if (cfg_.memoize)
                memo_.emplace(s, true);
            return true;
        }
    }
    bool verdict = decide_uncached(s);
    if (verdict && cfg_.subsumption)
        record_proved(s);
    if (!verdict)
        ++stats_.refuted;
    if (cfg_.memoize)
        memo_.emplace(s, verdict);
    return verdict;
}

std::optional<RuleInstance> Prover::saturation_step(const Sequent& s) const {
    for (RuleId r : kSaturationOrder) {
        auto found = applicable_instances(s, rule_bit(r));
        if (!found.empty())
            return std::move(found.front());
    }
    return std::nullopt;
}

std::vector<RuleInstance> Prover::alternatives(const Sequent& s) const {
    RuleMask mask = 0;
    for (RuleId r : kBranchOrder)
        mask |= rule_bit(r);
    if (!cfg_.saturate_invertible)
        for (RuleId r : kSaturationOrder)
            mask |= rule_bit(r);
    auto all = applicable_instances(s, mask);
    auto rank = [](RuleId r) {
        for (std::size_t i = 0; i < std::size(kBranchOrder); ++i)
            if (kBranchOrder[i] == r)
                return i;
        return std::size(kBranchOrder);
    };
    // Right rules first, then left rules on the lightest principal formula.
    auto key = [&](const RuleInstance& i) {
        std::size_t r = std::min<std::size_t>(rank(i.rule), 2);
        return std::pair{r, i.principal.empty() ? 0 : i.principal.back().weight()};
    };
    std::stable_sort(all.begin(), all.end(),
                     [&](const RuleInstance& a, const RuleInstance& b) { return key(a) < key(b); });
    if (cfg_.branch_seed) {
        std::mt19937_64 rng(*cfg_.branch_seed ^ s.hash());
        std::shuffle(all.begin(), all.end(), rng);
    }
    return all;
}

bool Prover::decide_uncached(const Sequent& s) {
    ++stats_.expanded;
    if (cfg_.max_steps && ++steps_ > *cfg_.max_steps) {
        throw SearchInternalError("search step cap exceeded");
    }
    if (is_axiom(s))
        return true;

    if (cfg_.saturate_invertible) {
        if (auto inst = saturation_step(s)) {
            check_measure(*inst);
            return std::all_of(inst->premises.begin(), inst->premises.end(),
                               [this](const Sequent& p) { return decide(p); });
        }
    }
    if (cfg_.admissible_arrow_left) {
        for (const auto& [f, c] : s.lhs) {
            if (!f.is_imp() || f.left().is_atom() || f.left().is_bottom())
                continue;
            FMultiset rest = s.lhs.without(f);
            Sequent minor{rest, s.rhs.with(f.left())};
            Sequent major{rest.with(f.right()), s.rhs};
            if (cfg_.trace_measure) {
                stats_.measure_checks += 2;
                if (!seq_less(minor, s) || !seq_less(major, s))
                    throw SearchInternalError("measure did not decrease: arrow-left from " + print_sequent(s, 400));
            }
            if (!decide(major))
                return false;
            if (decide(minor)) {
                ++stats_.arrow_left;
                return true;
            }
        }
    }
    for (const auto& inst : alternatives(s)) {
        check_measure(inst);
        switch (try_instance(inst)) {
        case Outcome::Proved:
            return true;
        case Outcome::Refuted:
            return false;
        case Outcome::Failed:
            break;
        }
    }
    return false;
}

Prover::Outcome Prover::try_instance(const RuleInstance& inst) {
    const bool prune = cfg_.prune_invertible_premises;
    if (prune)
        for (std::size_t i = 0; i < inst.premises.size(); ++i)
            if (is_invertible_premise(inst.rule, i) && !decide(inst.premises[i]))
                return Outcome::Refuted;
    for (std::size_t i = 0; i < inst.premises.size(); ++i)
        if (!(prune && is_invertible_premise(inst.rule, i)) && !decide(inst.premises[i]))
            return Outcome::Failed;
    return Outcome::Proved;
}

// Rebuilds a derivation of the sequent as given, not of its normal form;
// every choice is checked against the verdict cache.
ProofTree Prover::build(const Sequent& s) {
    std::optional<RuleInstance> chosen;
    for (const auto& inst : applicable_instances(s, rule_bit(RuleId::BotL) | rule_bit(RuleId::IdP))) {
        chosen = inst;
        break;
    }
    if (!chosen)
        chosen = saturation_step(s);
    if (!chosen) {
        for (auto& inst : alternatives(s))
            if (std::all_of(inst.premises.begin(), inst.premises.end(), [this](const Sequent& p) { return decide(p); })) {
                chosen = std::move(inst);
                break;
            }
    }
    if (!chosen)
        throw SearchInternalError("tree reconstruction failed for " + print_sequent(s, 400));
    ProofTree t{*chosen, {}};
    for (const Sequent& p : t.node.premises)
        t.children.push_back(build(p));
    return t;
}

ProofResult prove(const Sequent& s, const SearchConfig& cfg) {
    Prover prover(cfg);
    return prover.prove(s);
}

bool prove_bool(const Sequent& s) {
    Prover prover;
    return prover.provable(s);
}

std::string_view admissible_name(AdmissibleRule r) {
    switch (r) {
    case AdmissibleRule::WeakL:
        return "weakL";
    case AdmissibleRule::WeakR:
        return "weakR";
    case AdmissibleRule::ContrL:
        return "contrL";
    case AdmissibleRule::ContrR:
        return "contrR";
    case AdmissibleRule::Cut:
        return "cut";
    case AdmissibleRule::ArrL:
        return "arrL";
    case AdmissibleRule::ArrArrLDup:
        return "arrarrLdup";
    case AdmissibleRule::ArrArrLInv:
        return "arrarrLinv";
    case AdmissibleRule::OrRInv:
        return "orRinv";
    case AdmissibleRule::ImpRInv:
        return "impRinv";
    }
    return "?";
}

RuleShape admissible_shape(AdmissibleRule r, const AdmissibilityWitness& w) {
    auto f = [&](std::size_t i) {
        if (i >= w.formulas.size())
            throw std::invalid_argument(std::string(admissible_name(r)) + " needs " + std::to_string(i + 1) +
                                        " witness formulas");
        return w.formulas[i];
    };
    const FMultiset& g = w.gamma;
    const FMultiset& d = w.delta;
    switch (r) {
    case AdmissibleRule::WeakL:
        return {{{g, d}}, {g.with(f(0)), d}};
    case AdmissibleRule::WeakR:
        return {{{g, d}}, {g, d.with(f(0))}};
    case AdmissibleRule::ContrL:
        return {{{g.with({f(0), f(0)}), d}}, {g.with(f(0)), d}};
    case AdmissibleRule::ContrR:
        return {{{g, d.with({f(0), f(0)})}}, {g, d.with(f(0))}};
    case AdmissibleRule::Cut:
        return {{{g, d.with(f(0))}, {g.with(f(0)), d}}, {g, d}};
    case AdmissibleRule::ArrL:
        return {{{g, d.with(f(0))}, {g.with(f(1)), d}}, {g.with(Formula::imp(f(0), f(1))), d}};
    case AdmissibleRule::ArrArrLDup: {
        Formula psi_chi = Formula::imp(f(1), f(2));
        return {{{g.with(Formula::imp(Formula::imp(f(0), f(1)), f(2))), d}}, {g.with({f(0), psi_chi, psi_chi}), d}};
    }
    case AdmissibleRule::ArrArrLInv:
        return {{{g.with(Formula::imp(Formula::imp(f(0), f(1)), f(2))), d}}, {g.with({f(0), Formula::imp(f(1), f(2))}), d}};
    case AdmissibleRule::OrRInv:
        return {{{g, d.with(Formula::disj(f(0), f(1)))}}, {g, d.with({f(0), f(1)})}};
    case AdmissibleRule::ImpRInv:
        return {{{g, d.with(Formula::imp(f(0), f(1)))}}, {g.with(f(0)), d.with(f(1))}};
    }
    throw std::invalid_argument("unknown admissible rule");
}

AdmissibilityResult admissibility_probe(AdmissibleRule r, const AdmissibilityWitness& w, Prover& prover) {
    RuleShape shape = admissible_shape(r, w);
    AdmissibilityResult out;
    for (std::size_t i = 0; i < shape.premises.size(); ++i)
        if (!prover.provable(shape.premises[i])) {
            out.failed_premise = i;
            return out;
        }
    out.conclusion_provable = prover.provable(shape.conclusion);
    return out;
}

} // namespace km
