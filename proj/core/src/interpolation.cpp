#include "km/interpolation.hpp"

#include "km/corpus.hpp"
#include "km/parser.hpp"

#include <algorithm>
#include <random>

namespace km {

namespace {

constexpr int kStarredE[] = {0, 1, 2, 3, 5, 6, 7};
constexpr int kUnstarredE[] = {4, 8, 9, 10};
constexpr int kStarredA[] = {1, 2, 3, 5, 6, 7, 10, 11, 12};
constexpr int kUnstarredA[] = {4, 8, 9, 13, 14, 15};

bool is_right_row(int row) { return row >= 9 && row <= 14; }

class FrameGuard {
public:
    FrameGuard(std::vector<Sequent>& frames, Sequent s) : frames_(frames) { frames_.push_back(std::move(s)); }
    ~FrameGuard() { frames_.pop_back(); }
    FrameGuard(const FrameGuard&) = delete;
    FrameGuard& operator=(const FrameGuard&) = delete;

private:
    std::vector<Sequent>& frames_;
};

} // namespace

std::string describe(const InterpConfig& cfg) {
    std::string out = cfg.mode == InterpMode::Full ? "full" : "greedy";
    out += cfg.ep9 == Ep9Context::Remainder ? ",ep9=remainder" : ",ep9=whole";
    out += cfg.ep8 == Ep8Third::Literal ? ",ep8=literal" : ",ep8=delta2";
    return out;
}

Interpolator::Interpolator(std::string var, InterpConfig cfg)
    : var_(std::move(var)), var_atom_(Formula::atom(var_)), cfg_(cfg) {}

Formula Interpolator::E(const FMultiset& gamma) {
    frames_.clear();
    return call_e(gamma);
}

Formula Interpolator::A(const Sequent& s) {
    frames_.clear();
    return call_a(s);
}

void Interpolator::check_measure(const Sequent& callee) {
    if (!cfg_.assert_measure || frames_.empty())
        return;
    ++stats_.measure_checks;
    if (!seq_less(callee, frames_.back()))
        throw SearchInternalError("interpolant recursion did not decrease: from " + print_sequent(frames_.back(), 400) +
                                  " to " + print_sequent(callee, 400));
}

Formula Interpolator::call_e(const FMultiset& gamma) {
    Sequent as_seq{gamma, {}};
    check_measure(as_seq);
    if (auto it = e_cache_.find(gamma); it != e_cache_.end()) {
        ++stats_.cache_hits;
        return it->second;
    }
    FrameGuard guard(frames_, std::move(as_seq));
    Formula r = compute_e(gamma);
    ++stats_.e_computed;
    e_cache_.emplace(gamma, r);
    return r;
}

Formula Interpolator::call_a(const Sequent& s) {
    check_measure(s);
    if (auto it = a_cache_.find(s); it != a_cache_.end()) {
        ++stats_.cache_hits;
        return it->second;
    }
    FrameGuard guard(frames_, s);
    Formula r = compute_a(s);
    ++stats_.a_computed;
    a_cache_.emplace(s, r);
    return r;
}

// Contribution of row `row` with principal f, where f occurs in gamma.
std::optional<Formula> Interpolator::e_row(int row, Formula f, const FMultiset& gamma) {
    const FMultiset rest = gamma.without(f);
    switch (row) {
    case 0:
        if (f.is_bottom())
            return Formula::bottom();
        break;
    case 1:
        if (is_other_atom(f))
            return Formula::conj(call_e(rest), f);
        break;
    case 2:
        if (f.is(Kind::And))
            return call_e(rest.with({f.left(), f.right()}));
        break;
    case 3:
        if (f.is(Kind::Or))
            return Formula::disj(call_e(rest.with(f.left())), call_e(rest.with(f.right())));
        break;
    case 4:
        if (f.is_imp() && is_other_atom(f.left()))
            return Formula::imp(f.left(), call_e(rest.with(f.right())));
        break;
    case 5:
        if (f.is_imp() && f.left().is_atom() && rest.contains(f.left()))
            return call_e(rest.with(f.right()));
        break;
    case 6:
        if (f.is_imp() && f.left().is(Kind::And)) {
            Formula d1 = f.left().left(), d2 = f.left().right(), d3 = f.right();
            return call_e(rest.with(Formula::imp(d1, Formula::imp(d2, d3))));
        }
        break;
    case 7:
        if (f.is_imp() && f.left().is(Kind::Or)) {
            Formula d1 = f.left().left(), d2 = f.left().right(), d3 = f.right();
            return call_e(rest.with({Formula::imp(d1, d3), Formula::imp(d2, d3)}));
        }
        break;
    case 8:
        if (f.is_imp() && f.left().is_imp()) {
            Formula d1 = f.left().left(), d2 = f.left().right(), d3 = f.right();
            Formula d2d3 = Formula::imp(d2, d3);
            FMultiset boxed = box_inverse(rest).with({d2d3, d1});
            Formula guard = Formula::box(Formula::imp(call_e(boxed), call_a({boxed, FMultiset{d2}})));
            Formula third = cfg_.ep8 == Ep8Third::Literal ? call_e(rest.with({Formula::imp(d1, d3), d1}))
                                                          : call_e(rest.with({d2d3, d1}));
            return Formula::imp(guard, Formula::disj(call_e(rest.with(d3)), third));
        }
        break;
    case 9:
        if (f.is_box()) {
            FMultiset ctx = box_inverse(rest);
            if (cfg_.ep9 == Ep9Context::WholeGamma)
                ctx.insert(f.body());
            return Formula::box(call_e(ctx));
        }
        break;
    case 10:
        if (f.is_imp() && f.left().is_box()) {
            Formula bd1 = f.left(), d1 = bd1.body(), d2 = f.right();
            FMultiset boxed = box_inverse(rest).with({bd1, d2});
            Formula guard = Formula::box(Formula::imp(call_e(boxed), call_a({boxed, FMultiset{d1}})));
            return Formula::imp(guard, call_e(rest.with(d2)));
        }
        break;
    default:
        break;
    }
    return std::nullopt;
}

// Left rows: f occurs in s.lhs.
std::optional<Formula> Interpolator::a_left_row(int row, Formula f, const Sequent& s) {
    const FMultiset rest = s.lhs.without(f);
    const FMultiset& delta = s.rhs;
    switch (row) {
    case 1:
        if (is_other_atom(f))
            return call_a({rest, delta});
        break;
    case 2:
        if (f.is(Kind::And))
            return call_a({rest.with({f.left(), f.right()}), delta});
        break;
    case 3:
        if (f.is(Kind::Or)) {
            auto branch = [&](Formula psi) {
                FMultiset ctx = rest.with(psi);
                return Formula::imp(call_e(ctx), call_a({ctx, delta}));
            };
            return Formula::conj(branch(f.left()), branch(f.right()));
        }
        break;
    case 4:
        if (f.is_imp() && is_other_atom(f.left()))
            return Formula::conj(f.left(), call_a({rest.with(f.right()), delta}));
        break;
    case 5:
        if (f.is_imp() && f.left().is_atom() && rest.contains(f.left()))
            return call_a({rest.with(f.right()), delta});
        break;
    case 6:
        if (f.is_imp() && f.left().is(Kind::And)) {
            Formula d1 = f.left().left(), d2 = f.left().right(), d3 = f.right();
            return call_a({rest.with(Formula::imp(d1, Formula::imp(d2, d3))), delta});
        }
        break;
    case 7:
        if (f.is_imp() && f.left().is(Kind::Or)) {
            Formula d1 = f.left().left(), d2 = f.left().right(), d3 = f.right();
            return call_a({rest.with({Formula::imp(d1, d3), Formula::imp(d2, d3)}), delta});
        }
        break;
    case 8:
        if (f.is_imp() && f.left().is_imp()) {
            Formula d1 = f.left().left(), d2 = f.left().right(), d3 = f.right();
            FMultiset left_ctx = rest.with({Formula::imp(d2, d3), d1});
            Formula first = Formula::imp(call_e(left_ctx), call_a({left_ctx, delta}));
            FMultiset boxed = box_inverse(rest).with({Formula::imp(d2, d3), d1});
            Formula second = Formula::box(Formula::imp(call_e(boxed), call_a({boxed, FMultiset{d2}})));
            FMultiset right_ctx = rest.with(d3);
            Formula third = Formula::imp(call_e(right_ctx), call_a({right_ctx, delta}));
            return Formula::conj(Formula::conj(first, second), third);
        }
        break;
    case 15:
        if (f.is_imp() && f.left().is_box()) {
            Formula bd1 = f.left(), d1 = bd1.body(), d2 = f.right();
            FMultiset boxed = box_inverse(rest).with({bd1, d2});
            Formula guard = Formula::box(Formula::imp(call_e(boxed), call_a({boxed, FMultiset{d1}})));
            return Formula::conj(guard, call_a({rest.with(d2), delta}));
        }
        break;
    default:
        break;
    }
    return std::nullopt;
}

// Right rows: f occurs in s.rhs. Row 10 is handled by the caller.
std::optional<Formula> Interpolator::a_right_row(int row, Formula f, const Sequent& s) {
    const FMultiset& gamma = s.lhs;
    const FMultiset rest = s.rhs.without(f);
    switch (row) {
    case 9:
        if (is_other_atom(f))
            return f;
        break;
    case 11:
        if (f.is(Kind::And))
            return Formula::conj(call_a({gamma, rest.with(f.left())}), call_a({gamma, rest.with(f.right())}));
        break;
    case 12:
        if (f.is(Kind::Or))
            return call_a({gamma, rest.with({f.left(), f.right()})});
        break;
    case 13:
        if (f.is_imp()) {
            Formula f1 = f.left(), f2 = f.right();
            FMultiset boxed = box_inverse(gamma).with(f1);
            Formula first = Formula::box(Formula::imp(call_e(boxed), call_a({boxed, FMultiset{f2}})));
            FMultiset ctx = gamma.with(f1);
            Formula second = Formula::imp(call_e(ctx), call_a({ctx, rest.with(f2)}));
            return Formula::conj(first, second);
        }
        break;
    case 14:
        if (f.is_box()) {
            FMultiset boxed = box_inverse(gamma).with(f);
            return Formula::box(Formula::imp(call_e(boxed), call_a({boxed, FMultiset{f.body()}})));
        }
        break;
    default:
        break;
    }
    return std::nullopt;
}

Formula Interpolator::compute_e(const FMultiset& gamma) {
    FormulaSet contributions;
    auto collect = [&](int row, bool first_only) -> std::optional<Formula> {
        for (const auto& [f, c] : gamma)
            if (auto r = e_row(row, f, gamma)) {
                if (first_only)
                    return r;
                contributions.insert(*r);
            }
        return std::nullopt;
    };
    if (cfg_.mode == InterpMode::Greedy) {
        for (int row : kStarredE)
            if (auto r = collect(row, true))
                return *r;
        for (int row : kUnstarredE)
            collect(row, false);
    } else {
        for (int row = 0; row <= 10; ++row)
            collect(row, false);
    }
    return big_and(contributions);
}

Formula Interpolator::compute_a(const Sequent& s) {
    FormulaSet contributions;
    auto collect = [&](int row, bool first_only) -> std::optional<Formula> {
        if (row == 10) {
            if (s.lhs.contains(var_atom_) && s.rhs.contains(var_atom_)) {
                if (first_only)
                    return Formula::top();
                contributions.insert(Formula::top());
            }
            return std::nullopt;
        }
        const FMultiset& side = is_right_row(row) ? s.rhs : s.lhs;
        for (const auto& [f, c] : side) {
            auto r = is_right_row(row) ? a_right_row(row, f, s) : a_left_row(row, f, s);
            if (r) {
                if (first_only)
                    return r;
                contributions.insert(*r);
            }
        }
        return std::nullopt;
    };
    if (cfg_.mode == InterpMode::Greedy) {
        for (int row : kStarredA)
            if (auto r = collect(row, true))
                return *r;
        for (int row : kUnstarredA)
            collect(row, false);
    } else {
        for (int row = 1; row <= 15; ++row)
            collect(row, false);
    }
    return big_or(contributions);
}

Formula exists_p(const std::string& var, Formula f, const InterpConfig& cfg) {
    Interpolator ip(var, cfg);
    return ip.E(FMultiset{f});
}

Formula forall_p(const std::string& var, Formula f, const InterpConfig& cfg) {
    Interpolator ip(var, cfg);
    return ip.A({{}, FMultiset{f}});
}

namespace {

std::string fresh_atom(const std::set<std::string>& used) {
    std::string name = "fresh";
    for (int i = 1; used.count(name); ++i)
        name = "fresh" + std::to_string(i);
    return name;
}

// Interpolants are shared DAGs whose tree form can be exponential.
constexpr std::size_t kWitnessChars = 400;

std::string show(const Sequent& s) { return print_sequent(s, kWitnessChars); }
std::string show(Formula f) { return print_formula(f, kWitnessChars); }

} // namespace

VerificationReport verify_interpolant(const std::string& var, Formula f, const InterpConfig& cfg,
                                      const VerifyBudget& budget, Prover& prover) {
    VerificationReport rep;
    rep.input = f;
    Interpolator ip(var, cfg);
    rep.exists = ip.E(FMultiset{f});
    rep.forall = ip.A({{}, FMultiset{f}});

    auto fail = [&](bool& flag, std::string check, std::string witness) {
        flag = false;
        rep.failures.push_back({std::move(check), std::move(witness)});
    };

    std::set<std::string> allowed = vars(f);
    allowed.erase(var);
    for (Formula g : {rep.exists, rep.forall}) {
        std::set<std::string> vs = vars(g);
        for (const auto& v : vs)
            if (!allowed.count(v))
                fail(rep.p_free, "p-freeness", show(g) + " mentions " + v);
    }

    if (!prover.provable({FMultiset{f}, FMultiset{rep.exists}}))
        fail(rep.implication, "implication (exists)", show(f) + " => " + show(rep.exists));
    if (!prover.provable({FMultiset{rep.forall}, FMultiset{f}}))
        fail(rep.implication, "implication (forall)", show(rep.forall) + " => " + show(f));

    // Uniformity over p-free ψ.
    std::vector<std::string> atoms(allowed.begin(), allowed.end());
    std::set<std::string> used = vars(f);
    used.insert(var);
    atoms.push_back(fresh_atom(used));

    std::vector<Formula> psis = enumerate_formulas(atoms, budget.exhaustive_weight, true);
    std::mt19937_64 rng(budget.seed ^ f.hash());
    if (budget.max_weight > budget.exhaustive_weight) {
        CorpusGenerator gen(atoms, budget.seed ^ (f.hash() * 0x9e3779b97f4a7c15ULL));
        for (std::size_t i = 0; i < budget.random_samples; ++i) {
            std::uint64_t w = budget.exhaustive_weight + 1 + rng() % (budget.max_weight - budget.exhaustive_weight);
            psis.push_back(gen.formula_exact(w));
        }
    }
    for (Formula sub : subformulas(f)) {
        std::set<std::string> vs = vars(sub);
        if (!vs.count(var) && weight(sub) <= budget.max_weight)
            psis.push_back(sub);
    }

    for (Formula psi : psis) {
        ++rep.psi_tested;
        if (prover.provable({FMultiset{f}, FMultiset{psi}})) {
            ++rep.psi_consequences;
            if (!prover.provable({FMultiset{rep.exists}, FMultiset{psi}}))
                fail(rep.uniformity, "uniformity (exists)",
                     show(rep.exists) + " => " + show(psi));
        }
        if (prover.provable({FMultiset{psi}, FMultiset{f}})) {
            ++rep.psi_antecedents;
            if (!prover.provable({FMultiset{psi}, FMultiset{rep.forall}}))
                fail(rep.uniformity, "uniformity (forall)",
                     show(psi) + " => " + show(rep.forall));
        }
    }

    // Sequent-level clauses with Γ = {f} and sampled p-free Π, Σ and arbitrary Δ.
    std::vector<std::string> delta_atoms = atoms;
    delta_atoms.push_back(var);
    CorpusGenerator pgen(atoms, budget.seed * 31 + f.hash());
    CorpusGenerator dgen(delta_atoms, budget.seed * 131 + f.hash());
    FMultiset gamma{f};
    for (std::size_t i = 0; i < budget.sequent_samples; ++i) {
        FMultiset pi = pgen.multiset(rng() % 3, 4);
        FMultiset sigma = pgen.multiset(rng() % 3, 4);
        FMultiset delta = i % 3 == 0 ? FMultiset{} : dgen.multiset(1 + rng() % 2, 4);
        Formula e = ip.E(gamma);
        Formula a = ip.A({gamma, delta});
        ++rep.sequent_checks;
        if (!prover.provable({gamma.with(a), delta}))
            fail(rep.sequent_clauses, "implication (sequent)", show({gamma.with(a), delta}));
        if (prover.provable({pi + gamma, sigma}) && !prover.provable({pi.with(e), sigma}))
            fail(rep.sequent_clauses, "uniformity 3(a)", show({pi.with(e), sigma}));
        if (prover.provable({pi + gamma, delta}) && !prover.provable({pi.with(e), FMultiset{a}}))
            fail(rep.sequent_clauses, "uniformity 3(b)", show({pi.with(e), FMultiset{a}}));
    }
    return rep;
}

VerificationReport verify_interpolant(const std::string& var, Formula f, const InterpConfig& cfg,
                                      const VerifyBudget& budget) {
    Prover prover;
    return verify_interpolant(var, f, cfg, budget, prover);
}

} // namespace km
