#include "km/hilbert.hpp"

#include "km/parser.hpp"

#include "json.hpp"

#include <stdexcept>

namespace km {

namespace {

using Tag = Pattern::Tag;

Pattern mv(const char* name) { return {Tag::Meta, name, {}}; }
Pattern node(Tag t, std::vector<Pattern> kids) { return {t, "", std::move(kids)}; }
Pattern imp(Pattern a, Pattern b) { return node(Tag::Imp, {std::move(a), std::move(b)}); }
Pattern conj(Pattern a, Pattern b) { return node(Tag::And, {std::move(a), std::move(b)}); }
Pattern disj(Pattern a, Pattern b) { return node(Tag::Or, {std::move(a), std::move(b)}); }
Pattern box(Pattern a) { return node(Tag::Box, {std::move(a)}); }

bool match(const Pattern& pat, Formula f, Substitution& s) {
    switch (pat.tag) {
    case Tag::Meta: {
        auto [it, fresh] = s.emplace(pat.meta, f);
        return fresh || it->second == f;
    }
    case Tag::Bottom:
        return f.is_bottom();
    case Tag::Box:
        return f.is_box() && match(pat.kids[0], f.body(), s);
    case Tag::And:
        return f.is(Kind::And) && match(pat.kids[0], f.left(), s) && match(pat.kids[1], f.right(), s);
    case Tag::Or:
        return f.is(Kind::Or) && match(pat.kids[0], f.left(), s) && match(pat.kids[1], f.right(), s);
    case Tag::Imp:
        return f.is_imp() && match(pat.kids[0], f.left(), s) && match(pat.kids[1], f.right(), s);
    }
    return false;
}

Formula subst_into(const Pattern& pat, const Substitution& s) {
    switch (pat.tag) {
    case Tag::Meta: {
        auto it = s.find(pat.meta);
        if (it == s.end())
            throw std::invalid_argument("metavariable " + pat.meta + " is unbound");
        return it->second;
    }
    case Tag::Bottom:
        return Formula::bottom();
    case Tag::Box:
        return Formula::box(subst_into(pat.kids[0], s));
    case Tag::And:
        return Formula::conj(subst_into(pat.kids[0], s), subst_into(pat.kids[1], s));
    case Tag::Or:
        return Formula::disj(subst_into(pat.kids[0], s), subst_into(pat.kids[1], s));
    case Tag::Imp:
        return Formula::imp(subst_into(pat.kids[0], s), subst_into(pat.kids[1], s));
    }
    return Formula::bottom();
}

std::string show(const Pattern& p, bool nested) {
    auto wrap = [nested](std::string x) { return nested ? "(" + x + ")" : x; };
    switch (p.tag) {
    case Tag::Meta:
        return p.meta == "phi" ? "φ" : p.meta == "psi" ? "ψ" : "χ";
    case Tag::Bottom:
        return "⊥";
    case Tag::Box:
        return "□" + show(p.kids[0], true);
    case Tag::And:
        return wrap(show(p.kids[0], true) + " ∧ " + show(p.kids[1], true));
    case Tag::Or:
        return wrap(show(p.kids[0], true) + " ∨ " + show(p.kids[1], true));
    case Tag::Imp:
        return wrap(show(p.kids[0], true) + " → " + show(p.kids[1], true));
    }
    return "";
}

std::vector<Scheme> make_schemes() {
    const Pattern a = mv("phi");
    const Pattern b = mv("psi");
    const Pattern c = mv("chi");
    const Pattern bot = node(Tag::Bottom, {});
    return {
        {"ipc1", imp(a, imp(b, a))},
        {"ipc2", imp(imp(a, imp(b, c)), imp(imp(a, b), imp(a, c)))},
        {"ipc3", imp(conj(a, b), a)},
        {"ipc4", imp(conj(a, b), b)},
        {"ipc5", imp(a, imp(b, conj(a, b)))},
        {"ipc6", imp(a, disj(a, b))},
        {"ipc7", imp(b, disj(a, b))},
        {"ipc8", imp(imp(a, c), imp(imp(b, c), imp(disj(a, b), c)))},
        {"ipc9", imp(bot, a)},
        {"K", imp(box(imp(a, b)), imp(box(a), box(b)))},
        {"SL", imp(imp(box(a), a), a)},
        {"KM", imp(box(a), disj(b, imp(b, a)))},
    };
}

HCheckResult reject(std::size_t k, std::string why) { return {false, k, std::move(why)}; }

HCheckResult check(const HProof& p, bool variant) {
    if (p.steps.empty())
        return {false, std::nullopt, "the proof has no steps"};
    // closed[k]: step k does not depend on an (EI) step.
    std::vector<bool> closed(p.steps.size(), true);
    for (std::size_t k = 0; k < p.steps.size(); ++k) {
        const HStep& s = p.steps[k];
        switch (s.rule) {
        case HRule::Ax: {
            const Scheme* sc = nullptr;
            for (const Scheme& x : schemes())
                if (x.id == s.scheme)
                    sc = &x;
            if (!sc)
                return reject(k, "unknown axiom scheme '" + s.scheme + "'");
            if (s.subst.empty()) {
                if (!scheme_match(s.scheme, s.formula))
                    return reject(k, "formula is not an instance of " + s.scheme);
            } else {
                Formula inst;
                try {
                    inst = subst_into(sc->pattern, s.subst);
                } catch (const std::invalid_argument& e) {
                    return reject(k, e.what());
                }
                if (inst != s.formula)
                    return reject(k, "substitution gives " + print_formula(inst, 200) + ", not the stated formula");
            }
            break;
        }
        case HRule::EI:
            if (!p.context.count(s.formula))
                return reject(k, "formula is not in the context");
            closed[k] = false;
            break;
        case HRule::MP: {
            if (s.i >= k || s.j >= k)
                return reject(k, "MP must cite earlier steps");
            const Formula major = p.steps[s.j].formula;
            if (!major.is_imp() || major.left() != p.steps[s.i].formula || major.right() != s.formula)
                return reject(k, "step " + std::to_string(s.j) + " is not step " + std::to_string(s.i) +
                                     " -> this formula");
            closed[k] = closed[s.i] && closed[s.j];
            break;
        }
        case HRule::Nec:
            if (s.i >= k)
                return reject(k, "Nec must cite an earlier step");
            if (!s.formula.is_box() || s.formula.body() != p.steps[s.i].formula)
                return reject(k, "formula is not the box of step " + std::to_string(s.i));
            if (variant && !closed[s.i])
                return reject(k, "Nec premise depends on the context");
            closed[k] = closed[s.i];
            break;
        }
    }
    return {};
}

} // namespace

const std::vector<Scheme>& schemes() {
    static const std::vector<Scheme> all = make_schemes();
    return all;
}

std::string print_scheme(const Scheme& s) { return show(s.pattern, false); }

const Scheme& scheme(std::string_view id) {
    for (const Scheme& s : schemes())
        if (s.id == id)
            return s;
    throw std::invalid_argument("unknown axiom scheme '" + std::string(id) + "'");
}

std::optional<Substitution> scheme_match(std::string_view id, Formula candidate) {
    Substitution s;
    if (match(scheme(id).pattern, candidate, s))
        return s;
    return std::nullopt;
}

Formula instantiate(std::string_view id, const Substitution& s) { return subst_into(scheme(id).pattern, s); }

std::string_view rule_name(HRule r) {
    switch (r) {
    case HRule::Ax:
        return "Ax";
    case HRule::EI:
        return "EI";
    case HRule::MP:
        return "MP";
    case HRule::Nec:
        return "Nec";
    }
    return "?";
}

Formula HProof::goal() const {
    if (steps.empty())
        throw std::logic_error("empty proof has no goal");
    return steps.back().formula;
}

HCheckResult check_hproof(const HProof& p) { return check(p, false); }

HCheckResult nec_variant_check(const HProof& p) { return check(p, true); }

std::size_t HProofBuilder::push(HStep s) {
    proof_.steps.push_back(std::move(s));
    return proof_.steps.size() - 1;
}

std::size_t HProofBuilder::ax(std::string_view id, const Substitution& s) {
    HStep st;
    st.rule = HRule::Ax;
    st.scheme = std::string(id);
    st.subst = s;
    st.formula = instantiate(id, s);
    return push(std::move(st));
}

std::size_t HProofBuilder::ei(Formula f) {
    HStep st;
    st.rule = HRule::EI;
    st.formula = f;
    return push(std::move(st));
}

std::size_t HProofBuilder::mp(std::size_t i, std::size_t j) {
    Formula major = formula(j);
    if (!major.is_imp() || major.left() != formula(i))
        throw std::invalid_argument("MP: step " + std::to_string(j) + " is not an implication from step " +
                                    std::to_string(i));
    HStep st;
    st.rule = HRule::MP;
    st.i = i;
    st.j = j;
    st.formula = major.right();
    return push(std::move(st));
}

std::size_t HProofBuilder::nec(std::size_t i) {
    HStep st;
    st.rule = HRule::Nec;
    st.i = i;
    st.formula = Formula::box(formula(i));
    return push(std::move(st));
}

std::size_t HProofBuilder::identity(Formula a) {
    const Formula aa = Formula::imp(a, a);
    std::size_t s2 = ax("ipc2", {{"phi", a}, {"psi", aa}, {"chi", a}});
    std::size_t k1 = ax("ipc1", {{"phi", a}, {"psi", aa}});
    std::size_t m = mp(k1, s2);
    std::size_t k2 = ax("ipc1", {{"phi", a}, {"psi", a}});
    return mp(k2, m);
}

std::size_t HProofBuilder::weaken(std::size_t i, Formula h) {
    std::size_t k = ax("ipc1", {{"phi", formula(i)}, {"psi", h}});
    return mp(i, k);
}

std::size_t HProofBuilder::chain(std::size_t i, std::size_t j) {
    const Formula ab = formula(i);
    const Formula bc = formula(j);
    if (!ab.is_imp() || !bc.is_imp() || ab.right() != bc.left())
        throw std::invalid_argument("chain: steps do not compose");
    std::size_t w = weaken(j, ab.left());
    std::size_t s2 = ax("ipc2", {{"phi", ab.left()}, {"psi", ab.right()}, {"chi", bc.right()}});
    return mp(i, mp(w, s2));
}

std::size_t HProofBuilder::lifted_mp(std::size_t i, std::size_t j) {
    const Formula ha = formula(i);
    const Formula hab = formula(j);
    if (!ha.is_imp() || !hab.is_imp() || ha.left() != hab.left() || !hab.right().is_imp() ||
        hab.right().left() != ha.right())
        throw std::invalid_argument("lifted_mp: steps do not fit");
    std::size_t s2 = ax("ipc2", {{"phi", ha.left()}, {"psi", ha.right()}, {"chi", hab.right().right()}});
    return mp(i, mp(j, s2));
}

std::size_t HProofBuilder::lifted_chain(std::size_t i, std::size_t j) {
    const Formula hab = formula(i);
    const Formula hbc = formula(j);
    if (!hab.is_imp() || !hbc.is_imp() || hab.left() != hbc.left() || !hab.right().is_imp() ||
        !hbc.right().is_imp() || hab.right().right() != hbc.right().left())
        throw std::invalid_argument("lifted_chain: steps do not compose");
    const Formula h = hab.left();
    const Formula a = hab.right().left();
    const Formula b = hab.right().right();
    const Formula c = hbc.right().right();
    // h → (a → (b → c))
    std::size_t k1 = weaken(ax("ipc1", {{"phi", Formula::imp(b, c)}, {"psi", a}}), h);
    std::size_t habc = lifted_mp(j, k1);
    // h → ((a → b) → (a → c))
    std::size_t k2 = weaken(ax("ipc2", {{"phi", a}, {"psi", b}, {"chi", c}}), h);
    std::size_t step = lifted_mp(habc, k2);
    return lifted_mp(i, step);
}

HProof cp_proof(Formula phi) {
    // With x = φ ∧ □φ: ⊢ φ → (□x → x), then SL at x gives φ → x.
    HProofBuilder b;
    const Formula bp = Formula::box(phi);
    const Formula x = Formula::conj(phi, bp);
    std::size_t x_phi = b.ax("ipc3", {{"phi", phi}, {"psi", bp}});
    std::size_t nec_x_phi = b.nec(x_phi);
    std::size_t k = b.ax("K", {{"phi", x}, {"psi", phi}});
    std::size_t bx_bp = b.mp(nec_x_phi, k);
    std::size_t g1 = b.weaken(bx_bp, phi);
    std::size_t t1 = b.ax("ipc5", {{"phi", phi}, {"psi", bp}});
    std::size_t g2 = b.lifted_chain(g1, t1);
    std::size_t sl = b.ax("SL", {{"phi", x}});
    std::size_t g3 = b.chain(g2, sl);
    std::size_t x_bp = b.ax("ipc4", {{"phi", phi}, {"psi", bp}});
    std::size_t last = b.chain(g3, x_bp);
    if (b.formula(last) != Formula::imp(phi, bp))
        throw std::logic_error("cp_proof built the wrong goal");
    return b.proof();
}

const std::vector<HFixture>& hilbert_fixtures() {
    static const std::vector<HFixture> all = [] {
        const Formula p = Formula::atom("p");
        const Formula q = Formula::atom("q");
        std::vector<HFixture> out;
        auto single = [&](const char* id, const Substitution& s) {
            HProofBuilder b;
            b.ax(id, s);
            out.push_back({id, b.proof()});
        };
        single("K", {{"phi", p}, {"psi", q}});
        single("SL", {{"phi", p}});
        single("KM", {{"phi", p}, {"psi", q}});
        out.push_back({"CP", cp_proof(p)});
        out.push_back({"4", cp_proof(Formula::box(p))});
        {
            // SL, Nec, K: □(□p → p) → □p
            HProofBuilder b;
            const Formula bpp = Formula::imp(Formula::box(p), p);
            std::size_t sl = b.ax("SL", {{"phi", p}});
            std::size_t n = b.nec(sl);
            std::size_t k = b.ax("K", {{"phi", bpp}, {"psi", p}});
            b.mp(n, k);
            out.push_back({"GL", b.proof()});
        }
        {
            HProofBuilder b;
            b.nec(b.identity(Formula::bottom()));
            out.push_back({"nec_top", b.proof()});
        }
        {
            HProofBuilder b(FormulaSet{p});
            std::size_t e = b.ei(p);
            std::size_t a = b.ax("ipc6", {{"phi", p}, {"psi", q}});
            b.mp(e, a);
            out.push_back({"or_intro_context", b.proof()});
        }
        return out;
    }();
    return all;
}

std::string hproof_to_json(const HProof& p, int indent) {
    nlohmann::ordered_json j;
    j["context"] = nlohmann::ordered_json::array();
    for (Formula f : p.context)
        j["context"].push_back(print_formula(f));
    j["steps"] = nlohmann::ordered_json::array();
    for (const HStep& s : p.steps) {
        nlohmann::ordered_json st;
        st["kind"] = std::string(rule_name(s.rule));
        nlohmann::ordered_json args = nlohmann::ordered_json::array();
        switch (s.rule) {
        case HRule::Ax: {
            args.push_back(s.scheme);
            if (!s.subst.empty()) {
                nlohmann::ordered_json sub = nlohmann::ordered_json::object();
                for (const auto& [k, f] : s.subst)
                    sub[k] = print_formula(f);
                args.push_back(sub);
            }
            break;
        }
        case HRule::EI:
            break;
        case HRule::MP:
            args.push_back(s.i);
            args.push_back(s.j);
            break;
        case HRule::Nec:
            args.push_back(s.i);
            break;
        }
        st["args"] = args;
        st["formula"] = print_formula(s.formula);
        j["steps"].push_back(st);
    }
    return j.dump(indent);
}

HProof hproof_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
    auto parse = [](const nlohmann::json& v, const std::string& where) {
        if (!v.is_string())
            throw std::invalid_argument(where + ": expected a formula string");
        try {
            return parse_formula(v.get<std::string>());
        } catch (const ParseError& e) {
            throw std::invalid_argument(where + ": " + e.message());
        }
    };
    auto index = [](const nlohmann::json& v, const std::string& where) {
        if (!v.is_number_unsigned())
            throw std::invalid_argument(where + ": expected a step index");
        return v.get<std::size_t>();
    };
    if (!j.is_object() || !j.contains("steps") || !j["steps"].is_array())
        throw std::invalid_argument("proof needs a \"steps\" array");
    HProof p;
    if (j.contains("context")) {
        if (!j["context"].is_array())
            throw std::invalid_argument("\"context\" must be an array");
        for (const auto& f : j["context"])
            p.context.insert(parse(f, "context"));
    }
    std::size_t k = 0;
    for (const auto& st : j["steps"]) {
        const std::string where = "step " + std::to_string(k++);
        if (!st.is_object() || !st.contains("kind") || !st.contains("formula"))
            throw std::invalid_argument(where + ": needs \"kind\" and \"formula\"");
        HStep s;
        s.formula = parse(st["formula"], where);
        const std::string kind = st["kind"].is_string() ? st["kind"].get<std::string>() : "";
        const nlohmann::json args = st.contains("args") ? st["args"] : nlohmann::json::array();
        if (!args.is_array())
            throw std::invalid_argument(where + ": \"args\" must be an array");
        if (kind == "Ax") {
            s.rule = HRule::Ax;
            if (args.empty() || !args[0].is_string())
                throw std::invalid_argument(where + ": Ax needs a scheme id");
            s.scheme = args[0].get<std::string>();
            if (args.size() > 1) {
                if (!args[1].is_object())
                    throw std::invalid_argument(where + ": substitution must be an object");
                for (const auto& [name, f] : args[1].items())
                    s.subst[name] = parse(f, where);
            }
        } else if (kind == "EI") {
            s.rule = HRule::EI;
        } else if (kind == "MP") {
            s.rule = HRule::MP;
            if (args.size() != 2)
                throw std::invalid_argument(where + ": MP needs two step indices");
            s.i = index(args[0], where);
            s.j = index(args[1], where);
        } else if (kind == "Nec") {
            s.rule = HRule::Nec;
            if (args.size() != 1)
                throw std::invalid_argument(where + ": Nec needs one step index");
            s.i = index(args[0], where);
        } else {
            throw std::invalid_argument(where + ": unknown kind '" + kind + "'");
        }
        p.steps.push_back(std::move(s));
    }
    return p;
}

} // namespace km
