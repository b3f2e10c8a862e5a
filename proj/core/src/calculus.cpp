#include "km/calculus.hpp"

#include "km/parser.hpp"

#include "json.hpp"

#include <algorithm>
#include <stdexcept>

namespace km {

namespace {

struct RuleText {
    RuleId id;
    std::string_view name;
    std::string_view symbol;
};

constexpr RuleText kRuleText[] = {
    {RuleId::BotL, "botL", "⊥L"},       {RuleId::IdP, "IdP", "IdP"},
    {RuleId::AndL, "andL", "∧L"},       {RuleId::AndR, "andR", "∧R"},
    {RuleId::OrL, "orL", "∨L"},         {RuleId::OrR, "orR", "∨R"},
    {RuleId::AndImpL, "andImpL", "∧→L"}, {RuleId::OrImpL, "orImpL", "∨→L"},
    {RuleId::AtomImpL, "atomImpL", "p→L"}, {RuleId::BoxR, "boxR", "□R"},
    {RuleId::BoxImpL, "boxImpL", "□→L"}, {RuleId::ImpR, "impR", "→R"},
    {RuleId::ImpImpL, "impImpL", "→→L"},
};

Sequent seq(FMultiset l, FMultiset r) { return Sequent{std::move(l), std::move(r)}; }

std::string join_principal(const std::vector<Formula>& fs) {
    std::string out;
    for (Formula f : fs) {
        if (!out.empty())
            out += ", ";
        out += print_formula(f);
    }
    return out;
}

} // namespace

std::string_view rule_name(RuleId r) { return kRuleText[static_cast<int>(r)].name; }

std::string_view rule_symbol(RuleId r) { return kRuleText[static_cast<int>(r)].symbol; }

std::optional<RuleId> rule_from_name(std::string_view name) {
    for (const auto& t : kRuleText)
        if (t.name == name || t.symbol == name)
            return t.id;
    return std::nullopt;
}

bool is_invertible(RuleId r) {
    switch (r) {
    case RuleId::AndL:
    case RuleId::AndR:
    case RuleId::OrL:
    case RuleId::OrR:
    case RuleId::AndImpL:
    case RuleId::OrImpL:
    case RuleId::AtomImpL:
        return true;
    default:
        return false;
    }
}

bool is_invertible_premise(RuleId r, std::size_t index) {
    switch (r) {
    case RuleId::ImpR:
        return index == 0;
    case RuleId::BoxImpL:
        return index == 1;
    case RuleId::ImpImpL:
        return index == 0 || index == 2;
    case RuleId::BoxR:
        return false;
    default:
        return is_invertible(r);
    }
}

bool is_axiom(const Sequent& s) {
    for (const auto& [f, c] : s.lhs) {
        if (f.is_bottom())
            return true;
        if (f.is_atom() && s.rhs.contains(f))
            return true;
    }
    return false;
}

std::vector<RuleInstance> applicable_instances(const Sequent& s, RuleMask mask) {
    auto want = [mask](RuleId r) { return (mask & rule_bit(r)) != 0; };
    std::vector<RuleInstance> out;
    const FMultiset& gamma = s.lhs;
    const FMultiset& delta = s.rhs;
    auto add = [&](RuleId r, std::vector<Formula> principal, std::vector<Sequent> premises) {
        out.push_back(RuleInstance{r, s, std::move(principal), std::move(premises)});
    };

    for (const auto& [f, count] : gamma) {
        switch (f.kind()) {
        case Kind::Bottom:
            if (want(RuleId::BotL))
                add(RuleId::BotL, {f}, {});
            break;
        case Kind::Atom:
            if (delta.contains(f))
                if (want(RuleId::IdP))
                    add(RuleId::IdP, {f}, {});
            break;
        case Kind::And:
            if (want(RuleId::AndL))
                add(RuleId::AndL, {f}, {seq(gamma.without(f).with({f.left(), f.right()}), delta)});
            break;
        case Kind::Or: {
            FMultiset rest = gamma.without(f);
            if (want(RuleId::OrL))
                add(RuleId::OrL, {f}, {seq(rest.with(f.left()), delta), seq(rest.with(f.right()), delta)});
            break;
        }
        case Kind::Imp: {
            Formula ante = f.left();
            Formula cons = f.right();
            FMultiset rest = gamma.without(f);
            switch (ante.kind()) {
            case Kind::And:
                if (want(RuleId::AndImpL))
                    add(RuleId::AndImpL, {f},
                    {seq(rest.with(Formula::imp(ante.left(), Formula::imp(ante.right(), cons))), delta)});
                break;
            case Kind::Or:
                if (want(RuleId::OrImpL))
                    add(RuleId::OrImpL, {f},
                    {seq(rest.with({Formula::imp(ante.left(), cons), Formula::imp(ante.right(), cons)}), delta)});
                break;
            case Kind::Atom:
                if (rest.contains(ante))
                    if (want(RuleId::AtomImpL))
                        add(RuleId::AtomImpL, {ante, f}, {seq(rest.with(cons), delta)});
                break;
            case Kind::Box: {
                Formula phi = ante.body();
                if (want(RuleId::BoxImpL))
                    add(RuleId::BoxImpL, {f},
                    {seq(box_inverse(rest).with({ante, cons}), FMultiset{phi}), seq(rest.with(cons), delta)});
                break;
            }
            case Kind::Imp: {
                // (φ→χ)→ψ
                Formula phi = ante.left();
                Formula chi = ante.right();
                Formula chi_psi = Formula::imp(chi, cons);
                if (want(RuleId::ImpImpL))
                    add(RuleId::ImpImpL, {f},
                    {seq(rest.with({chi_psi, phi}), delta.with(chi)),
                     seq(box_inverse(rest).with({chi_psi, phi}), FMultiset{chi}), seq(rest.with(cons), delta)});
                break;
            }
            case Kind::Bottom:
                break;
            }
            break;
        }
        case Kind::Box:
            break;
        }
    }

    for (const auto& [f, count] : delta) {
        switch (f.kind()) {
        case Kind::And: {
            FMultiset rest = delta.without(f);
            if (want(RuleId::AndR))
                add(RuleId::AndR, {f}, {seq(gamma, rest.with(f.left())), seq(gamma, rest.with(f.right()))});
            break;
        }
        case Kind::Or:
            if (want(RuleId::OrR))
                add(RuleId::OrR, {f}, {seq(gamma, delta.without(f).with({f.left(), f.right()}))});
            break;
        case Kind::Imp:
            if (want(RuleId::ImpR))
                add(RuleId::ImpR, {f},
                {seq(gamma.with(f.left()), delta.without(f).with(f.right())),
                 seq(box_inverse(gamma).with(f.left()), FMultiset{f.right()})});
            break;
        case Kind::Box:
            if (want(RuleId::BoxR))
                add(RuleId::BoxR, {f}, {seq(box_inverse(gamma).with(f), FMultiset{f.body()})});
            break;
        default:
            break;
        }
    }

    std::stable_sort(out.begin(), out.end(),
                     [](const RuleInstance& a, const RuleInstance& b) { return a.rule < b.rule; });
    return out;
}

std::size_t ProofTree::size() const {
    std::size_t n = 1;
    for (const auto& c : children)
        n += c.size();
    return n;
}

std::size_t ProofTree::height() const {
    std::size_t h = 0;
    for (const auto& c : children)
        h = std::max(h, c.height());
    return h + 1;
}

namespace {

ProofCheck check_at(const ProofTree& t, std::vector<std::size_t>& path) {
    auto fail = [&](std::string reason) { return ProofCheck{false, path, std::move(reason)}; };
    const RuleInstance& claimed = t.node;
    const RuleInstance* genuine = nullptr;
    auto candidates = applicable_instances(claimed.conclusion);
    for (const auto& inst : candidates)
        if (inst.rule == claimed.rule && inst.principal == claimed.principal) {
            genuine = &inst;
            break;
        }
    if (!genuine)
        return fail(std::string("no ") + std::string(rule_name(claimed.rule)) + " instance with principal '" +
                    join_principal(claimed.principal) + "' concludes " + print_sequent(claimed.conclusion));
    if (t.children.size() != genuine->premises.size())
        return fail("expected " + std::to_string(genuine->premises.size()) + " children, found " +
                    std::to_string(t.children.size()));
    for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (t.children[i].conclusion() != genuine->premises[i]) {
            path.push_back(i);
            auto r = fail("child concludes " + print_sequent(t.children[i].conclusion()) + " but premise is " +
                          print_sequent(genuine->premises[i]));
            path.pop_back();
            return r;
        }
    }
    if (genuine->premises != claimed.premises)
        return fail("premises do not match the " + std::string(rule_name(claimed.rule)) + " schema");
    for (std::size_t i = 0; i < t.children.size(); ++i) {
        path.push_back(i);
        auto r = check_at(t.children[i], path);
        path.pop_back();
        if (!r)
            return r;
    }
    return {};
}

} // namespace

ProofCheck check_proof(const ProofTree& t) {
    std::vector<std::size_t> path;
    return check_at(t, path);
}

std::string_view variant_name(VariantRule r) {
    switch (r) {
    case VariantRule::ImpImpL2:
        return "impImpL2";
    case VariantRule::OrRInv:
        return "orRInv";
    case VariantRule::ImpRInv:
        return "impRInv";
    case VariantRule::ImpImpLInv:
        return "impImpLInv";
    }
    return "?";
}

std::vector<VariantInstance> variant_rule_instances(const Sequent& s) {
    std::vector<VariantInstance> out;
    for (const auto& [f, c] : s.lhs) {
        if (!f.is_imp() || !f.left().is_imp())
            continue;
        Formula phi = f.left().left();
        Formula chi = f.left().right();
        Formula psi = f.right();
        FMultiset rest = s.lhs.without(f);
        Formula chi_psi = Formula::imp(chi, psi);
        out.push_back({VariantRule::ImpImpL2,
                       s,
                       {f},
                       {seq(rest.with({chi_psi, phi}), s.rhs), seq(box_inverse(rest).with({chi_psi, phi}), FMultiset{chi}),
                        seq(rest.with(psi), s.rhs)}});
        out.push_back({VariantRule::ImpImpLInv, s, {f}, {seq(rest.with({phi, chi_psi}), s.rhs)}});
    }
    for (const auto& [f, c] : s.rhs) {
        if (f.is(Kind::Or))
            out.push_back({VariantRule::OrRInv, s, {f}, {seq(s.lhs, s.rhs.without(f).with({f.left(), f.right()}))}});
        if (f.is_imp())
            out.push_back({VariantRule::ImpRInv, s, {f}, {seq(s.lhs.with(f.left()), s.rhs.without(f).with(f.right()))}});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const VariantInstance& a, const VariantInstance& b) { return a.rule < b.rule; });
    return out;
}

namespace {

nlohmann::ordered_json tree_json(const ProofTree& t) {
    nlohmann::ordered_json j;
    j["rule"] = std::string(rule_name(t.node.rule));
    j["conclusion"] = print_sequent(t.node.conclusion);
    j["principal"] = join_principal(t.node.principal);
    j["children"] = nlohmann::ordered_json::array();
    for (const auto& c : t.children)
        j["children"].push_back(tree_json(c));
    return j;
}

ProofTree tree_from(const nlohmann::json& j, const std::string& where) {
    auto bad = [&](const std::string& msg) { return std::invalid_argument(where + ": " + msg); };
    if (!j.is_object())
        throw bad("expected an object");
    for (const char* key : {"rule", "conclusion", "principal", "children"})
        if (!j.contains(key))
            throw bad(std::string("missing field '") + key + "'");
    if (!j["rule"].is_string() || !j["conclusion"].is_string() || !j["principal"].is_string() ||
        !j["children"].is_array())
        throw bad("field has the wrong type");
    auto rule = rule_from_name(j["rule"].get<std::string>());
    if (!rule)
        throw bad("unknown rule '" + j["rule"].get<std::string>() + "'");
    ProofTree t;
    t.node.rule = *rule;
    try {
        t.node.conclusion = parse_sequent(j["conclusion"].get<std::string>());
        t.node.principal = parse_formula_list(j["principal"].get<std::string>());
    } catch (const ParseError& e) {
        throw bad(e.what());
    }
    std::size_t i = 0;
    for (const auto& c : j["children"]) {
        t.children.push_back(tree_from(c, where + ".children[" + std::to_string(i++) + "]"));
        t.node.premises.push_back(t.children.back().conclusion());
    }
    return t;
}

void render_into(std::string& out, const ProofTree& t, int depth) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += print_sequent(t.node.conclusion);
    out += "   [";
    out += rule_symbol(t.node.rule);
    out += "]\n";
    for (const auto& c : t.children)
        render_into(out, c, depth + 1);
}

} // namespace

std::string proof_to_json(const ProofTree& t, int indent) { return tree_json(t).dump(indent); }

ProofTree proof_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
    return tree_from(j, "$");
}

std::string render_proof(const ProofTree& t) {
    std::string out;
    render_into(out, t, 0);
    return out;
}

} // namespace km
