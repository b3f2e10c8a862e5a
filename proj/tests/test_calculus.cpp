#include "doctest.h"
#include "support.hpp"

#include "km/calculus.hpp"
#include "km/corpus.hpp"
#include "km/kripke.hpp"

#include <algorithm>

using namespace km;
using km::test::F;
using km::test::S;

namespace {

const RuleInstance* find(const std::vector<RuleInstance>& v, RuleId r) {
    auto it = std::find_if(v.begin(), v.end(), [&](const RuleInstance& i) { return i.rule == r; });
    return it == v.end() ? nullptr : &*it;
}

ProofTree leaf(RuleId r, const Sequent& s, Formula principal) { return ProofTree{RuleInstance{r, s, {principal}, {}}, {}}; }

// The two-level derivation of the KM sequent, written out by hand.
ProofTree km_derivation() {
    const Sequent left = S("box p, q => q, p");
    const Sequent right = S("p, q => p");
    RuleInstance root{RuleId::ImpR, S("box p => q, q -> p"), {F("q -> p")}, {left, right}};
    return ProofTree{root, {leaf(RuleId::IdP, left, F("q")), leaf(RuleId::IdP, right, F("p"))}};
}

} // namespace

TEST_CASE("rule names round trip") {
    for (RuleId r : kAllRules)
        CHECK(rule_from_name(rule_name(r)) == r);
    CHECK_FALSE(rule_from_name("cut").has_value());
}

TEST_CASE("box right") {
    const auto v = applicable_instances(S("=> box p"));
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == RuleId::BoxR);
    CHECK(v[0].premises == std::vector<Sequent>{S("box p => p")});
    CHECK(applicable_instances(S("box q, r => box p, s"))[0].premises == std::vector<Sequent>{S("q, r, box p => p")});
}

TEST_CASE("implication right keeps the context once and jumps once") {
    const auto v = applicable_instances(S("box p => q, q -> p"));
    const RuleInstance* i = find(v, RuleId::ImpR);
    REQUIRE(i != nullptr);
    CHECK(i->premises == std::vector<Sequent>{S("box p, q => q, p"), S("p, q => p")});
}

TEST_CASE("no rule for the empty sequent or bare atoms") {
    CHECK(applicable_instances(S("=>")).empty());
    CHECK(applicable_instances(S("p => q")).empty());
    CHECK(applicable_instances(S("box p => q")).empty());
}

TEST_CASE("left rules") {
    CHECK(find(applicable_instances(S("p, p -> q => r")), RuleId::AtomImpL)->premises ==
          std::vector<Sequent>{S("p, q => r")});
    CHECK(find(applicable_instances(S("(p & q) -> r =>")), RuleId::AndImpL)->premises ==
          std::vector<Sequent>{S("p -> (q -> r) =>")});
    CHECK(find(applicable_instances(S("(p | q) -> r =>")), RuleId::OrImpL)->premises ==
          std::vector<Sequent>{S("p -> r, q -> r =>")});
    CHECK(find(applicable_instances(S("box q, box p -> r => s")), RuleId::BoxImpL)->premises ==
          std::vector<Sequent>{S("q, box p, r => p"), S("box q, r => s")});
    CHECK(find(applicable_instances(S("box s, (p -> q) -> r => t")), RuleId::ImpImpL)->premises ==
          std::vector<Sequent>{S("box s, q -> r, p => t, q"), S("s, q -> r, p => q"), S("box s, r => t")});
    CHECK(find(applicable_instances(S("false, q =>")), RuleId::BotL) != nullptr);
    CHECK(find(applicable_instances(S("p -> q => r")), RuleId::AtomImpL) == nullptr);
}

TEST_CASE("variant rules") {
    const auto v = variant_rule_instances(S("(p -> q) -> r => s"));
    auto get = [&](VariantRule r) {
        return *std::find_if(v.begin(), v.end(), [&](const VariantInstance& i) { return i.rule == r; });
    };
    CHECK(get(VariantRule::ImpImpL2).derived == std::vector<Sequent>{S("q -> r, p => s"), S("q -> r, p => q"), S("r => s")});
    CHECK(get(VariantRule::ImpImpLInv).derived == std::vector<Sequent>{S("p, q -> r => s")});
    const auto w = variant_rule_instances(S("g => p | q, p -> q"));
    REQUIRE(w.size() == 2);
    CHECK(w[0].rule == VariantRule::OrRInv);
    CHECK(w[0].derived == std::vector<Sequent>{S("g => p, q, p -> q")});
    CHECK(w[1].derived == std::vector<Sequent>{S("g, p => p | q, q")});
}

TEST_CASE("every premise is smaller than its conclusion") {
    CorpusGenerator gen(default_atoms(3), 21);
    std::size_t instances = 0;
    for (int k = 0; k < 1500; ++k) {
        const Sequent s = gen.sequent(25);
        for (const auto& inst : applicable_instances(s))
            for (const auto& prem : inst.premises) {
                ++instances;
                CHECK(seq_less(prem, s));
                CHECK(sequent_weight(prem) < sequent_weight(s));
            }
    }
    CHECK(instances > 1000);
}

TEST_CASE("every rule is sound on finite models") {
    // A refuted conclusion has a refuted premise. Premises are refuted at
    // generated submodels, which are no larger than the model itself.
    CorpusGenerator gen(default_atoms(2), 4);
    std::size_t refuted = 0;
    for (int k = 0; k < 300; ++k) {
        const Sequent s = gen.sequent(12);
        if (!countermodel_search(s, 3))
            continue;
        for (const auto& inst : applicable_instances(s)) {
            ++refuted;
            const bool some = std::any_of(inst.premises.begin(), inst.premises.end(),
                                          [](const Sequent& p) { return countermodel_search(p, 3).has_value(); });
            CHECK_MESSAGE(some, rule_name(inst.rule), " at ", print_sequent(s));
        }
    }
    CHECK(refuted > 50);
}

TEST_CASE("check_proof") {
    const ProofTree t = km_derivation();
    CHECK(check_proof(t));
    CHECK(t.size() == 3);
    CHECK(t.height() == 2);

    ProofTree broken = t;
    broken.children[1].node.conclusion = S("p, q => q");
    const ProofCheck c = check_proof(broken);
    CHECK_FALSE(c);
    CHECK(c.path == std::vector<std::size_t>{1});

    CHECK(check_proof(leaf(RuleId::BotL, S("false, q =>"), F("false"))));
    CHECK_FALSE(check_proof(leaf(RuleId::IdP, S("p => q"), F("p"))));

    ProofTree missing = t;
    missing.children.pop_back();
    CHECK_FALSE(check_proof(missing));

    ProofTree wrong_rule = t;
    wrong_rule.node.rule = RuleId::OrR;
    CHECK_FALSE(check_proof(wrong_rule));
}

TEST_CASE("proof JSON") {
    const ProofTree t = km_derivation();
    const std::string text = proof_to_json(t);
    const ProofTree back = proof_from_json(text);
    CHECK(check_proof(back));
    CHECK(proof_to_json(back) == text);
    CHECK(text.find("\"rule\": \"impR\"") != std::string::npos);
    CHECK_THROWS_AS(proof_from_json("{\"rule\": \"impR\""), std::invalid_argument);
    CHECK_THROWS_AS(proof_from_json("{\"rule\": \"nope\", \"conclusion\": \"=>\", \"principal\": \"\", \"children\": []}"),
                    std::invalid_argument);
    const std::string r = render_proof(t);
    CHECK(r.find("→R") != std::string::npos);
}
