#include "doctest.h"
#include "support.hpp"

#include "km/hilbert.hpp"
#include "km/kripke.hpp"

#include <random>

using namespace km;
using km::test::F;

namespace {

HStep ax_step(std::string id, Substitution s, Formula f) {
    HStep st;
    st.rule = HRule::Ax;
    st.scheme = std::move(id);
    st.subst = std::move(s);
    st.formula = f;
    return st;
}

HStep mp_step(std::size_t i, std::size_t j, Formula f) {
    HStep st;
    st.rule = HRule::MP;
    st.i = i;
    st.j = j;
    st.formula = f;
    return st;
}

HStep ei_step(Formula f) {
    HStep st;
    st.rule = HRule::EI;
    st.formula = f;
    return st;
}

HStep nec_step(std::size_t i, Formula f) {
    HStep st;
    st.rule = HRule::Nec;
    st.i = i;
    st.formula = f;
    return st;
}

HProof or_intro() {
    HProof p;
    p.context = {F("p")};
    p.steps = {ei_step(F("p")), ax_step("ipc6", {{"phi", F("p")}, {"psi", F("q")}}, F("p -> p | q")),
               mp_step(0, 1, F("p | q"))};
    return p;
}

} // namespace

TEST_CASE("scheme table") {
    CHECK(schemes().size() == 12);
    CHECK(print_scheme(scheme("KM")) == "□φ → (ψ ∨ (ψ → φ))");
    CHECK_THROWS_AS(scheme("ipc10"), std::invalid_argument);
    CHECK(instantiate("K", {{"phi", F("p")}, {"psi", F("q")}}) == F("box (p -> q) -> box p -> box q"));
    CHECK_THROWS_AS(instantiate("K", {{"phi", F("p")}}), std::invalid_argument);
}

TEST_CASE("scheme matching") {
    const auto sl = scheme_match("SL", F("(box q -> q) -> q"));
    REQUIRE(sl.has_value());
    CHECK(*sl == Substitution{{"phi", F("q")}});
    const auto k = scheme_match("K", F("box (p -> q) -> (box p -> box q)"));
    REQUIRE(k.has_value());
    CHECK(*k == Substitution{{"phi", F("p")}, {"psi", F("q")}});
    CHECK_FALSE(scheme_match("SL", F("p -> p")).has_value());
    CHECK_FALSE(scheme_match("ipc3", F("p & q -> q")).has_value());
    CHECK(scheme_match("ipc1", F("p -> p -> p")).has_value());
    CHECK_FALSE(scheme_match("KM", F("box p -> q | (r -> p)")).has_value());
}

TEST_CASE("every scheme instance is a theorem with no small countermodel") {
    Prover prover;
    const Substitution subs[] = {
        {{"phi", F("p")}, {"psi", F("q")}, {"chi", F("r")}},
        {{"phi", F("box p -> q")}, {"psi", F("p | r")}, {"chi", F("false")}},
        {{"phi", F("q & box r")}, {"psi", F("box box p")}, {"chi", F("p -> q")}},
    };
    for (const Scheme& sc : schemes())
        for (const Substitution& s : subs) {
            const Formula f = instantiate(sc.id, s);
            CHECK_MESSAGE(prover.provable({{}, FMultiset{f}}), sc.id);
            CHECK_FALSE(countermodel_search({{}, FMultiset{f}}, 3).has_value());
            CHECK(scheme_match(sc.id, f).has_value());
        }
}

TEST_CASE("check_hproof") {
    CHECK(check_hproof(or_intro()));

    HProof km;
    km.steps = {ax_step("KM", {{"phi", F("p")}, {"psi", F("q")}}, F("box p -> q | (q -> p)"))};
    CHECK(check_hproof(km));
    km.steps[0].subst.clear();
    CHECK(check_hproof(km));

    HProof bad = or_intro();
    bad.steps[2] = mp_step(1, 0, F("p | q"));
    const HCheckResult r = check_hproof(bad);
    CHECK_FALSE(r);
    CHECK(r.bad_step == std::size_t{2});

    HProof wrong_ax = or_intro();
    wrong_ax.steps[1].formula = F("p -> q | p");
    CHECK(check_hproof(wrong_ax).bad_step == std::size_t{1});

    HProof not_in_context = or_intro();
    not_in_context.context.clear();
    CHECK(check_hproof(not_in_context).bad_step == std::size_t{0});

    HProof forward;
    forward.steps = {mp_step(0, 1, F("q"))};
    CHECK_FALSE(check_hproof(forward));

    const HCheckResult empty = check_hproof(HProof{});
    CHECK_FALSE(empty);
    CHECK_FALSE(empty.bad_step.has_value());
    CHECK_FALSE(nec_variant_check(HProof{}));
    CHECK_THROWS_AS(static_cast<void>(HProof{}.goal()), std::logic_error);
}

TEST_CASE("necessitation") {
    HProofBuilder b;
    const std::size_t id = b.identity(F("false"));
    const std::size_t n = b.nec(id);
    CHECK(b.formula(n) == F("box (false -> false)"));
    CHECK(check_hproof(b.proof()));
    CHECK(nec_variant_check(b.proof()));

    // Nec over an assumption: fine in general, refused by the variant.
    HProof ctx;
    ctx.context = {F("p")};
    ctx.steps = {ei_step(F("p")), nec_step(0, F("box p"))};
    CHECK(check_hproof(ctx));
    const HCheckResult v = nec_variant_check(ctx);
    CHECK_FALSE(v);
    CHECK(v.bad_step == std::size_t{1});
}

TEST_CASE("bundled fixtures") {
    Prover prover;
    std::set<std::string> names;
    for (const HFixture& fx : hilbert_fixtures()) {
        names.insert(fx.name);
        CHECK_MESSAGE(check_hproof(fx.proof), fx.name);
        CHECK_MESSAGE(nec_variant_check(fx.proof), fx.name);
        const Sequent s{FMultiset(std::vector<Formula>(fx.proof.context.begin(), fx.proof.context.end())),
                        FMultiset{fx.proof.goal()}};
        CHECK(prover.provable(s));
    }
    for (const char* n : {"K", "SL", "KM", "CP", "4", "GL"})
        CHECK(names.count(n) == 1);
}

TEST_CASE("CP for compound formulas") {
    for (const char* text : {"p", "box q -> p", "(p -> q) -> r", "p | box q", "false"}) {
        const HProof p = cp_proof(F(text));
        CHECK(check_hproof(p));
        CHECK(p.goal() == Formula::imp(F(text), Formula::box(F(text))));
    }
}

TEST_CASE("random derivations are sound") {
    // Modus ponens over random axiom instances; whatever the checker
    // accepts must be a theorem.
    std::mt19937_64 rng(5);
    const std::vector<Formula> pool{F("p"), F("q"), F("box p"), F("p -> q"), F("q | r"), F("false")};
    Prover prover;
    for (int round = 0; round < 40; ++round) {
        HProofBuilder b;
        for (int k = 0; k < 6; ++k) {
            const Scheme& sc = schemes()[rng() % schemes().size()];
            b.ax(sc.id, {{"phi", pool[rng() % pool.size()]}, {"psi", pool[rng() % pool.size()]},
                         {"chi", pool[rng() % pool.size()]}});
        }
        for (int k = 0; k < 30; ++k) {
            const std::size_t i = rng() % b.size(), j = rng() % b.size();
            const Formula fj = b.formula(j);
            if (fj.is_imp() && fj.left() == b.formula(i))
                b.mp(i, j);
            else if (k % 7 == 0)
                b.nec(i);
        }
        REQUIRE(check_hproof(b.proof()));
        for (std::size_t s = 0; s < b.size(); ++s)
            CHECK(prover.provable({{}, FMultiset{b.formula(s)}}));
    }
}

TEST_CASE("Hilbert JSON") {
    for (const HFixture& fx : hilbert_fixtures()) {
        const std::string text = hproof_to_json(fx.proof);
        const HProof back = hproof_from_json(text);
        CHECK(hproof_to_json(back) == text);
        CHECK(check_hproof(back));
    }
    CHECK_THROWS_AS(hproof_from_json("{\"steps\": ["), std::invalid_argument);
    CHECK_THROWS_AS(hproof_from_json(R"({"context":[],"steps":[{"kind":"EI","args":[],"formula":"p &"}]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(hproof_from_json(R"({"context":[],"steps":[{"kind":"Cut","args":[],"formula":"p"}]})"),
                    std::invalid_argument);
    const HProof p = hproof_from_json(
        R"({"context":["p"],"steps":[{"kind":"EI","args":[],"formula":"p"},
            {"kind":"Ax","args":["ipc6",{"phi":"p","psi":"q"}],"formula":"p -> p | q"},
            {"kind":"MP","args":[0,1],"formula":"p | q"}]})");
    CHECK(check_hproof(p));
}
