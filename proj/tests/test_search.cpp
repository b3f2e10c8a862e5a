#include "doctest.h"
#include "support.hpp"

#include "km/calculus.hpp"
#include "km/corpus.hpp"
#include "km/kripke.hpp"

using namespace km;
using km::test::F;
using km::test::S;

TEST_CASE("the KM sequent") {
    const Sequent s = S("box p => q | (q -> p)");
    const ProofResult r = prove(s);
    REQUIRE(r.provable);
    REQUIRE(r.tree.has_value());
    CHECK(check_proof(*r.tree));
    CHECK(r.tree->conclusion() == s);
    CHECK(r.tree->node.rule == RuleId::OrR);
    const ProofTree& imp = r.tree->children.at(0);
    CHECK(imp.node.rule == RuleId::ImpR);
    CHECK(imp.conclusion() == S("box p => q, q -> p"));
    CHECK(imp.node.premises == std::vector<Sequent>{S("box p, q => q, p"), S("p, q => p")});
}

TEST_CASE("notable theorems") {
    for (const char* text : {"=> box p -> box box p", "=> box (box p -> p) -> box p", "=> p -> box p",
                             "=> box (p -> q) -> box p -> box q", "=> (box p -> p) -> p",
                             "=> box p -> q | (q -> p)"}) {
        const ProofResult r = prove(S(text));
        CHECK_MESSAGE(r.provable, text);
        if (r.provable)
            CHECK(check_proof(*r.tree));
    }
}

TEST_CASE("non-theorems") {
    for (const char* text : {"=> p | (p -> false)", "=> p", "=> ((p -> q) -> p) -> p", "=> box p -> p",
                             "=> box false", "=> (p -> q) | (q -> p)", "=>"}) {
        CHECK_MESSAGE(!prove(S(text)).provable, text);
        CHECK_MESSAGE(countermodel_search(S(text), 3).has_value(), text);
    }
}

TEST_CASE("prove_bool") {
    CHECK(prove_bool(S("p & q => q, false")));
    CHECK_FALSE(prove_bool(S("=>")));
    CHECK(prove_bool(S("false =>")));
    CHECK(prove_bool(S("p, p -> q => q")));
}

TEST_CASE("measure tracing stays on and never fires") {
    CorpusGenerator gen(default_atoms(3), 8);
    Prover prover;
    REQUIRE(prover.config().trace_measure);
    for (int i = 0; i < 200; ++i)
        CHECK_NOTHROW(prover.prove(gen.sequent(25)));
    CHECK(prover.stats().measure_checks > 0);
}

TEST_CASE("certificates of random provable sequents check") {
    CorpusGenerator gen(default_atoms(3), 9);
    Prover prover;
    int provable = 0;
    for (int i = 0; i < 300; ++i) {
        const Sequent s = gen.sequent(20);
        const ProofResult r = prover.prove(s);
        if (!r.provable)
            continue;
        ++provable;
        CHECK(r.tree->conclusion() == s);
        CHECK(check_proof(*r.tree));
    }
    CHECK(provable > 30);
}

TEST_CASE("verdicts agree with finite models") {
    // Soundness: no provable sequent has a countermodel. For this small
    // corpus the converse holds too: every unprovable one is refuted on at
    // most four worlds.
    CorpusGenerator gen(default_atoms(2), 10);
    Prover prover;
    for (int i = 0; i < 300; ++i) {
        const Sequent s = gen.sequent(10);
        const bool p = prover.provable(s);
        const bool refuted = countermodel_search(s, 4).has_value();
        CHECK_MESSAGE(p != refuted, print_sequent(s));
    }
}

TEST_CASE("plain search and the optimised search agree") {
    CorpusGenerator gen(default_atoms(3), 12);
    Prover fast;
    Prover plain(plain_search_config());
    SearchConfig shuffled;
    shuffled.branch_seed = 77;
    Prover other(shuffled);
    for (int i = 0; i < 150; ++i) {
        const Sequent s = gen.sequent(14);
        const bool want = fast.provable(s);
        CHECK_MESSAGE(plain.provable(s) == want, print_sequent(s));
        CHECK(other.provable(s) == want);
    }
}

TEST_CASE("the admissible arrow-left rule does not change verdicts") {
    CorpusGenerator gen(default_atoms(3), 13);
    SearchConfig cfg;
    cfg.admissible_arrow_left = true;
    Prover with(cfg);
    Prover without;
    for (int i = 0; i < 200; ++i) {
        const Sequent s = gen.sequent(18);
        const ProofResult r = with.prove(s);
        CHECK(r.provable == without.provable(s));
        if (r.provable)
            CHECK(check_proof(*r.tree));
    }
}

TEST_CASE("admissibility probes") {
    Prover prover;
    AdmissibilityWitness w{FMultiset{F("p"), F("p -> q")}, FMultiset{F("q")}, {F("q")}};
    const AdmissibilityResult cut = admissibility_probe(AdmissibleRule::Cut, w, prover);
    CHECK(cut.holds());

    AdmissibilityWitness c{FMultiset{F("box p")}, FMultiset{}, {F("q | (q -> p)")}};
    const RuleShape shape = admissible_shape(AdmissibleRule::ContrR, c);
    REQUIRE(shape.premises.size() == 1);
    CHECK(shape.premises[0] == S("box p => q | (q -> p), q | (q -> p)"));
    CHECK(shape.conclusion == S("box p => q | (q -> p)"));
    CHECK(admissibility_probe(AdmissibleRule::ContrR, c, prover).holds());

    AdmissibilityWitness inv{FMultiset{F("q")}, FMultiset{F("r")}, {F("p"), F("q"), F("r")}};
    const RuleShape is = admissible_shape(AdmissibleRule::ArrArrLInv, inv);
    CHECK(is.premises == std::vector<Sequent>{S("q, (p -> q) -> r => r")});
    CHECK(is.conclusion == S("q, p, q -> r => r"));
    CHECK(admissibility_probe(AdmissibleRule::ArrArrLInv, inv, prover).holds());

    AdmissibilityWitness bad{FMultiset{}, FMultiset{}, {F("p")}};
    const AdmissibilityResult r = admissibility_probe(AdmissibleRule::WeakL, bad, prover);
    CHECK(r.failed_premise == std::size_t{0});
    CHECK_FALSE(r.holds());
}

TEST_CASE("step cap is diagnostic only") {
    SearchConfig cfg = plain_search_config();
    cfg.max_steps = 1;
    CHECK_THROWS_AS(prove(S("=> box (box p -> p) -> box p"), cfg), SearchInternalError);
}
