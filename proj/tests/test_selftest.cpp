#include "doctest.h"
#include "support.hpp"

#include "km/selftest.hpp"

using namespace km;

TEST_CASE("default selftest passes and is deterministic") {
    SelftestOptions opts;
    opts.corpus_size = 60;
    opts.seed = 3;
    const SelftestReport a = run_selftest(opts);
    CHECK(a.passed());
    CHECK(a.suites.size() >= 10);
    for (const auto& s : a.suites) {
        CHECK_MESSAGE(s.passed(), s.name);
        CHECK_MESSAGE(s.checks > 0, s.name);
    }
    CHECK(run_selftest(opts).text() == a.text());
    opts.seed = 4;
    CHECK(run_selftest(opts).text() != a.text());
}

TEST_CASE("an injected fault is reported by name") {
    SelftestOptions opts;
    opts.corpus_size = 10;
    opts.inject_fault = "algebra_soundness";
    const SelftestReport r = run_selftest(opts);
    CHECK_FALSE(r.passed());
    CHECK(r.text().find("FAIL algebra_soundness") != std::string::npos);
    CHECK(r.text().find("injected fault") != std::string::npos);
}

TEST_CASE("suite failure messages are capped") {
    SuiteResult s{"x", 0, 0, {}};
    for (int i = 0; i < 20; ++i)
        s.fail("m" + std::to_string(i));
    CHECK(s.failures == 20);
    CHECK(s.messages.size() < 20);
}

TEST_CASE("admissibility sampling finds instances for every rule") {
    Prover prover;
    for (AdmissibleRule r : admissibility_suite_rules()) {
        const AdmissibilitySample s = sample_admissibility(r, 25, 9, prover, 25 * 400);
        CHECK_MESSAGE(s.instances == 25, admissible_name(r));
        CHECK(s.holds == s.instances);
    }
}

TEST_CASE("corpora are reproducible") {
    CHECK(sequent_corpus(20, 5) == sequent_corpus(20, 5));
    CHECK(formula_corpus(20, 5) == formula_corpus(20, 5));
    for (const Formula f : formula_corpus(50, 6))
        CHECK(f.weight() <= 15);
}
