// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include "km/algebra.hpp"
#include "km/calculus.hpp"
#include "km/corpus.hpp"
#include "km/interpolation.hpp"
#include "km/kripke.hpp"
#include "km/parser.hpp"
#include "km/search.hpp"
#include "km/selftest.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace km;

namespace {

using Clock = std::chrono::steady_clock;

// Wall-clock limits in seconds.
constexpr double kLimitFlagship = 1;
constexpr double kLimitBattery = 10;
constexpr double kLimitTermination = 120;
constexpr double kLimitAdmissibility = 300;
constexpr double kLimitSoundness = 600;
constexpr double kLimitInterpolation = 900;
constexpr double kLimitGolden = 10;

// Corpus parameters.
constexpr std::size_t kSequentCorpus = 1000;
constexpr std::uint64_t kSequentMaxWeight = 25;
constexpr std::uint64_t kSequentSeed = 1;
constexpr std::size_t kAdmissibilityInstances = 200;
constexpr std::size_t kAdmissibilityMaxAttempts = 200 * 400;
constexpr std::size_t kKripkeWorlds = 4;
constexpr std::size_t kAlgebraSize = 5;
constexpr std::size_t kInterpolationFormulas = 300;
constexpr std::uint64_t kInterpolationMaxWeight = 15;
constexpr std::uint64_t kInterpolationSeed = 2024;

struct Outcome {
    bool ok = true;
    std::string detail;
};

int failures = 0;

void report(int n, const std::string& name, double limit, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = secs < limit;
    const bool pass = o.ok && in_time;
    if (!pass)
        ++failures;
    char timing[96];
    std::snprintf(timing, sizeof timing, "%.2fs of %.0fs", secs, limit);
    std::cout << "criterion " << n << " " << (pass ? "PASS" : "FAIL") << " " << name << ": " << o.detail << " ["
              << timing << (in_time ? "" : ", over the limit") << "]" << std::endl;
}

Sequent seq(std::string_view text) { return parse_sequent(text); }

std::string first_messages(const SuiteResult& s) {
    std::string out;
    for (const auto& m : s.messages)
        out += "; " + m;
    return out;
}

struct InterpolationRun {
    SuiteResult suite{"interpolation", 0, 0, {}};
    SuiteResult golden{"golden", 0, 0, {}};
};

InterpolationRun run_interpolation(const InterpConfig& cfg, const std::vector<Formula>& formulas) {
    Prover prover;
    InterpolationRun r;
    r.suite = suite_interpolation(formulas, cfg, VerifyBudget{}, prover);
    r.golden = suite_golden(cfg, prover);
    return r;
}

// Formulas whose Full or Greedy verification failed, counted once each.
std::size_t failing_formulas(const InterpConfig& cfg, const std::vector<Formula>& formulas) {
    Prover prover;
    std::size_t bad = 0;
    for (Formula f : formulas) {
        const SuiteResult s = suite_interpolation({f}, cfg, VerifyBudget{}, prover);
        bad += s.passed() ? 0 : 1;
    }
    return bad;
}

} // namespace

int main() {
    std::cout << "km acceptance run\n";

    report(1, "flagship derivation", kLimitFlagship, [] {
        const Sequent s = seq("box p => q | (q -> p)");
        ProofResult r = prove(s);
        if (!r.provable)
            return Outcome{false, "not provable"};
        if (ProofCheck c = check_proof(*r.tree); !c)
            return Outcome{false, "certificate rejected: " + c.reason};
        if (r.tree->conclusion() != s)
            return Outcome{false, "certificate proves another sequent"};
        // Find the →R node on □p ⇒ q, q→p and compare it with the display.
        const Sequent want = seq("box p => q, q -> p");
        const std::vector<Sequent> premises{seq("box p, q => q, p"), seq("p, q => p")};
        std::function<const ProofTree*(const ProofTree&)> find = [&](const ProofTree& t) -> const ProofTree* {
            if (t.node.rule == RuleId::ImpR && t.conclusion() == want)
                return &t;
            for (const auto& c : t.children)
                if (const ProofTree* x = find(c))
                    return x;
            return nullptr;
        };
        const ProofTree* node = find(*r.tree);
        if (!node)
            return Outcome{false, "no →R node on box p => q, q -> p"};
        if (node->node.premises != premises)
            return Outcome{false, "→R premises differ from the expected pair"};
        for (const auto& c : node->children)
            if (c.node.rule != RuleId::IdP)
                return Outcome{false, "→R children are not IdP leaves"};
        return Outcome{true, "provable; →R over IdP leaves (box p, q => q, p) and (p, q => p); " +
                                 std::to_string(r.tree->size()) + " nodes"};
    });

    report(2, "axiom battery", kLimitBattery, [] {
        Prover prover;
        const std::pair<const char*, const char*> theorems[] = {
            {"4", "=> box p -> box box p"},
            {"GL", "=> box (box p -> p) -> box p"},
            {"CP", "=> p -> box p"},
            {"K", "=> box (p -> q) -> box p -> box q"},
            {"SL", "=> (box p -> p) -> p"},
            {"KM", "=> box p -> q | (q -> p)"},
        };
        std::string detail;
        for (const auto& [name, text] : theorems) {
            ProofResult r = prover.prove(seq(text));
            if (!r.provable || !check_proof(*r.tree))
                return Outcome{false, std::string(name) + " not proved"};
        }
        detail = "4, GL, CP, K, SL, KM proved";
        const Sequent em = seq("=> p | (p -> false)");
        const Sequent peirce = seq("=> ((p -> q) -> p) -> p");
        if (prover.provable(em) || prover.provable(peirce))
            return Outcome{false, detail + "; a non-theorem was proved"};
        const auto em_cm = countermodel_search(em, 2);
        if (!em_cm || em_cm->model.worlds != 2)
            return Outcome{false, detail + "; no 2-world countermodel for excluded middle"};
        const auto pe_cm = countermodel_search(peirce, 3);
        if (!pe_cm)
            return Outcome{false, detail + "; no countermodel on at most 3 worlds for Peirce"};
        return Outcome{true, detail + "; excluded middle refuted on 2 worlds, Peirce on " +
                                 std::to_string(pe_cm->model.worlds)};
    });

    const std::vector<Sequent> corpus = sequent_corpus(kSequentCorpus, kSequentSeed, kSequentMaxWeight);
    Prover shared;
    std::vector<bool> provable(corpus.size());

    report(3, "termination", kLimitTermination, [&] {
        // Plain backward search over the thirteen rules, then the default
        // optimised search; both trace the measure at every expansion.
        Prover plain(plain_search_config());
        const SuiteResult p = suite_termination(corpus, plain);
        const SuiteResult s = suite_termination(corpus, shared);
        std::size_t n = 0, disagree = 0;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            n += (provable[i] = shared.provable(corpus[i])) ? 1 : 0;
            disagree += plain.provable(corpus[i]) != provable[i] ? 1 : 0;
        }
        return Outcome{p.passed() && s.passed() && disagree == 0,
                       std::to_string(corpus.size()) + " sequents, " + std::to_string(n) + " provable; plain search " +
                           std::to_string(plain.stats().measure_checks) + " measure checks, " +
                           std::to_string(p.failures) + " failures; default search " +
                           std::to_string(s.failures) + " failures; " + std::to_string(disagree) +
                           " verdict disagreements" + first_messages(p) + first_messages(s)};
    });

    report(4, "admissibility", kLimitAdmissibility, [] {
        Prover prover;
        bool ok = true;
        std::ostringstream detail;
        const AdmissibleRule rules[] = {AdmissibleRule::Cut,        AdmissibleRule::ContrL, AdmissibleRule::ContrR,
                                        AdmissibleRule::ArrL,       AdmissibleRule::ArrArrLDup,
                                        AdmissibleRule::OrRInv,     AdmissibleRule::ImpRInv,
                                        AdmissibleRule::ArrArrLInv};
        std::uint64_t seed = 100;
        for (AdmissibleRule r : rules) {
            const AdmissibilitySample s =
                sample_admissibility(r, kAdmissibilityInstances, seed++, prover, kAdmissibilityMaxAttempts);
            const bool rule_ok = s.instances == kAdmissibilityInstances && s.holds == s.instances;
            ok = ok && rule_ok;
            detail << admissible_name(r) << " " << s.holds << "/" << s.instances << " ";
            for (const auto& f : s.failures)
                detail << "[" << f << "] ";
        }
        return Outcome{ok, detail.str() + "(conclusion provable / premises provable)"};
    });

    report(5, "soundness oracles", kLimitSoundness, [&] {
        const auto& algebras = enumerate_km_algebras(kAlgebraSize);
        std::size_t checked = 0, models = 0, kripke_bad = 0, algebra_bad = 0;
        std::string first;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            if (!provable[i])
                continue;
            const Sequent& s = corpus[i];
            ++checked;
            const std::set<std::string> vs = vars(s);
            bool refuted = false;
            for_each_model({vs.begin(), vs.end()}, kKripkeWorlds, [&](const FiniteModel& m) {
                ++models;
                refuted = !sequent_valid_on(m, s).valid();
                return !refuted;
            });
            if (refuted) {
                ++kripke_bad;
                first = first.empty() ? print_sequent(s, 200) : first;
            }
            if (algebra_counterexample(algebras, s.lhs.occurrences(), big_or(s.rhs))) {
                ++algebra_bad;
                first = first.empty() ? print_sequent(s, 200) : first;
            }
        }
        return Outcome{kripke_bad + algebra_bad == 0,
                       std::to_string(checked) + " provable sequents; " + std::to_string(models) +
                           " model checks, " + std::to_string(kripke_bad) + " Kripke violations; " +
                           std::to_string(algebras.size()) + " algebras, " + std::to_string(algebra_bad) +
                           " algebraic violations" + (first.empty() ? "" : "; first: " + first)};
    });

    const std::vector<Formula> formulas = formula_corpus(kInterpolationFormulas, kInterpolationSeed,
                                                         kInterpolationMaxWeight);
    InterpolationRun fixed;

    report(6, "uniform interpolation", kLimitInterpolation, [&] {
        fixed.suite = run_interpolation(InterpConfig{}, formulas).suite;
        return Outcome{fixed.suite.passed(), std::to_string(formulas.size()) + " formulas under " +
                                                 describe(InterpConfig{}) + ", " +
                                                 std::to_string(fixed.suite.checks) + " checks, " +
                                                 std::to_string(fixed.suite.failures) + " failures" +
                                                 first_messages(fixed.suite)};
    });

    report(7, "golden values", kLimitGolden, [&] {
        Prover prover;
        fixed.golden = suite_golden(InterpConfig{}, prover);
        return Outcome{fixed.golden.passed(), "5 equivalences by proof both ways and on all 2-world models, " +
                                                  std::to_string(fixed.golden.failures) + " failures" +
                                                  first_messages(fixed.golden)};
    });

    report(8, "reading toggles", kLimitInterpolation + kLimitGolden, [&] {
        Prover prover;
        const SuiteResult golden = suite_golden(kPrintedTableConfig, prover);
        const std::size_t bad = failing_formulas(kPrintedTableConfig, formulas);
        std::ostringstream d;
        d << describe(kPrintedTableConfig) << ": interpolation " << (bad == 0 ? "pass" : "FAIL") << " (" << bad
          << "/" << formulas.size() << " formulas fail), golden " << (golden.passed() ? "pass" : "FAIL") << "; "
          << describe(InterpConfig{}) << ": interpolation " << (fixed.suite.passed() ? "pass" : "FAIL")
          << ", golden " << (fixed.golden.passed() ? "pass" : "FAIL");
        // Mixed readings isolate the effect of each toggle.
        for (const InterpConfig& mixed : {InterpConfig{InterpMode::Full, Ep9Context::Remainder, Ep8Third::DeltaTwo},
                                          InterpConfig{InterpMode::Full, Ep9Context::WholeGamma, Ep8Third::Literal}})
            d << "; " << describe(mixed) << ": " << failing_formulas(mixed, formulas) << "/" << formulas.size()
              << " fail";
        return Outcome{bad == 0 && golden.passed(), d.str()};
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
