#include "km/selftest.hpp"

#include "km/algebra.hpp"
#include "km/corpus.hpp"
#include "km/hilbert.hpp"
#include "km/kripke.hpp"
#include "km/parser.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace km {

namespace {

constexpr std::size_t kKeptMessages = 5;
constexpr std::size_t kShow = 160;

std::string show(const Sequent& s) { return print_sequent(s, kShow); }
std::string show(Formula f) { return print_formula(f, kShow); }

} // namespace

void SuiteResult::fail(std::string message) {
    ++failures;
    if (messages.size() < kKeptMessages)
        messages.push_back(std::move(message));
}

std::vector<Sequent> sequent_corpus(std::size_t n, std::uint64_t seed, std::uint64_t max_weight) {
    CorpusGenerator gen(default_atoms(3), seed);
    std::vector<Sequent> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(gen.sequent(max_weight));
    return out;
}

std::vector<Formula> formula_corpus(std::size_t n, std::uint64_t seed, std::uint64_t max_weight) {
    CorpusGenerator gen(default_atoms(3), seed);
    std::vector<Formula> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(gen.formula(max_weight));
    return out;
}

SuiteResult suite_termination(const std::vector<Sequent>& corpus, Prover& prover) {
    SuiteResult r{"search_termination", 0, 0, {}};
    for (const Sequent& s : corpus) {
        ++r.checks;
        try {
            ProofResult res = prover.prove(s);
            if (res.provable) {
                ProofCheck c = check_proof(*res.tree);
                if (!c)
                    r.fail("certificate rejected for " + show(s) + ": " + c.reason);
            }
        } catch (const SearchInternalError& e) {
            r.fail(std::string("internal error: ") + e.what());
        }
    }
    return r;
}

SuiteResult suite_order_independence(const std::vector<Sequent>& corpus, std::size_t seeds) {
    SuiteResult r{"order_independence", 0, 0, {}};
    Prover reference;
    SearchConfig no_sat;
    no_sat.saturate_invertible = false;
    std::vector<Prover> others;
    others.emplace_back(plain_search_config());
    others.emplace_back(no_sat);
    for (std::size_t k = 0; k < seeds; ++k) {
        SearchConfig c;
        c.branch_seed = 1000 + k;
        others.emplace_back(c);
        SearchConfig plain = plain_search_config();
        plain.branch_seed = 2000 + k;
        others.emplace_back(plain);
    }
    for (const Sequent& s : corpus) {
        const bool want = reference.provable(s);
        for (std::size_t i = 0; i < others.size(); ++i) {
            ++r.checks;
            if (others[i].provable(s) != want)
                r.fail("configuration " + std::to_string(i) + " disagrees on " + show(s));
        }
    }
    return r;
}

SuiteResult suite_kripke_soundness(const std::vector<Sequent>& corpus, Prover& prover, std::size_t max_worlds) {
    SuiteResult r{"kripke_soundness", 0, 0, {}};
    for (const Sequent& s : corpus) {
        ++r.checks;
        const bool provable = prover.provable(s);
        auto cm = countermodel_search(s, max_worlds);
        if (provable && cm)
            r.fail("provable but refuted at world " + std::to_string(cm->world) + ": " + show(s) + " in " +
                   model_to_json(cm->model));
        if (cm && sequent_valid_on(cm->model, s).valid())
            r.fail("countermodel does not re-check for " + show(s));
    }
    return r;
}

SuiteResult suite_algebra_soundness(const std::vector<Sequent>& corpus, Prover& prover, std::size_t max_size) {
    SuiteResult r{"algebra_soundness", 0, 0, {}};
    const auto& algebras = enumerate_km_algebras(max_size);
    for (const Sequent& s : corpus) {
        if (!prover.provable(s))
            continue;
        ++r.checks;
        const std::vector<Formula> gamma = s.lhs.occurrences();
        if (auto cx = algebra_counterexample(algebras, gamma, big_or(s.rhs)))
            r.fail("provable but not entailed on algebra " + std::to_string(cx->algebra) + ": " + show(s));
    }
    return r;
}

SuiteResult suite_kripke_properties(const std::vector<Formula>& formulas, std::size_t max_worlds) {
    SuiteResult r{"kripke_properties", 0, 0, {}};
    std::vector<FMultiset> contexts;
    for (std::size_t i = 0; i + 1 < formulas.size(); i += 2)
        contexts.push_back(FMultiset{formulas[i], Formula::box(formulas[i + 1])});
    std::vector<std::string> atoms = default_atoms(3);
    for_each_model(atoms, max_worlds, [&](const FiniteModel& m) {
        PropertyReport rep = property_probes(m, formulas, contexts);
        r.checks += rep.persistence_checks + rep.observation_checks;
        for (const auto& f : rep.failures)
            r.fail(f.property + " fails between " + std::to_string(f.w) + " and " + std::to_string(f.v) + ": " +
                   f.witness);
        return true;
    });
    return r;
}

SuiteResult suite_algebra_axioms(std::size_t max_size) {
    SuiteResult r{"algebra_axioms", 0, 0, {}};
    const auto& algebras = enumerate_km_algebras(max_size);
    for (const auto& a : algebras) {
        ++r.checks;
        if (auto bad = validate_algebra(a))
            r.fail("enumerated algebra fails " + bad->equation + ": " + algebra_to_json(a));
    }
    // Metavariables become distinct atoms; valuations then range over the
    // whole carrier, which covers every carrier-valued substitution.
    const Substitution s{{"phi", Formula::atom("a")}, {"psi", Formula::atom("b")}, {"chi", Formula::atom("c")}};
    for (const Scheme& sc : schemes()) {
        ++r.checks;
        if (!entails_on(algebras, {}, instantiate(sc.id, s)))
            r.fail("scheme " + sc.id + " is not top everywhere");
    }
    return r;
}

SuiteResult suite_hilbert(Prover& prover) {
    SuiteResult r{"hilbert_fixtures", 0, 0, {}};
    const auto& algebras = enumerate_km_algebras(5);
    for (const HFixture& fx : hilbert_fixtures()) {
        ++r.checks;
        if (auto c = check_hproof(fx.proof); !c)
            r.fail(fx.name + " rejected: " + c.reason);
        if (auto c = nec_variant_check(fx.proof); !c)
            r.fail(fx.name + " rejected by the restricted Nec: " + c.reason);
        Sequent s{FMultiset(std::vector<Formula>(fx.proof.context.begin(), fx.proof.context.end())),
                  FMultiset{fx.proof.goal()}};
        if (!prover.provable(s))
            r.fail(fx.name + " goal is not provable by search");
        if (countermodel_search(s, 4))
            r.fail(fx.name + " goal has a Kripke countermodel");
        if (!entails_on(algebras, s.lhs.occurrences(), fx.proof.goal()))
            r.fail(fx.name + " goal fails on some algebra");
        if (fx.proof.context.empty() && prover.provable({{}, FMultiset{Formula::neg(fx.proof.goal())}}))
            r.fail(fx.name + " negated goal is provable");
    }
    return r;
}

SuiteResult suite_parser(const std::vector<Formula>& formulas) {
    SuiteResult r{"parser_roundtrip", 0, 0, {}};
    for (Formula f : formulas) {
        ++r.checks;
        const std::string text = print_formula(f);
        try {
            if (parse_formula(text) != f)
                r.fail("round trip changes " + text);
        } catch (const ParseError& e) {
            r.fail("printed text does not parse: " + text);
        }
    }
    return r;
}

const std::vector<AdmissibleRule>& admissibility_suite_rules() {
    static const std::vector<AdmissibleRule> rules{
        AdmissibleRule::Cut,    AdmissibleRule::ContrL,     AdmissibleRule::ContrR, AdmissibleRule::ArrL,
        AdmissibleRule::ArrArrLDup, AdmissibleRule::OrRInv, AdmissibleRule::ImpRInv, AdmissibleRule::ArrArrLInv,
        AdmissibleRule::WeakL,  AdmissibleRule::WeakR,
    };
    return rules;
}

AdmissibilitySample sample_admissibility(AdmissibleRule rule, std::size_t wanted, std::uint64_t seed, Prover& prover,
                                         std::size_t max_attempts) {
    AdmissibilitySample out;
    CorpusGenerator gen(default_atoms(3), seed);
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(rule));
    while (out.instances < wanted && out.attempts < max_attempts) {
        ++out.attempts;
        AdmissibilityWitness w;
        w.gamma = gen.multiset(rng() % 3, 7);
        w.delta = gen.multiset(rng() % 3, 7);
        for (int i = 0; i < 3; ++i)
            w.formulas.push_back(gen.formula(6));
        // Reusing a context formula makes provable premises far more likely.
        if (rng() % 3 == 0) {
            std::vector<Formula> pool = (w.gamma + w.delta).occurrences();
            if (!pool.empty())
                w.formulas[rng() % 2] = pool[rng() % pool.size()];
        }
        RuleShape shape = admissible_shape(rule, w);
        AdmissibilityResult res = admissibility_probe(rule, w, prover);
        if (res.failed_premise)
            continue;
        ++out.instances;
        if (res.conclusion_provable)
            ++out.holds;
        else if (out.failures.size() < kKeptMessages)
            out.failures.push_back(std::string(admissible_name(rule)) + ": " + show(shape.conclusion));
    }
    return out;
}

SuiteResult suite_admissibility(std::size_t per_rule, std::uint64_t seed, Prover& prover) {
    SuiteResult r{"admissibility", 0, 0, {}};
    for (AdmissibleRule rule : admissibility_suite_rules()) {
        AdmissibilitySample s = sample_admissibility(rule, per_rule, seed, prover, per_rule * 400);
        r.checks += s.instances;
        if (s.instances < per_rule)
            r.fail(std::string(admissible_name(rule)) + ": only " + std::to_string(s.instances) +
                   " instances with provable premises");
        for (std::size_t i = s.holds; i < s.instances; ++i)
            r.fail(i - s.holds < s.failures.size() ? s.failures[i - s.holds] : std::string(admissible_name(rule)));
    }
    return r;
}

SuiteResult suite_interpolation(const std::vector<Formula>& formulas, const InterpConfig& base,
                                const VerifyBudget& budget, Prover& prover) {
    SuiteResult r{"interpolation", 0, 0, {}};
    InterpConfig full = base;
    full.mode = InterpMode::Full;
    InterpConfig greedy = base;
    greedy.mode = InterpMode::Greedy;
    for (Formula f : formulas) {
        VerificationReport rf = verify_interpolant("p", f, full, budget, prover);
        VerificationReport rg = verify_interpolant("p", f, greedy, budget, prover);
        r.checks += 2;
        for (const auto* rep : {&rf, &rg})
            for (const auto& x : rep->failures)
                r.fail((rep == &rf ? "full " : "greedy ") + x.check + " on " + show(f) + ": " + x.witness);
        ++r.checks;
        auto equiv = [&](Formula a, Formula b) {
            return prover.provable({FMultiset{a}, FMultiset{b}}) && prover.provable({FMultiset{b}, FMultiset{a}});
        };
        if (!equiv(rf.exists, rg.exists) || !equiv(rf.forall, rg.forall))
            r.fail("full and greedy interpolants differ in strength on " + show(f));
    }
    return r;
}

SuiteResult suite_golden(const InterpConfig& cfg, Prover& prover) {
    SuiteResult r{"golden_values", 0, 0, {}};
    const Formula p = Formula::atom("p");
    const Formula q = Formula::atom("q");
    struct Case {
        const char* name;
        Formula got;
        Formula want;
    };
    const Case cases[] = {
        {"exists p. p", exists_p("p", p, cfg), Formula::top()},
        {"forall p. p", forall_p("p", p, cfg), Formula::bottom()},
        {"exists p. q", exists_p("p", q, cfg), q},
        {"forall p. q", forall_p("p", q, cfg), q},
        {"exists p. p & q", exists_p("p", Formula::conj(p, q), cfg), q},
    };
    for (const Case& c : cases) {
        ++r.checks;
        const bool there = prover.provable({FMultiset{c.got}, FMultiset{c.want}});
        const bool back = prover.provable({FMultiset{c.want}, FMultiset{c.got}});
        if (!there || !back)
            r.fail(std::string(c.name) + " gave " + show(c.got) + ", not equivalent to " + show(c.want));
        // Semantic cross-check on every model with at most two worlds.
        for_each_model({"q"}, 2, [&](const FiniteModel& m) {
            ModelEvaluator ev(m);
            if (ev.truth(c.got) != ev.truth(c.want)) {
                r.fail(std::string(c.name) + " differs semantically on " + model_to_json(m));
                return false;
            }
            return true;
        });
    }
    return r;
}

bool SelftestReport::passed() const {
    for (const auto& s : suites)
        if (!s.passed())
            return false;
    return true;
}

std::string SelftestReport::text() const {
    std::ostringstream out;
    out << "km selftest seed=" << seed << " corpus=" << corpus_size << "\n";
    for (const auto& s : suites) {
        out << (s.passed() ? "PASS " : "FAIL ") << s.name << ": " << s.checks << " checks, " << s.failures
            << " failures\n";
        for (const auto& m : s.messages)
            out << "  " << m << "\n";
    }
    out << (passed() ? "all suites passed" : "some suites FAILED") << "\n";
    return out.str();
}

SelftestReport run_selftest(const SelftestOptions& opts) {
    SelftestReport rep;
    rep.seed = opts.seed;
    rep.corpus_size = opts.corpus_size;
    const auto sequents = sequent_corpus(opts.corpus_size, opts.seed);
    const auto formulas = formula_corpus(opts.corpus_size, opts.seed + 1);
    auto head = [](const auto& v, std::size_t n) {
        return std::vector<typename std::decay_t<decltype(v)>::value_type>(v.begin(),
                                                                         v.begin() + std::min(n, v.size()));
    };
    Prover prover;
    rep.suites.push_back(suite_parser(formulas));
    rep.suites.push_back(suite_termination(sequents, prover));
    rep.suites.push_back(suite_order_independence(head(sequents, 40), 2));
    rep.suites.push_back(suite_kripke_soundness(sequents, prover, 4));
    rep.suites.push_back(suite_algebra_soundness(sequents, prover, 5));
    rep.suites.push_back(suite_kripke_properties(head(formulas, 20), 3));
    rep.suites.push_back(suite_algebra_axioms(5));
    rep.suites.push_back(suite_hilbert(prover));
    rep.suites.push_back(suite_admissibility(std::max<std::size_t>(1, opts.corpus_size / 10), opts.seed, prover));
    VerifyBudget budget;
    budget.max_weight = 7;
    budget.random_samples = 40;
    budget.sequent_samples = 4;
    budget.seed = opts.seed;
    rep.suites.push_back(suite_interpolation(head(formulas, std::max<std::size_t>(1, opts.corpus_size / 10)),
                                             InterpConfig{}, budget, prover));
    rep.suites.push_back(suite_golden(InterpConfig{}, prover));
    for (auto& s : rep.suites)
        if (s.name == opts.inject_fault)
            s.fail("injected fault");
    return rep;
}

} // namespace km
