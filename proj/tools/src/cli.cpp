#include "km/cli.hpp"

#include "km/algebra.hpp"
#include "km/calculus.hpp"
#include "km/hilbert.hpp"
#include "km/interpolation.hpp"
#include "km/kripke.hpp"
#include "km/parser.hpp"
#include "km/search.hpp"
#include "km/selftest.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace km {

namespace {

/// Thrown for bad input after CLI11 has accepted the command line.
struct InputError {
    std::string message;
};

void report_parse_error(std::ostream& err, std::string_view text, const ParseError& e) {
    err << "parse error: " << e.message() << "\n  " << text << "\n  "
        << std::string(e.span().start, ' ') << std::string(std::max<std::size_t>(1, e.span().end - e.span().start), '^')
        << "\n";
}

template <typename T, typename F>
T parse_or_throw(const std::string& text, std::ostream& err, F parse) {
    try {
        return parse(text);
    } catch (const ParseError& e) {
        report_parse_error(err, text, e);
        throw InputError{};
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError{"cannot read " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t seed_value(std::uint64_t flag, const CliEnv& env) {
    if (!env.km_seed)
        return flag;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(*env.km_seed, &used);
        if (used != env.km_seed->size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw InputError{"KM_SEED is not a non-negative integer: " + *env.km_seed};
    }
}

const char* algebra_law(const std::string& equation) {
    static const std::pair<const char*, const char*> laws[] = {
        {"box_top", "□1 = 1"},
        {"box_unit", "a ≤ □a"},
        {"box_imp", "□a→a = a"},
        {"box_meet", "□(a∧b) = □a∧□b"},
        {"box_strength", "□a ≤ b∨(b→a)"},
        {"residuation", "c∧a ≤ b iff c ≤ a→b"},
    };
    for (const auto& [id, law] : laws)
        if (equation == id)
            return law;
    return "";
}

struct ProveOpts {
    std::string sequent;
    bool tree = false;
    bool json = false;
    bool stats = false;
};

int cmd_prove(const ProveOpts& o, std::ostream& out, std::ostream& err) {
    const Sequent s = parse_or_throw<Sequent>(o.sequent, err, parse_sequent);
    Prover prover;
    ProofResult r = prover.prove(s);
    if (r.provable) {
        // The tree is the trust boundary: re-check before emitting anything.
        if (ProofCheck c = check_proof(*r.tree); !c) {
            err << "internal error: certificate rejected: " << c.reason << "\n";
            return kExitUsage;
        }
        if (r.tree->conclusion() != s) {
            err << "internal error: certificate proves a different sequent\n";
            return kExitUsage;
        }
    }
    out << (r.provable ? "Provable" : "Unprovable") << "\n";
    if (r.provable && o.tree)
        out << render_proof(*r.tree);
    if (r.provable && o.json)
        out << proof_to_json(*r.tree) << "\n";
    if (o.stats) {
        const SearchStats& st = prover.stats();
        out << "expanded " << st.expanded << "\nrefuted " << st.refuted << "\nmemo_hits " << st.memo_hits
            << "\nmeasure_checks " << st.measure_checks << "\nsubsumed " << st.subsumed << "\ncountermodels "
            << st.countermodels << "\nsliced " << st.sliced << "\nprobes " << st.probes << "\n";
        if (r.provable)
            out << "tree_size " << r.tree->size() << "\ntree_height " << r.tree->height() << "\n";
    }
    return r.provable ? kExitOk : kExitNegative;
}

struct InterpOpts {
    std::string formula;
    std::string var = "p";
    bool exists = false;
    bool forall = false;
    std::string mode = "full";
    bool verify = false;
    std::string ep9 = "whole";
    std::string ep8 = "delta2";
    std::uint64_t seed = 1;
    std::uint64_t max_weight = 9;
};

int cmd_interpolate(const InterpOpts& o, const CliEnv& env, std::ostream& out, std::ostream& err) {
    const Formula f = parse_or_throw<Formula>(o.formula, err, parse_formula);
    InterpConfig cfg;
    cfg.mode = o.mode == "greedy" ? InterpMode::Greedy : InterpMode::Full;
    cfg.ep9 = o.ep9 == "remainder" ? Ep9Context::Remainder : Ep9Context::WholeGamma;
    cfg.ep8 = o.ep8 == "literal" ? Ep8Third::Literal : Ep8Third::DeltaTwo;
    const Formula result = o.exists ? exists_p(o.var, f, cfg) : forall_p(o.var, f, cfg);
    out << print_formula(result) << "\n";
    if (!o.verify)
        return kExitOk;
    VerifyBudget budget;
    budget.seed = seed_value(o.seed, env);
    budget.max_weight = o.max_weight;
    budget.exhaustive_weight = std::min(budget.exhaustive_weight, o.max_weight);
    const VerificationReport rep = verify_interpolant(o.var, f, cfg, budget);
    out << "config " << describe(cfg) << "\n";
    out << "p_free " << (rep.p_free ? "pass" : "FAIL") << "\nimplication " << (rep.implication ? "pass" : "FAIL")
        << "\nuniformity " << (rep.uniformity ? "pass" : "FAIL") << " (" << rep.psi_tested << " psi tested)"
        << "\nsequent_clauses " << (rep.sequent_clauses ? "pass" : "FAIL") << " (" << rep.sequent_checks
        << " checks)\n";
    for (const auto& x : rep.failures)
        out << "failure " << x.check << ": " << x.witness << "\n";
    out << (rep.passed() ? "verified" : "verification FAILED") << "\n";
    return rep.passed() ? kExitOk : kExitNegative;
}

int cmd_countermodel(const std::string& text, std::size_t max_worlds, std::ostream& out, std::ostream& err) {
    const Sequent s = parse_or_throw<Sequent>(text, err, parse_sequent);
    auto cm = countermodel_search(s, max_worlds);
    if (!cm) {
        out << "no countermodel up to " << max_worlds << " worlds\n";
        return kExitNegative;
    }
    out << model_to_json(cm->model) << "\nrefuted at world " << cm->world << "\n";
    return kExitOk;
}

struct CheckOpts {
    std::string hilbert;
    std::string proof;
    std::string algebra;
    bool restricted_nec = false;
};

int cmd_check(const CheckOpts& o, std::ostream& out) {
    const auto malformed = [](const std::string& path, const std::exception& e) {
        return InputError{path + ": " + e.what()};
    };
    if (!o.hilbert.empty()) {
        HProof p;
        try {
            p = hproof_from_json(read_file(o.hilbert));
        } catch (const std::invalid_argument& e) {
            throw malformed(o.hilbert, e);
        }
        const HCheckResult r = o.restricted_nec ? nec_variant_check(p) : check_hproof(p);
        if (!r) {
            out << "rejected";
            if (r.bad_step)
                out << " at step " << *r.bad_step;
            out << ": " << r.reason << "\n";
            return kExitNegative;
        }
        out << "accepted: " << print_formula(p.goal()) << " in " << p.steps.size() << " steps\n";
        return kExitOk;
    }
    if (!o.proof.empty()) {
        ProofTree t;
        try {
            t = proof_from_json(read_file(o.proof));
        } catch (const std::invalid_argument& e) {
            throw malformed(o.proof, e);
        }
        const ProofCheck c = check_proof(t);
        if (!c) {
            out << "rejected at path [";
            for (std::size_t i = 0; i < c.path.size(); ++i)
                out << (i ? "," : "") << c.path[i];
            out << "]: " << c.reason << "\n";
            return kExitNegative;
        }
        out << "accepted: " << print_sequent(t.conclusion()) << " (" << t.size() << " nodes)\n";
        return kExitOk;
    }
    FiniteKMAlgebra a;
    const std::string text = read_file(o.algebra);
    try {
        a = algebra_from_json(text);
    } catch (const std::invalid_argument& e) {
        // A well-formed file whose order is not a Heyting lattice is a
        // rejected algebra, not a usage error.
        if (std::string_view(e.what()).starts_with("malformed") || std::string_view(e.what()).starts_with("bad") ||
            std::string_view(e.what()).starts_with("algebra needs"))
            throw malformed(o.algebra, e);
        out << "rejected: " << e.what() << "\n";
        return kExitNegative;
    }
    if (auto v = validate_algebra(a)) {
        out << "rejected: " << v->equation;
        if (const char* law = algebra_law(v->equation); *law)
            out << " (" << law << ")";
        out << " fails at";
        static const char* names[] = {"a", "b", "c"};
        for (std::size_t i = 0; i < v->witnesses.size(); ++i)
            out << " " << (i < 3 ? names[i] : "x") << "=" << v->witnesses[i];
        out << ": " << v->message << "\n";
        return kExitNegative;
    }
    out << "accepted: KM-algebra with " << a.size << " elements\n";
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliEnv& env) {
    CLI::App app{"Proof search, interpolation and semantics for the intuitionistic modal logic KM", "km"};
    app.require_subcommand(1);

    ProveOpts prove;
    auto* p = app.add_subcommand("prove", "Decide a sequent \"G => D\"; exit 0 provable, 1 unprovable");
    p->add_option("sequent", prove.sequent, "Sequent text")->required();
    p->add_flag("--tree", prove.tree, "Print the proof tree");
    p->add_flag("--json", prove.json, "Print the proof tree as JSON");
    p->add_flag("--stats", prove.stats, "Print search statistics");

    InterpOpts interp;
    auto* ip = app.add_subcommand("interpolate", "Compute a uniform interpolant");
    ip->add_option("formula", interp.formula, "Formula text")->required();
    ip->add_option("--var", interp.var, "Variable to eliminate")->capture_default_str();
    auto* ex = ip->add_flag("--exists", interp.exists, "Compute the existential interpolant");
    auto* fa = ip->add_flag("--forall", interp.forall, "Compute the universal interpolant");
    ex->excludes(fa);
    ip->add_option("--mode", interp.mode, "full or greedy")
        ->check(CLI::IsMember({"full", "greedy"}))
        ->capture_default_str();
    ip->add_flag("--verify", interp.verify, "Verify the interpolants; exit 1 on any failed check");
    ip->add_option("--ep9", interp.ep9, "Context of the boxed row: remainder or whole")
        ->check(CLI::IsMember({"remainder", "whole"}))
        ->capture_default_str();
    ip->add_option("--ep8", interp.ep8, "Third formula of the nested-implication row: literal or delta2")
        ->check(CLI::IsMember({"literal", "delta2"}))
        ->capture_default_str();
    ip->add_option("--seed", interp.seed, "Sampling seed for --verify (KM_SEED overrides)")->capture_default_str();
    ip->add_option("--max-weight", interp.max_weight, "Largest sampled formula weight for --verify")
        ->check(CLI::Range(1, 12))
        ->capture_default_str();

    std::string cm_text;
    std::size_t max_worlds = 4;
    auto* cm = app.add_subcommand("countermodel", "Search for a finite Kripke countermodel");
    cm->add_option("sequent", cm_text, "Sequent text")->required();
    cm->add_option("--max-worlds", max_worlds, "Largest model size")
        ->check(CLI::Range(std::size_t{1}, kMaxFrameWorlds))
        ->capture_default_str();

    CheckOpts check;
    auto* ck = app.add_subcommand("check", "Check a certificate or an algebra file");
    auto* h = ck->add_option("--hilbert", check.hilbert, "Hilbert proof JSON")->check(CLI::ExistingFile);
    auto* pr = ck->add_option("--proof", check.proof, "Sequent proof tree JSON")->check(CLI::ExistingFile);
    auto* al = ck->add_option("--algebra", check.algebra, "Finite algebra JSON")->check(CLI::ExistingFile);
    h->excludes(pr)->excludes(al);
    pr->excludes(al);
    ck->add_flag("--restricted-nec", check.restricted_nec, "Allow necessitation only on context-free steps");

    SelftestOptions st;
    auto* sp = app.add_subcommand("selftest", "Run the invariant suites on a seeded corpus");
    sp->add_option("--corpus-size", st.corpus_size, "Corpus size")
        ->check(CLI::Range(std::size_t{1}, std::size_t{100000}))
        ->capture_default_str();
    sp->add_option("--seed", st.seed, "Corpus seed (KM_SEED overrides)")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        if (ip->parsed() && !interp.exists && !interp.forall)
            throw CLI::RequiredError("one of --exists or --forall");
        if (ck->parsed() && check.hilbert.empty() && check.proof.empty() && check.algebra.empty())
            throw CLI::RequiredError("one of --hilbert, --proof or --algebra");
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (p->parsed())
            return cmd_prove(prove, out, err);
        if (ip->parsed())
            return cmd_interpolate(interp, env, out, err);
        if (cm->parsed())
            return cmd_countermodel(cm_text, max_worlds, out, err);
        if (ck->parsed())
            return cmd_check(check, out);
        st.seed = seed_value(st.seed, env);
        st.inject_fault = env.inject_fault;
        const SelftestReport rep = run_selftest(st);
        out << rep.text();
        return rep.passed() ? kExitOk : kExitNegative;
    } catch (const InputError& e) {
        if (!e.message.empty())
            err << "error: " << e.message << "\n";
        return kExitUsage;
    }
}

} // namespace km
