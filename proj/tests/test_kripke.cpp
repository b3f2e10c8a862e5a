#include "doctest.h"
#include "support.hpp"

#include "km/corpus.hpp"
#include "km/kripke.hpp"

#include <algorithm>
#include <numeric>
#include <set>

using namespace km;
using km::test::F;
using km::test::S;

namespace {

using Matrix = std::vector<std::vector<bool>>;

// w ≤ v only, p true at v only.
FiniteModel two_world(bool p_at_bottom = false) {
    FiniteModel m = FiniteModel::discrete(2);
    m.leq[0][1] = true;
    m.val["p"] = p_at_bottom ? std::set<std::size_t>{0} : std::set<std::size_t>{1};
    return m;
}

// Direct recursive forcing, quantifying over all worlds each time.
bool naive_forces(const FiniteModel& m, std::size_t w, Formula f) {
    switch (f.kind()) {
    case Kind::Atom:
        return m.val.count(f.name()) && m.val.at(f.name()).count(w);
    case Kind::Bottom:
        return false;
    case Kind::And:
        return naive_forces(m, w, f.left()) && naive_forces(m, w, f.right());
    case Kind::Or:
        return naive_forces(m, w, f.left()) || naive_forces(m, w, f.right());
    case Kind::Imp:
        for (std::size_t v = 0; v < m.worlds; ++v)
            if (m.leq[w][v] && naive_forces(m, v, f.left()) && !naive_forces(m, v, f.right()))
                return false;
        return true;
    case Kind::Box:
        for (std::size_t v = 0; v < m.worlds; ++v)
            if (m.leq[w][v] && !m.leq[v][w] && !naive_forces(m, v, f.body()))
                return false;
        return true;
    }
    return false;
}

bool is_preorder(const Matrix& r) {
    const std::size_t n = r.size();
    for (std::size_t a = 0; a < n; ++a) {
        if (!r[a][a])
            return false;
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (r[a][b] && r[b][c] && !r[a][c])
                    return false;
    }
    return true;
}

// Number of rooted preorders on n points up to isomorphism, by brute force
// over all n×n matrices and all relabellings.
std::size_t brute_force_rooted_count(std::size_t n) {
    std::set<std::vector<bool>> canon;
    std::vector<std::size_t> perm(n);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (n * n)); ++bits) {
        Matrix r(n, std::vector<bool>(n));
        for (std::size_t i = 0; i < n * n; ++i)
            r[i / n][i % n] = bits >> i & 1;
        if (!is_preorder(r))
            continue;
        bool rooted = false;
        for (std::size_t a = 0; a < n && !rooted; ++a)
            rooted = std::all_of(r[a].begin(), r[a].end(), [](bool b) { return b; });
        if (!rooted)
            continue;
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<bool> best;
        do {
            std::vector<bool> flat;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    flat.push_back(r[perm[i]][perm[j]]);
            if (best.empty() || flat < best)
                best = flat;
        } while (std::next_permutation(perm.begin(), perm.end()));
        canon.insert(best);
    }
    return canon.size();
}

} // namespace

TEST_CASE("model validation") {
    CHECK_FALSE(validate_model(two_world()).has_value());
    const auto v = validate_model(two_world(true));
    REQUIRE(v.has_value());
    CHECK(v->condition == "persistence");
    CHECK(v->w == 0);
    CHECK(v->v == 1);
    CHECK(v->atom == "p");
    CHECK_FALSE(validate_model(FiniteModel::discrete(1)).has_value());

    FiniteModel bad = FiniteModel::discrete(2);
    bad.leq[1][1] = false;
    CHECK(validate_model(bad)->condition == "reflexivity");
    FiniteModel tr = FiniteModel::discrete(3);
    tr.leq[0][1] = tr.leq[1][2] = true;
    CHECK(validate_model(tr)->condition == "transitivity");
    FiniteModel range = FiniteModel::discrete(1);
    range.val["q"] = {4};
    CHECK(validate_model(range)->condition == "range");
    FiniteModel shape = FiniteModel::discrete(2);
    shape.leq.pop_back();
    CHECK(validate_model(shape)->condition == "shape");
    CHECK_THROWS_AS(ModelEvaluator{two_world(true)}, std::invalid_argument);
}

TEST_CASE("forcing on the two-world model") {
    const FiniteModel m = two_world();
    CHECK(forces(m, 0, F("box p")));
    CHECK_FALSE(forces(m, 0, F("p")));
    CHECK_FALSE(forces(m, 0, F("p | (p -> false)")));
    CHECK(forces(m, 1, F("box false")));
    CHECK_FALSE(forces(m, 0, F("box p -> p")));
    for (std::size_t w = 0; w < 2; ++w)
        CHECK_FALSE(forces(m, w, F("false")));
    CHECK_THROWS_AS(forces(m, 2, F("p")), std::out_of_range);
    CHECK(m.strict(0, 1));
    CHECK_FALSE(m.strict(0, 0));
}

TEST_CASE("a two-element cluster is not a strict step") {
    FiniteModel m = FiniteModel::discrete(2);
    m.leq[0][1] = m.leq[1][0] = true;
    CHECK_FALSE(m.strict(0, 1));
    CHECK(forces(m, 0, F("box false")));
}

TEST_CASE("sequent validity") {
    for (std::size_t n = 1; n <= 3; ++n)
        for (const auto& leq : rooted_frames(n)) {
            for (std::uint64_t pu : up_sets(leq))
                for (std::uint64_t qu : up_sets(leq)) {
                    FiniteModel m{n, leq, {}};
                    for (std::size_t w = 0; w < n; ++w) {
                        if (pu >> w & 1)
                            m.val["p"].insert(w);
                        if (qu >> w & 1)
                            m.val["q"].insert(w);
                    }
                    CHECK(sequent_valid_on(m, S("box p => q | (q -> p)")).valid());
                    CHECK(sequent_valid_on(m, S("false =>")).valid());
                }
        }
    CHECK(sequent_valid_on(two_world(), S("=> p | (p -> false)")).refuted_at == std::size_t{0});
}

TEST_CASE("rooted frame counts match brute force") {
    for (std::size_t n = 1; n <= 4; ++n)
        CHECK(rooted_frames(n).size() == brute_force_rooted_count(n));
    CHECK(rooted_frames(5).size() == 47);
    CHECK(rooted_frames(6).size() == 186);
    for (std::size_t n = 1; n <= 5; ++n)
        for (const auto& f : rooted_frames(n)) {
            CHECK(is_preorder(f));
            CHECK(std::all_of(f[0].begin(), f[0].end(), [](bool b) { return b; }));
        }
    CHECK_THROWS(rooted_frames(0));
    CHECK_THROWS(rooted_frames(kMaxFrameWorlds + 1));
}

TEST_CASE("up-sets") {
    const auto two = rooted_frames(2);
    std::set<std::size_t> sizes;
    for (const auto& f : two)
        sizes.insert(up_sets(f).size());
    // The 2-chain has ∅, {1}, {0,1}; the 2-cluster only ∅ and both.
    CHECK(sizes == std::set<std::size_t>{2, 3});
}

TEST_CASE("evaluator agrees with naive forcing") {
    CorpusGenerator gen({"p", "q"}, 41);
    std::vector<Formula> fs;
    for (int i = 0; i < 40; ++i)
        fs.push_back(gen.formula(9));
    std::size_t models = 0;
    for_each_model({"p", "q"}, 3, [&](const FiniteModel& m) {
        ++models;
        ModelEvaluator ev(m);
        for (Formula f : fs)
            for (std::size_t w = 0; w < m.worlds; ++w)
                CHECK(ev.forces(w, f) == naive_forces(m, w, f));
        return true;
    });
    CHECK(models > 50);
}

TEST_CASE("countermodel search") {
    auto em = countermodel_search(S("=> p | (p -> false)"), 2);
    REQUIRE(em.has_value());
    CHECK(em->model.worlds == 2);
    CHECK_FALSE(sequent_valid_on(em->model, S("=> p | (p -> false)")).valid());
    CHECK_FALSE(countermodel_search(S("=> p | (p -> false)"), 1).has_value());
    CHECK_FALSE(countermodel_search(S("=> p -> box p"), 4).has_value());
    CHECK_FALSE(countermodel_search(S("=> false -> false"), 5).has_value());
    auto peirce = countermodel_search(S("=> ((p -> q) -> p) -> p"), 3);
    REQUIRE(peirce.has_value());
    CHECK(peirce->model.worlds <= 3);
    CHECK(countermodel_search(S("=> box p -> p"), 1).has_value());
}

TEST_CASE("properties on small models") {
    const std::vector<Formula> fs{F("p"), F("box p"), F("p -> q"), F("box (p -> q) | q"), F("~box p")};
    const std::vector<FMultiset> ctx{{F("box p")}, {F("p"), F("box (q -> p)")}};
    const PropertyReport r = property_probes(two_world(), fs, ctx);
    CHECK(r.passed());
    CHECK(r.persistence_checks > 0);
    CHECK(r.observation_checks > 0);
    std::size_t total = 0;
    for_each_model({"p", "q"}, 3, [&](const FiniteModel& m) {
        const PropertyReport rep = property_probes(m, fs, ctx);
        CHECK(rep.passed());
        total += rep.persistence_checks;
        return true;
    });
    CHECK(total > 0);
}

TEST_CASE("model JSON") {
    const FiniteModel m = two_world();
    const std::string text = model_to_json(m);
    CHECK(text == R"({"worlds":2,"leq":[[true,true],[false,true]],"val":{"p":[1]}})");
    CHECK(model_from_json(text) == m);
    CHECK(model_from_json(R"({"worlds":2,"leq":[[1,1],[0,1]],"val":{"p":[1]}})") == m);
    CHECK_THROWS_AS(model_from_json("{\"worlds\": 2"), std::invalid_argument);
    // Parsing does not validate; persistence is left to validate_model.
    CHECK(validate_model(model_from_json(R"({"worlds":2,"leq":[[1,1],[0,1]],"val":{"p":[0]}})"))->condition ==
          "persistence");
}
