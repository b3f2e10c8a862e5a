#include "doctest.h"
#include "support.hpp"

#include "km/algebra.hpp"
#include "km/corpus.hpp"
#include "km/hilbert.hpp"
#include "km/kripke.hpp"

#include <algorithm>
#include <numeric>

using namespace km;
using km::test::F;

namespace {

using Matrix = std::vector<std::vector<bool>>;

Matrix chain(std::size_t n) {
    Matrix m(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            m[i][j] = true;
    return m;
}

// Up-sets of a frame ordered by inclusion, with □U the worlds all of whose
// strict successors lie in U.
FiniteKMAlgebra complex_algebra(const Matrix& leq, std::vector<std::uint64_t>* carrier = nullptr) {
    const std::vector<std::uint64_t> ups = up_sets(leq);
    const std::size_t n = leq.size();
    Matrix order(ups.size(), std::vector<bool>(ups.size()));
    std::vector<Element> box(ups.size());
    for (std::size_t i = 0; i < ups.size(); ++i) {
        for (std::size_t j = 0; j < ups.size(); ++j)
            order[i][j] = (ups[i] & ~ups[j]) == 0;
        std::uint64_t b = 0;
        for (std::size_t w = 0; w < n; ++w) {
            bool all = true;
            for (std::size_t v = 0; v < n; ++v)
                if (leq[w][v] && !leq[v][w] && !(ups[i] >> v & 1))
                    all = false;
            if (all)
                b |= std::uint64_t{1} << w;
        }
        box[i] = std::find(ups.begin(), ups.end(), b) - ups.begin();
        REQUIRE(box[i] < ups.size());
    }
    if (carrier)
        *carrier = ups;
    return FiniteKMAlgebra::from_order(order, box);
}

bool isomorphic(const FiniteKMAlgebra& a, const FiniteKMAlgebra& b) {
    if (a.size != b.size)
        return false;
    const Matrix oa = a.order(), ob = b.order();
    std::vector<std::size_t> p(a.size);
    std::iota(p.begin(), p.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < a.size && ok; ++i) {
            ok = p[a.box[i]] == b.box[p[i]];
            for (std::size_t j = 0; j < a.size && ok; ++j)
                ok = oa[i][j] == ob[p[i]][p[j]];
        }
        if (ok)
            return true;
    } while (std::next_permutation(p.begin(), p.end()));
    return false;
}

} // namespace

TEST_CASE("two-element chain") {
    const FiniteKMAlgebra constant = FiniteKMAlgebra::from_order(chain(2), {1, 1});
    CHECK_FALSE(validate_algebra(constant).has_value());
    CHECK(constant.top() == 1);
    CHECK(constant.imp[1][0] == 0);

    const auto v = validate_algebra(FiniteKMAlgebra::from_order(chain(2), {0, 1}));
    REQUIRE(v.has_value());
    CHECK(v->equation == "box_imp");
    CHECK(v->witnesses == std::vector<Element>{0});
}

TEST_CASE("three-element chain with the successor box") {
    const FiniteKMAlgebra a = FiniteKMAlgebra::from_order(chain(3), {1, 2, 2});
    CHECK_FALSE(validate_algebra(a).has_value());
    CHECK(a.imp[2][1] == 1);
    CHECK(a.imp[1][2] == 2);
    CHECK(evaluate(a, {{"p", 0}}, F("box p")) == 1);
    // Other boxes on the 3-chain fail.
    CHECK(validate_algebra(FiniteKMAlgebra::from_order(chain(3), {2, 2, 2})).has_value());
    CHECK(validate_algebra(FiniteKMAlgebra::from_order(chain(3), {1, 1, 2})).has_value());
}

TEST_CASE("evaluation") {
    const FiniteKMAlgebra two = FiniteKMAlgebra::from_order(chain(2), {1, 1});
    CHECK(evaluate(two, {{"p", 0}, {"q", 0}}, F("box p -> q | (q -> p)")) == 1);
    CHECK(evaluate(two, {}, F("false -> false")) == two.top());
    CHECK_THROWS_AS(evaluate(two, {}, F("p")), std::out_of_range);
}

TEST_CASE("non-lattices and non-Heyting orders are rejected") {
    Matrix antichain(2, std::vector<bool>(2));
    antichain[0][0] = antichain[1][1] = true;
    CHECK_THROWS_AS(FiniteKMAlgebra::from_order(antichain, {0, 1}), std::invalid_argument);
    // M3 is a lattice but not distributive, so it has no implication.
    Matrix m3(5, std::vector<bool>(5));
    for (std::size_t i = 0; i < 5; ++i) {
        m3[i][i] = m3[0][i] = m3[i][4] = true;
    }
    CHECK_THROWS_AS(FiniteKMAlgebra::from_order(m3, {4, 4, 4, 4, 4}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteKMAlgebra::from_order(chain(2), {0, 2}), std::invalid_argument);
}

TEST_CASE("entailment") {
    const auto& algs = enumerate_km_algebras(5);
    CHECK(entails_on(algs, {F("p")}, F("box p")));
    CHECK_FALSE(entails_on(algs, {}, F("p")));
    CHECK_FALSE(entails_on(algs, {}, F("box p -> p")));
    const auto cx = algebra_counterexample(algs, {}, F("p | ~p"));
    REQUIRE(cx.has_value());
    CHECK(evaluate(algs[cx->algebra], cx->valuation, F("p | ~p")) != algs[cx->algebra].top());
    for (const HFixture& fx : hilbert_fixtures()) {
        std::vector<Formula> ctx(fx.proof.context.begin(), fx.proof.context.end());
        CHECK_MESSAGE(entails_on(algs, ctx, fx.proof.goal()), fx.name);
    }
}

TEST_CASE("enumeration") {
    CHECK(enumerate_km_algebras(1).size() == 1);
    CHECK(enumerate_km_algebras(1)[0].size == 1);
    const auto& two = enumerate_km_algebras(2);
    REQUIRE(two.size() == 2);
    CHECK(two[1].box == std::vector<Element>{1, 1});
    bool successor = false;
    for (const auto& a : enumerate_km_algebras(3))
        successor |= isomorphic(a, FiniteKMAlgebra::from_order(chain(3), {1, 2, 2}));
    CHECK(successor);
    // Distributive lattices on 1..6 elements: 1, 1, 1, 2, 3, 5.
    const std::size_t lattices[] = {1, 1, 1, 2, 3, 5};
    for (std::size_t n = 1; n <= 6; ++n)
        CHECK(distributive_lattices(n).size() == lattices[n - 1]);
    for (const auto& a : enumerate_km_algebras(6))
        CHECK_FALSE(validate_algebra(a).has_value());
    CHECK(enumerate_km_algebras(6).size() == 13);
}

TEST_CASE("complex algebras of frames are KM-algebras and evaluate like the frame") {
    CorpusGenerator gen({"p", "q"}, 51);
    std::vector<Formula> fs;
    for (int i = 0; i < 25; ++i)
        fs.push_back(gen.formula(9));
    const auto& enumerated = enumerate_km_algebras(6);
    for (std::size_t n = 1; n <= 4; ++n)
        for (const auto& leq : rooted_frames(n)) {
            std::vector<std::uint64_t> carrier;
            const FiniteKMAlgebra a = complex_algebra(leq, &carrier);
            CHECK_FALSE(validate_algebra(a).has_value());
            if (a.size <= 6)
                CHECK(std::any_of(enumerated.begin(), enumerated.end(),
                                  [&](const FiniteKMAlgebra& e) { return isomorphic(a, e); }));
            for (Element pe = 0; pe < a.size; ++pe)
                for (Element qe = 0; qe < a.size; ++qe) {
                    FiniteModel m{n, leq, {}};
                    for (std::size_t w = 0; w < n; ++w) {
                        if (carrier[pe] >> w & 1)
                            m.val["p"].insert(w);
                        if (carrier[qe] >> w & 1)
                            m.val["q"].insert(w);
                    }
                    ModelEvaluator ev(m);
                    for (Formula f : fs)
                        CHECK(carrier[evaluate(a, {{"p", pe}, {"q", qe}}, f)] == ev.truth(f));
                }
        }
}

TEST_CASE("algebra JSON") {
    const FiniteKMAlgebra a = FiniteKMAlgebra::from_order(chain(3), {1, 2, 2});
    const std::string text = algebra_to_json(a);
    CHECK(algebra_from_json(text) == a);
    CHECK(text.find("\"box\":[1,2,2]") != std::string::npos);
    CHECK_THROWS_AS(algebra_from_json("{\"size\": 2, \"leq\": [[true"), std::invalid_argument);
    CHECK_THROWS_AS(algebra_from_json(R"({"size":3,"leq":[[1,1],[0,1]],"box":[1,1]})"), std::invalid_argument);
    CHECK_THROWS_AS(algebra_from_json(R"({"leq":[[1,1],[0,1]],"box":[1,1],"bot":1})"), std::invalid_argument);
}
