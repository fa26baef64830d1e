#include <doctest.h>

#include "bergm/error.hpp"
#include "bergm/model.hpp"
#include "support/random_models.hpp"

#include <random>

using namespace bergm;

namespace {

std::vector<std::uint8_t> to_vector(std::span<const std::uint8_t> y) { return {y.begin(), y.end()}; }

} // namespace

TEST_CASE("statistics match the brute-force oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const auto c = random_models::random_case(rng, 8, 8);
        const ModelSpec spec = random_models::random_spec(rng, c);
        const StatisticVector s = evaluate(spec, c.graph, c.attrs);
        const auto expected = random_models::oracle(spec, c, to_vector(c.graph.adjacency()));
        REQUIRE(static_cast<std::size_t>(s.size()) == expected.size());
        for (std::size_t t = 0; t < expected.size(); ++t) {
            CHECK(s[static_cast<Eigen::Index>(t)] == static_cast<double>(expected[t]));
        }
    }
}

TEST_CASE("change statistics equal the difference of evaluations") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        const auto c = random_models::random_case(rng, 8, 8);
        const ModelSpec spec = random_models::random_spec(rng, c);
        const BoundModel model(spec, c.graph, c.attrs);
        const Dyad d{std::uniform_int_distribution<std::size_t>(0, c.graph.first_size() - 1)(rng),
                     std::uniform_int_distribution<std::size_t>(0, c.graph.second_size() - 1)(rng)};
        auto y = to_vector(c.graph.adjacency());
        const std::size_t at = d.first * c.graph.second_size() + d.second;
        y[at] = 1;
        const StatisticVector on = model.evaluate(y);
        y[at] = 0;
        const StatisticVector off = model.evaluate(y);
        const StatisticVector delta = change_statistics(spec, c.graph, c.attrs, d);
        CHECK((delta - (on - off)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("nodematch counts same-class pairs per second-partition node") {
    // Column 0 holds first-partition nodes 0, 1, 2 (classes A, A, B): one A pair.
    // Column 1 holds nodes 0, 1, 3 (A, A, B): one A pair. Column 2 holds 2, 3 (B, B): one B pair.
    const std::vector<Dyad> edges{{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {3, 1}, {2, 2}, {3, 2}};
    const auto g = BipartiteGraph::with_generated_labels(4, 3, edges);
    AttributeTable attrs(g);
    attrs.add_categorical("cls", Side::first, {"A", "A", "B", "B"});
    const ModelSpec spec({Term::edges(), Term::node_match("cls")});
    const StatisticVector s = evaluate(spec, g, attrs);
    CHECK(s[0] == 8.0);
    CHECK(s[1] == 3.0);
    // Adding (3, 0) joins the B pair {2, 3} in column 0.
    const StatisticVector delta = change_statistics(spec, g, attrs, {3, 0});
    CHECK(delta[1] == 1.0);
}

TEST_CASE("quantitative nodematch uses equality or a tolerance") {
    const std::vector<Dyad> edges{{0, 0}, {1, 0}, {2, 0}};
    const auto g = BipartiteGraph::with_generated_labels(3, 1, edges);
    AttributeTable attrs(g);
    attrs.add_quantitative("v", Side::first, {1.0, 1.0, 1.5});
    CHECK(evaluate(ModelSpec({Term::node_match("v")}), g, attrs)[0] == 1.0);
    CHECK(evaluate(ModelSpec({Term::node_match("v", 0.5)}), g, attrs)[0] == 3.0);
    CHECK(evaluate(ModelSpec({Term::node_match("v", 0.49)}), g, attrs)[0] == 1.0);
}

TEST_CASE("term names") {
    CHECK(Term::edges().display_name() == "edges");
    CHECK(Term::node_activity(Side::first, "Coordination").display_name() == "Coordination");
    CHECK(Term::node_activity(Side::second, "b001").display_name() == "second:b001");
    CHECK(Term::node_match("importance").display_name() == "nodematch.importance");
    CHECK(Term::factor_second("type", "public").display_name() == "factor2.type.public");
    CHECK(Term::factor_first("group", "a").display_name() == "factor1.group.a");
    CHECK(Term::factor_second("type", "public").named("Public").display_name() == "Public");
    CHECK(term_kind_from_string("factor2") == TermKind::factor_second);
    CHECK_THROWS_AS(term_kind_from_string("triangle"), ValidationError);
}

TEST_CASE("specs and bindings are validated") {
    CHECK_THROWS_AS(ModelSpec(std::vector<Term>{}), ValidationError);
    CHECK_THROWS_AS(ModelSpec({Term::edges(), Term::edges()}), ValidationError);
    CHECK_THROWS_AS(ModelSpec({Term::edges(), Term::factor_second("a", "x").named("edges")}), ValidationError);
    CHECK_THROWS_AS(ModelSpec({Term::node_match("v", -1.0)}), ValidationError);

    const std::vector<Dyad> edges{{0, 0}};
    const auto g = BipartiteGraph::with_generated_labels(2, 2, edges);
    AttributeTable attrs(g);
    attrs.add_categorical("cls", Side::first, {"A", std::nullopt});
    attrs.add_categorical("kind", Side::second, {"x", "y"});
    attrs.add_quantitative("w", Side::second, {1.0, 2.0});

    auto bind = [&](Term t) { return BoundModel(ModelSpec({std::move(t)}), g, attrs); };
    CHECK_THROWS_AS(bind(Term::node_activity(Side::first, "zz")), ValidationError);
    CHECK_THROWS_AS(bind(Term::node_match("missing")), ValidationError);
    CHECK_THROWS_AS(bind(Term::node_match("cls")), ValidationError);   // not total
    CHECK_THROWS_AS(bind(Term::node_match("kind")), ValidationError);  // wrong partition
    CHECK_THROWS_AS(bind(Term::factor_second("kind", "z")), ValidationError);
    CHECK_THROWS_AS(bind(Term::factor_second("w", "1")), ValidationError);
    CHECK_NOTHROW(bind(Term::factor_second("kind", "y")));

    const ModelSpec spec({Term::edges()});
    const auto other = BipartiteGraph::with_generated_labels(3, 2, {});
    CHECK_THROWS_AS(BoundModel(spec, g, attrs).evaluate(other), ValidationError);
    CHECK_THROWS_AS(change_statistics(spec, g, attrs, {2, 0}), ValidationError);
}

TEST_CASE("dyad independence") {
    CHECK(ModelSpec({Term::edges(), Term::factor_second("a", "x")}).dyad_independent());
    CHECK_FALSE(ModelSpec({Term::edges(), Term::node_match("a")}).dyad_independent());
}
