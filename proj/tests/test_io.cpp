#include <doctest.h>

#include "bergm/error.hpp"
#include "bergm/io.hpp"
#include "support/table1.hpp"

#include <cmath>

using namespace bergm;
using io::Json;

namespace {

std::string error_of(const Json& json) {
    try {
        io::network_from_json(json);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

Json tiny_network() {
    return Json::parse(R"({
      "partitions": {"first": ["s1", "s2"], "second": ["d1", "d2", "d3"]},
      "edges": [["s1", "d1"], ["s2", "d3"]],
      "attributes": {
        "first": {"importance": {"kind": "quantitative", "values": {"s1": 80, "s2": 75.5}}},
        "second": {"region": {"kind": "categorical", "levels": ["AMES", "AS-PA"],
                              "values": {"d1": "AMES", "d2": "AMES", "d3": null}}}
      },
      "metadata": {"source": "unit test"}
    })");
}

} // namespace

TEST_CASE("network files round-trip") {
    const auto net = table1::network();
    const Json json = io::network_to_json(net.graph, net.attributes, net.metadata);
    const io::NetworkFile back = io::network_from_json(Json::parse(io::dump(json)));
    CHECK(back.graph == net.graph);
    CHECK(back.attributes == net.attributes);
    CHECK(back.metadata == net.metadata);
    CHECK(io::dump(io::network_to_json(back.graph, back.attributes, back.metadata)) == io::dump(json));

    const io::NetworkFile tiny = io::network_from_json(tiny_network());
    CHECK(tiny.graph.edge_count() == 2);
    CHECK(*tiny.attributes.get("importance").numbers[1] == 75.5);
    CHECK_FALSE(tiny.attributes.get("region").levels[2].has_value());
    CHECK(tiny.attributes.get("region").level_set == std::vector<std::string>{"AMES", "AS-PA"});
}

TEST_CASE("network schema errors name the offending path") {
    Json j = tiny_network();
    j["extra"] = 1;
    CHECK(error_of(j).find("$.extra") != std::string::npos);

    j = tiny_network();
    j["attributes"]["first"]["importance"]["unit"] = "pct";
    CHECK(error_of(j).find("$.attributes.first.importance.unit") != std::string::npos);

    j = tiny_network();
    j["attributes"]["first"]["importance"]["values"]["s1"] = "high";
    CHECK(error_of(j).find("$.attributes.first.importance.values.s1") != std::string::npos);

    j = tiny_network();
    j["edges"][1] = Json::array({"s2"});
    CHECK(error_of(j).find("$.edges[1]") != std::string::npos);

    j = tiny_network();
    j["edges"].push_back(Json::array({"s9", "d1"}));
    CHECK_FALSE(error_of(j).empty());

    j = tiny_network();
    j["partitions"].erase("second");
    CHECK(error_of(j).find("$.partitions.second") != std::string::npos);

    j = tiny_network();
    j["attributes"]["second"]["region"]["values"]["d9"] = "AMES";
    CHECK(error_of(j).find("$.attributes.second.region.values.d9") != std::string::npos);
}

TEST_CASE("model files") {
    const Json json = io::read_json(std::string(BERGM_DATA_DIR) + "/models/m6.json");
    const ModelSpec spec = io::model_from_json(json);
    CHECK(spec.size() == 9);
    CHECK(spec.names()[1] == "Management of personnel resources");
    CHECK(spec.names()[6] == "Public University");
    CHECK(spec.terms()[8].kind == TermKind::node_match);
    CHECK(io::model_to_json(spec) == json);

    CHECK_THROWS_AS(io::model_from_json(Json::parse(R"([{"kind": "edges", "params": {"x": 1}}])")), ValidationError);
    CHECK_THROWS_AS(io::model_from_json(Json::parse(R"([{"kind": "gwesp"}])")), ValidationError);
    CHECK_THROWS_AS(io::model_from_json(Json::parse(R"([{"kind": "nodematch", "params": {}}])")), ValidationError);
    CHECK_THROWS_AS(io::model_from_json(Json::parse(R"({"kind": "edges"})")), ValidationError);
    const ModelSpec tolerant =
        io::model_from_json(Json::parse(R"([{"kind": "nodematch", "params": {"attribute": "v", "tolerance": 2.5}}])"));
    CHECK(tolerant.terms()[0].tolerance == 2.5);
}

TEST_CASE("fit files round-trip at full precision") {
    const auto net = table1::network();
    const ModelSpec spec = io::read_model(std::string(BERGM_DATA_DIR) + "/models/m1.json");
    const FitResult fit = fit_mple(spec, net.graph, net.attributes);
    Json run;
    run["subcommand"] = "fit";
    const Json json = io::fit_to_json(fit, spec, run);
    CHECK(json["tool"]["name"] == "bergm");
    const io::FitFile back = io::fit_from_json(Json::parse(io::dump(json)));
    CHECK(back.fit.theta == fit.theta);
    CHECK(back.fit.std_errors == fit.std_errors);
    CHECK(back.fit.log_likelihood == fit.log_likelihood);
    CHECK(back.fit.aic == fit.aic);
    CHECK(back.fit.names == fit.names);
    CHECK(back.run == run);
    CHECK(io::dump(io::fit_to_json(back.fit, back.spec, back.run)) == io::dump(json));

    Json broken = json;
    broken["terms"][0]["name"] = "density";
    CHECK_THROWS_AS(io::fit_from_json(broken), ValidationError);

    const std::string text = io::render_fit(fit);
    CHECK(text.find("-1.20787") != std::string::npos);
    CHECK(text.find("***") != std::string::npos);
}

TEST_CASE("attribute CSV") {
    const auto rows = io::parse_attribute_csv("label,attr,value\r\n\"Skill, with comma\",importance,55\n"
                                              "d1,region,\"AMES\"\n\nd2,note,\"say \"\"hi\"\"\",second\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].label == "Skill, with comma");
    CHECK(rows[1].value == "AMES");
    CHECK(rows[2].value == "say \"hi\"");
    CHECK(rows[2].side == Side::second);
    CHECK_THROWS_AS(io::parse_attribute_csv("a,b\n"), ValidationError);
    CHECK_THROWS_AS(io::parse_attribute_csv("a,b,\"c\n"), ValidationError);
    CHECK_THROWS_AS(io::parse_attribute_csv("a,b,c,middle\n"), ValidationError);
}

TEST_CASE("number formatting") {
    CHECK(io::format_number(1234567.0) == "1.23457e+06");
    CHECK(io::format_number(-1.2078725) == "-1.20787");
    CHECK(io::format_number(std::nan("")) == "NA");
    const std::vector<std::string> names{"edges", "x"};
    Eigen::MatrixXd stats(2, 2);
    stats << 1, 0.1, 2, 3;
    CHECK(io::statistics_tsv(names, stats) == "edges\tx\n1\t0.10000000000000001\n2\t3\n");
}

TEST_CASE("missing files are validation errors") {
    CHECK_THROWS_AS(io::read_network("/nonexistent/net.json"), ValidationError);
    CHECK_THROWS_AS(io::network_from_json(Json::parse("[]")), ValidationError);
}
