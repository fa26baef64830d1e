#include <doctest.h>

#include "bergm/error.hpp"
#include "bergm/ingestion.hpp"
#include "bergm/io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <set>
#include <sstream>

using namespace bergm;

namespace {

const std::filesystem::path data_dir = BERGM_DATA_DIR;

/// ASCII-only normalisation used as an independent check of the matcher:
/// anything that is not [A-Za-z0-9] separates words, digit-only words drop out.
std::string normalise(const std::string& text) {
    std::string spaced;
    for (char c : text) {
        const auto u = static_cast<unsigned char>(c);
        spaced += (u < 0x80 && std::isalnum(u)) ? static_cast<char>(std::tolower(u)) : ' ';
    }
    std::istringstream words(spaced);
    std::string word, out = " ";
    while (words >> word) {
        if (std::all_of(word.begin(), word.end(), [](char c) { return c >= '0' && c <= '9'; })) continue;
        out += word + " ";
    }
    return out;
}

} // namespace

TEST_CASE("tokenizer") {
    CHECK(tokenize("Critical-thinking, and Time   Management!") ==
          std::vector<std::string>{"critical", "thinking", "and", "time", "management"});
    CHECK(tokenize("Year 2024: 3D modelling") == std::vector<std::string>{"year", "3d", "modelling"});
    CHECK(tokenize("ÉNFASIS en Coordinación") == std::vector<std::string>{"énfasis", "en", "coordinación"});
    CHECK(tokenize("line\r\nbreak\ttab") == std::vector<std::string>{"line", "break", "tab"});
    CHECK(tokenize("  ...  ").empty());
    CHECK(tokenize("bad \xff byte") == std::vector<std::string>{"bad", "byte"});
}

TEST_CASE("fixture corpus yields the hand-verified incidence") {
    const Corpus corpus = load_corpus(data_dir / "fixture_corpus");
    const SkillDictionary dict = io::read_dictionary(data_dir / "fixture_dictionary.json");
    const BuildResult built = build_network(corpus, dict);
    const BipartiteGraph& g = built.graph;

    CHECK(g.labels(Side::first) == std::vector<std::string>{"Coordination", "Active listening", "Time management",
                                                            "Critical thinking", "Mathematics"});
    CHECK(g.labels(Side::second) == std::vector<std::string>{"d1", "d2", "d3", "d4", "d5", "d6"});

    // Read off the six documents by eye.
    const std::set<std::pair<std::string, std::string>> expected{
        {"Coordination", "d1"},      {"Coordination", "d3"},      {"Active listening", "d2"},
        {"Time management", "d2"},   {"Time management", "d6"},   {"Critical thinking", "d1"},
        {"Critical thinking", "d4"}, {"Mathematics", "d2"},       {"Mathematics", "d3"},
        {"Mathematics", "d6"}};
    std::set<std::pair<std::string, std::string>> actual;
    for (const Dyad& d : g.edges()) actual.emplace(g.label(Side::first, d.first), g.label(Side::second, d.second));
    CHECK(actual == expected);

    // Independent substring check over the raw files.
    const io::Json dictionary = io::read_json(data_dir / "fixture_dictionary.json");
    std::set<std::pair<std::string, std::string>> substring;
    for (const auto& doc : g.labels(Side::second)) {
        const std::string text = normalise(io::read_text(data_dir / "fixture_corpus" / (doc + ".txt")));
        for (const auto& [skill, patterns] : dictionary.items()) {
            for (const auto& pattern : patterns) {
                if (text.find(normalise(pattern.get<std::string>())) != std::string::npos) substring.emplace(skill, doc);
            }
        }
    }
    CHECK(substring == expected);

    REQUIRE(built.matches.size() == expected.size());
    const auto& first = built.matches.front();
    CHECK(first.skill == 0);
    CHECK(first.document == 0);
    CHECK(first.patterns == std::vector<std::string>{"coordination"});
    CHECK(corpus.skipped().empty());
}

TEST_CASE("matching is contiguous and case-insensitive") {
    SkillDictionary dict;
    const std::vector<std::string> patterns{"Active Listening"};
    dict.add("Active listening", patterns);
    Corpus corpus;
    corpus.add("yes", "ACTIVE listening matters");
    corpus.add("split", "active and listening");
    corpus.add("reversed", "listening active");
    corpus.add("empty", "  ,;  ");
    const auto built = build_network(corpus, dict);
    CHECK(built.graph.second_size() == 3);
    CHECK(built.graph.edge_count() == 1);
    CHECK(built.graph.has_edge(0, built.graph.index_of(Side::second, "yes")));
    CHECK(corpus.skipped() == std::vector<std::string>{"empty"});
}

TEST_CASE("dictionary and corpus validation") {
    SkillDictionary dict;
    const std::vector<std::string> p{"x"};
    dict.add("A", p);
    CHECK_THROWS_AS(dict.add("A", p), ValidationError);
    CHECK_THROWS_AS(dict.add("B", std::vector<std::string>{}), ValidationError);
    CHECK_THROWS_AS(dict.add("C", std::vector<std::string>{"--"}), ValidationError);
    CHECK_THROWS_AS(build_network(Corpus{}, SkillDictionary{}), ValidationError);

    Corpus corpus;
    corpus.add("a", "text");
    CHECK_THROWS_AS(corpus.add("a", "again"), ValidationError);
    CHECK_THROWS_AS(load_corpus(data_dir / "no_such_directory"), ValidationError);
    CHECK_THROWS_AS(io::dictionary_from_json(io::Json::parse(R"({"A": "not a list"})")), ValidationError);
}

TEST_CASE("attaching attributes") {
    const std::vector<Dyad> edges{{0, 0}};
    const auto g = BipartiteGraph({"s1", "s2"}, {"d1", "d2", "s1"}, edges);
    const auto records = io::parse_attribute_csv(
        "label,attr,value\n"
        "s1,importance,80\n"
        "s2,importance, 72.5 \n"
        "d1,region,EU-ME-AF\n"
        "d2,region,AMES\n"
        "s1,region,AS-PA,second\n"
        "d1,code,1\n"
        "d2,code,x\n");
    // "s1" exists on both sides, so the un-annotated importance rows are ambiguous.
    CHECK_THROWS_AS(attach_attributes(g, records, {}), ValidationError);

    std::vector<AttributeRecord> fixed = records;
    fixed[0].side = Side::first;
    const std::vector<AttributeRequirement> required{{"importance", AttributeKind::quantitative, Side::first},
                                                     {"region", std::nullopt, std::nullopt}};
    const AttributeTable attrs = attach_attributes(g, fixed, required);
    const Attribute& importance = attrs.get("importance");
    CHECK(importance.kind == AttributeKind::quantitative);
    CHECK(*importance.numbers[1] == 72.5);
    CHECK(attrs.get("region").kind == AttributeKind::categorical);
    CHECK(*attrs.get("region").levels[2] == "AS-PA");
    CHECK(attrs.get("code").kind == AttributeKind::categorical);

    const std::vector<AttributeRequirement> numeric_code{{"code", AttributeKind::quantitative, std::nullopt}};
    CHECK_THROWS_AS(attach_attributes(g, fixed, numeric_code), ValidationError);
    const std::vector<AttributeRequirement> missing{{"weight", std::nullopt, std::nullopt}};
    CHECK_THROWS_AS(attach_attributes(g, fixed, missing), ValidationError);

    // d2 has no code value in this table: requiring it total fails.
    std::vector<AttributeRecord> partial{{"d1", "code", "1", std::nullopt}};
    const std::vector<AttributeRequirement> total{{"code", std::nullopt, std::nullopt}};
    CHECK_THROWS_AS(attach_attributes(g, partial, total), ValidationError);

    std::vector<AttributeRecord> conflict{{"d1", "region", "AMES", std::nullopt}, {"d1", "region", "AS-PA", std::nullopt}};
    CHECK_THROWS_AS(attach_attributes(g, conflict, {}), ValidationError);
    std::vector<AttributeRecord> unknown{{"zz", "region", "AMES", std::nullopt}};
    CHECK_THROWS_AS(attach_attributes(g, unknown, {}), ValidationError);
}

TEST_CASE("bundled attribute file attaches to the fixture network") {
    const Corpus corpus = load_corpus(data_dir / "fixture_corpus");
    const auto built = build_network(corpus, io::read_dictionary(data_dir / "fixture_dictionary.json"));
    const auto records = io::read_attribute_csv(data_dir / "fixture_attributes.csv");
    const std::vector<AttributeRequirement> required{{"importance", AttributeKind::quantitative, Side::first},
                                                     {"region", AttributeKind::categorical, Side::second},
                                                     {"type", AttributeKind::categorical, Side::second}};
    const AttributeTable attrs = attach_attributes(built.graph, records, required);
    CHECK(attrs.get("type").level_set == std::vector<std::string>{"public", "private"});
}
