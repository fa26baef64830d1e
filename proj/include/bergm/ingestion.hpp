#pragma once

#include "bergm/graph.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bergm {

/**
 * Lowercased word tokens of UTF-8 text. Letters and digits of any script
 * form words; everything else (punctuation, hyphens, symbols, whitespace)
 * separates them. Tokens made only of digits are dropped. Invalid UTF-8
 * bytes act as separators.
 */
std::vector<std::string> tokenize(std::string_view text);

/// Skill label -> phrases, each phrase a nonempty lowercase token sequence.
class SkillDictionary {
public:
    /// Throws ValidationError on a duplicate skill, an empty pattern list, or
    /// a pattern that has no tokens.
    void add(std::string skill, std::span<const std::string> patterns);

    std::size_t size() const noexcept { return skills_.size(); }
    const std::vector<std::string>& skills() const noexcept { return skills_; }
    const std::vector<std::vector<std::string>>& patterns(std::size_t skill) const {
        return patterns_.at(skill);
    }

private:
    std::vector<std::string> skills_;
    std::vector<std::vector<std::vector<std::string>>> patterns_;
};

struct Document {
    std::string id;
    std::vector<std::string> tokens;
};

class Corpus {
public:
    /// Tokenizes `text`. Throws ValidationError on a duplicate id. Documents
    /// without tokens are not added; their ids are listed in skipped().
    void add(std::string id, std::string_view text);
    void add_tokens(std::string id, std::vector<std::string> tokens);

    const std::vector<Document>& documents() const noexcept { return documents_; }
    const std::vector<std::string>& skipped() const noexcept { return skipped_; }

private:
    void check_unique(const std::string& id) const;

    std::vector<Document> documents_;
    std::vector<std::string> skipped_;
};

/// Every `*.txt` file in `directory` in filename order; id is the file stem.
Corpus load_corpus(const std::filesystem::path& directory);

struct PatternMatch {
    std::size_t skill = 0;
    std::size_t document = 0;
    /// Every pattern of the skill found in the document, space-joined.
    std::vector<std::string> patterns;
};

struct BuildResult {
    BipartiteGraph graph;
    /// One entry per edge, in (skill, document) order.
    std::vector<PatternMatch> matches;
};

/**
 * Skill-by-document incidence: an edge joins a skill and a document when any
 * of the skill's patterns occurs as a contiguous token run in the document.
 * Throws ValidationError for an empty dictionary.
 */
BuildResult build_network(const Corpus& corpus, const SkillDictionary& dictionary);

/// One (label, attribute, value) assignment, e.g. a row of an attributes CSV.
struct AttributeRecord {
    std::string label;
    std::string attribute;
    std::string value;
    /// Needed only when the label exists in both partitions.
    std::optional<Side> side;
};

/// Attribute that must be defined for every node of its partition.
struct AttributeRequirement {
    std::string name;
    std::optional<AttributeKind> kind;
    std::optional<Side> side;
};

/**
 * Assigns records to nodes. An attribute whose values all parse as numbers
 * is quantitative, otherwise categorical. Throws ValidationError on an
 * unknown or ambiguous label, a conflicting duplicate assignment, a missing
 * required value, or a kind/partition that contradicts a requirement.
 */
AttributeTable attach_attributes(const BipartiteGraph& graph, std::span<const AttributeRecord> records,
                                 std::span<const AttributeRequirement> required = {});

} // namespace bergm
