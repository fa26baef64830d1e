#pragma once

// Synthetic 28 x 258 network with the published skill degrees. Brochure
// memberships are assigned round-robin, so brochure degrees are as even as
// possible; only skill degrees, regions and institution-type counts match the
// published tables. Importance scores are illustrative values whose dense
// ranking equals the published importance ranking.

#include "bergm/io.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace table1 {

inline constexpr std::size_t skills = 28;
inline constexpr std::size_t brochures = 258;
inline constexpr std::size_t total_edges = 2110;

inline const std::array<const char*, skills> names{
    "Management of personnel resources", "Judgment and decision making", "Coordination",
    "Active listening", "Management of financial resources", "Instructing", "Time management",
    "Mathematics", "Programming", "Active learning", "Learning strategies", "Quality control analysis",
    "Management of material resources", "Monitoring", "Systems evaluation", "Science", "Speaking",
    "Reading comprehension", "Critical thinking", "Complex problem solving", "Service orientation",
    "Persuasion", "Technology design", "Negotiation", "Writing", "Operations monitoring",
    "Social perceptiveness", "Operations analysis"};

inline constexpr std::array<std::size_t, skills> degrees{239, 214, 173, 133, 129, 113, 103, 92, 90, 83,
                                                         78,  75,  75,  71,  69,  55,  53,  51, 50, 41,
                                                         37,  31,  17,  13,  13,  6,   4,   2};

inline constexpr std::array<std::size_t, skills> importance_ranks{5, 2,  4,  1, 9, 8, 4, 10, 12, 1,
                                                                  7, 12, 11, 2, 4, 13, 1, 1, 1, 3,
                                                                  7, 2,  13, 3, 6, 13, 1, 5};

/// Published centrality ranks (ties share the better place).
inline constexpr std::array<std::size_t, skills> centrality_ranks{1,  2,  3,  4,  5,  6,  7,  8,  9,  10,
                                                                  11, 12, 12, 14, 15, 16, 17, 18, 19, 20,
                                                                  21, 22, 23, 24, 24, 26, 27, 28};

/// Published percentages, two decimals.
inline constexpr std::array<double, skills> percents{11.33, 10.14, 8.20, 6.30, 6.11, 5.36, 4.88,
                                                     4.36,  4.27,  3.93, 3.70, 3.55, 3.55, 3.36,
                                                     3.27,  2.61,  2.51, 2.42, 2.37, 1.94, 1.75,
                                                     1.47,  0.81,  0.62, 0.62, 0.28, 0.19, 0.09};

inline std::string brochure_label(std::size_t k) {
    std::string s = std::to_string(k + 1);
    return "b" + std::string(3 - s.size(), '0') + s;
}

inline std::string region(std::size_t k) {
    if (k < 100) return "AMES";
    if (k < 226) return "EU-ME-AF";
    return "AS-PA";
}

/// 178 public and 80 private brochures, interleaved.
inline std::string type(std::size_t k) { return (k * 7) % brochures < 80 ? "private" : "public"; }

inline bergm::io::NetworkFile network() {
    std::vector<std::string> first(names.begin(), names.end());
    std::vector<std::string> second;
    for (std::size_t k = 0; k < brochures; ++k) second.push_back(brochure_label(k));
    std::vector<bergm::Dyad> edges;
    std::size_t next = 0;
    for (std::size_t i = 0; i < skills; ++i) {
        for (std::size_t d = 0; d < degrees[i]; ++d) edges.push_back({i, (next + d) % brochures});
        next = (next + degrees[i]) % brochures;
    }
    bergm::io::NetworkFile file;
    file.graph = bergm::BipartiteGraph(std::move(first), std::move(second), edges);
    file.attributes = bergm::AttributeTable(file.graph);
    std::vector<std::optional<double>> importance(skills);
    for (std::size_t i = 0; i < skills; ++i) importance[i] = 100.0 - 5.0 * static_cast<double>(importance_ranks[i] - 1);
    file.attributes.add_quantitative("importance", bergm::Side::first, importance);
    std::vector<std::optional<std::string>> regions(brochures), types(brochures);
    for (std::size_t k = 0; k < brochures; ++k) {
        regions[k] = region(k);
        types[k] = type(k);
    }
    file.attributes.add_categorical("region", bergm::Side::second, regions, {"AMES", "AS-PA", "EU-ME-AF"});
    file.attributes.add_categorical("type", bergm::Side::second, types, {"private", "public"});
    file.metadata = bergm::io::Json::object();
    file.metadata["description"] =
        "Synthetic network with published skill degrees; brochure memberships and importance scores are illustrative";
    return file;
}

} // namespace table1
