#pragma once

#include "bergm/descriptives.hpp"
#include "bergm/estimation.hpp"
#include "bergm/gof.hpp"
#include "bergm/graph.hpp"
#include "bergm/ingestion.hpp"
#include "bergm/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bergm {

inline constexpr std::string_view tool_name = "bergm";
inline constexpr std::string_view tool_version = "0.1.0";

namespace io {

using Json = nlohmann::ordered_json;

/// {"name": tool_name, "version": tool_version}
Json tool_info();

/// Six significant digits; "NA" for NaN.
std::string format_number(double value);

std::string read_text(const std::filesystem::path& path);
/// Writes UTF-8 with LF line endings exactly as given.
void write_text(const std::filesystem::path& path, std::string_view content);
Json read_json(const std::filesystem::path& path);
/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& json);

// Network file ---------------------------------------------------------------

struct NetworkFile {
    BipartiteGraph graph;
    AttributeTable attributes;
    Json metadata;
};

Json network_to_json(const BipartiteGraph& graph, const AttributeTable& attrs,
                     const Json& metadata = Json());
/// Rejects unknown fields, naming the offending path.
NetworkFile network_from_json(const Json& json);
NetworkFile read_network(const std::filesystem::path& path);

// Model file -----------------------------------------------------------------

Json model_to_json(const ModelSpec& spec);
ModelSpec model_from_json(const Json& json);
ModelSpec read_model(const std::filesystem::path& path);

// Dictionary and attributes ---------------------------------------------------

/// {"skill": ["pattern", ...], ...}, in file order.
SkillDictionary dictionary_from_json(const Json& json);
SkillDictionary read_dictionary(const std::filesystem::path& path);

/// CSV with columns label,attr,value and an optional fourth column partition.
/// A first row equal to the column names is treated as a header.
std::vector<AttributeRecord> parse_attribute_csv(std::string_view text);
std::vector<AttributeRecord> read_attribute_csv(const std::filesystem::path& path);

// Fit and gof reports ----------------------------------------------------------

Json fit_to_json(const FitResult& fit, const ModelSpec& spec, const Json& run = Json());

struct FitFile {
    ModelSpec spec;
    FitResult fit;
    Json run;
};

FitFile fit_from_json(const Json& json);
FitFile read_fit(const std::filesystem::path& path);
std::string render_fit(const FitResult& fit);

Json gof_to_json(const GofReport& report, const Json& run = Json());
std::string render_gof(const GofReport& report);

/// Header row of term names, then one tab-separated row per sample.
std::string statistics_tsv(std::span<const std::string> names, const Eigen::MatrixXd& statistics);

// Descriptives -----------------------------------------------------------------

Json ranking_to_json(const RankingTable& table);
std::string render_ranking(const RankingTable& table);
Json correlations_to_json(const CorrelationReport& report);
std::string render_correlations(const CorrelationReport& report);
Json subgraphs_to_json(const std::vector<SubgraphRow>& rows);
std::string render_subgraphs(const std::vector<SubgraphRow>& rows);

} // namespace io
} // namespace bergm
