#pragma once

#include "bergm/graph.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bergm {

enum class RankMethod {
    dense,        ///< ties share a rank; the next rank is one higher (1, 2, 2, 3)
    competition,  ///< ties share a rank; the next rank skips the tied places (1, 2, 2, 4)
};

/// Ranks of `values` in descending order, starting at 1.
std::vector<std::size_t> rank_descending(std::span<const double> values, RankMethod method);

struct RankingRow {
    std::string skill;
    std::optional<double> importance;
    std::optional<std::size_t> importance_rank;
    std::size_t centrality_rank = 0;
    std::size_t degree = 0;
    double percent = 0.0;
};

struct RankingTable {
    /// Sorted by degree, descending; ties keep partition order.
    std::vector<RankingRow> rows;
    std::size_t total_degree = 0;
    double total_percent = 0.0;
};

/**
 * Degree ranking of the first partition with each node's share of all edges.
 * Importance ranks are dense; centrality ranks use `centrality_method`.
 * When `importance` is empty no importance column is produced.
 */
RankingTable ranking_table(const BipartiteGraph& graph, const AttributeTable& attrs,
                           std::string_view importance = "importance",
                           RankMethod centrality_method = RankMethod::competition);

/**
 * Leading singular-vector scores of the bi-adjacency matrix for `side`, by
 * power iteration to 1e-10; unit Euclidean norm, nonnegative. All zeros for
 * an edgeless graph.
 */
Eigen::VectorXd eigenvector_centrality(const BipartiteGraph& graph, Side side, double tolerance = 1e-10);

/// Pearson and Spearman correlation with two-sided t-test p-values (n - 2 df).
struct Correlation {
    double pearson = 0.0;
    double pearson_p = 1.0;
    double spearman = 0.0;
    double spearman_p = 1.0;
};

/// NaN correlations when either input has zero variance.
Correlation correlate(std::span<const double> x, std::span<const double> y);

struct CorrelationReport {
    /// The importance attribute first, then each metric.
    std::vector<std::string> variables;
    std::vector<std::vector<double>> values;  // per variable, over first-partition nodes
    std::vector<std::vector<Correlation>> matrix;
    /// Variables with zero variance; their correlations are undefined (NaN).
    std::vector<std::string> undefined;
};

/// Metric names: "degree", "eigenvector".
CorrelationReport correlation_report(const BipartiteGraph& graph, const AttributeTable& attrs,
                                     std::span<const std::string> metrics,
                                     std::string_view importance = "importance");

struct SubgraphRow {
    std::string attribute;  ///< empty for the whole-network row
    std::string level;
    std::size_t second_count = 0;
    std::size_t edges = 0;
    double first_mean = 0.0;
    double first_sd = 0.0;
    double second_mean = 0.0;
    double second_sd = 0.0;
    /// No second-partition node holds this level.
    bool empty = false;
};

/// One row per level of each listed categorical second-partition attribute,
/// then the whole network.
std::vector<SubgraphRow> subgraph_summary(const BipartiteGraph& graph, const AttributeTable& attrs,
                                          std::span<const std::string> attributes);

} // namespace bergm
