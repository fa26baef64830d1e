#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bergm {

/// The two node sets of a two-mode network: skills (first) and documents (second).
enum class Side { first, second };

std::string_view to_string(Side side);
Side side_from_string(std::string_view text);

/// One potential edge slot between a first- and a second-partition node.
struct Dyad {
    std::size_t first = 0;
    std::size_t second = 0;

    friend bool operator==(const Dyad&, const Dyad&) = default;
    friend auto operator<=>(const Dyad&, const Dyad&) = default;
};

/**
 * Immutable bipartite graph: two labelled partitions and a binary edge set
 * between them. Membership is a dense byte matrix, so `has_edge` is O(1).
 *
 * Nodes are addressed by dense index internally and by label externally;
 * the label/index mapping is part of the value.
 */
class BipartiteGraph {
public:
    BipartiteGraph() = default;

    /// Throws ValidationError on duplicate labels, duplicate edges, or
    /// out-of-range endpoints.
    BipartiteGraph(std::vector<std::string> first_labels,
                   std::vector<std::string> second_labels,
                   std::span<const Dyad> edges);

    /// Edges named by (first-label, second-label).
    static BipartiteGraph from_labelled_edges(
        std::vector<std::string> first_labels,
        std::vector<std::string> second_labels,
        std::span<const std::pair<std::string, std::string>> edges);

    /// n x m graph with generated labels "r0".. and "c0"..
    static BipartiteGraph with_generated_labels(std::size_t n, std::size_t m,
                                                std::span<const Dyad> edges);

    std::size_t first_size() const noexcept { return first_labels_.size(); }
    std::size_t second_size() const noexcept { return second_labels_.size(); }
    std::size_t size(Side side) const noexcept {
        return side == Side::first ? first_size() : second_size();
    }
    std::size_t dyad_count() const noexcept { return first_size() * second_size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const std::vector<std::string>& labels(Side side) const noexcept {
        return side == Side::first ? first_labels_ : second_labels_;
    }
    const std::string& label(Side side, std::size_t node) const;
    std::optional<std::size_t> find(Side side, std::string_view label) const;
    /// Throws ValidationError for an unknown label.
    std::size_t index_of(Side side, std::string_view label) const;

    bool has_edge(std::size_t first, std::size_t second) const;
    bool has_edge(Dyad d) const { return has_edge(d.first, d.second); }

    /// Edges sorted by (first, second).
    const std::vector<Dyad>& edges() const noexcept { return edges_; }

    /// Row-major n x m 0/1 matrix.
    std::span<const std::uint8_t> adjacency() const noexcept { return adjacency_; }

    std::size_t degree(Side side, std::size_t node) const;
    const std::vector<std::size_t>& degrees(Side side) const noexcept {
        return side == Side::first ? first_degrees_ : second_degrees_;
    }

    friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b);

private:
    std::vector<std::string> first_labels_;
    std::vector<std::string> second_labels_;
    std::unordered_map<std::string, std::size_t> first_index_;
    std::unordered_map<std::string, std::size_t> second_index_;
    std::vector<std::uint8_t> adjacency_;
    std::vector<Dyad> edges_;
    std::vector<std::size_t> first_degrees_;
    std::vector<std::size_t> second_degrees_;
};

enum class AttributeKind { quantitative, categorical };

std::string_view to_string(AttributeKind kind);

/// One node attribute, defined on exactly one partition.
struct Attribute {
    std::string name;
    Side side = Side::first;
    AttributeKind kind = AttributeKind::quantitative;
    /// Indexed by node; used when kind == quantitative.
    std::vector<std::optional<double>> numbers;
    /// Indexed by node; used when kind == categorical.
    std::vector<std::optional<std::string>> levels;
    /// Declared level set for categorical attributes; undeclared values are
    /// appended in the order first seen.
    std::vector<std::string> level_set;

    bool has_value(std::size_t node) const {
        return kind == AttributeKind::quantitative ? numbers.at(node).has_value()
                                                   : levels.at(node).has_value();
    }
    bool is_total() const;
};

/**
 * Node covariates for both partitions of one graph. Attribute names are
 * unique across the table; each is bound to one partition and one kind.
 */
class AttributeTable {
public:
    AttributeTable() = default;
    AttributeTable(std::size_t first_size, std::size_t second_size)
        : first_size_(first_size), second_size_(second_size) {}
    explicit AttributeTable(const BipartiteGraph& graph)
        : AttributeTable(graph.first_size(), graph.second_size()) {}

    std::size_t partition_size(Side side) const noexcept {
        return side == Side::first ? first_size_ : second_size_;
    }

    /// Creates the attribute if absent; throws on a side/kind clash.
    Attribute& declare(const std::string& name, Side side, AttributeKind kind);

    void set_number(const std::string& name, Side side, std::size_t node, double value);
    void set_level(const std::string& name, Side side, std::size_t node, std::string value);

    void add_quantitative(const std::string& name, Side side,
                          std::vector<std::optional<double>> values);
    void add_categorical(const std::string& name, Side side,
                         std::vector<std::optional<std::string>> values,
                         std::vector<std::string> level_set = {});

    const Attribute* find(std::string_view name) const;
    /// Throws ValidationError for an unknown name.
    const Attribute& get(std::string_view name) const;
    const std::vector<Attribute>& attributes() const noexcept { return attributes_; }
    bool empty() const noexcept { return attributes_.empty(); }

    /// Throws ValidationError naming the first node without a value.
    void require_total(std::string_view name, const BipartiteGraph& graph) const;

    /// Table for the sub-graph that keeps `kept` nodes of `side`, in order.
    AttributeTable restrict(Side side, std::span<const std::size_t> kept) const;

    friend bool operator==(const AttributeTable&, const AttributeTable&);

private:
    Attribute& mutable_get(std::string_view name);

    std::size_t first_size_ = 0;
    std::size_t second_size_ = 0;
    std::vector<Attribute> attributes_;
};

bool operator==(const Attribute& a, const Attribute& b);

struct DegreeSummary {
    double mean = 0.0;
    /// Sample standard deviation (divisor n - 1); NaN for a single node.
    double sd = 0.0;
    /// histogram[d] = number of nodes of degree d.
    std::vector<std::size_t> histogram;
};

/// Throws ValidationError for an out-of-range node.
std::size_t degree(const BipartiteGraph& graph, Side side, std::size_t node);

/// Throws ValidationError for an empty partition.
DegreeSummary degree_summary(const BipartiteGraph& graph, Side side);

/// Indices of second-partition nodes whose categorical `attribute` equals `level`.
std::vector<std::size_t> select_second(const AttributeTable& attrs,
                                       std::string_view attribute,
                                       std::string_view level);

/// Keeps every first-partition node and the listed second-partition nodes.
BipartiteGraph restrict_second(const BipartiteGraph& graph,
                               std::span<const std::size_t> kept);

/**
 * Sub-graph on all first-partition nodes and the second-partition nodes
 * whose categorical attribute equals `level`. Throws ValidationError for an
 * unknown attribute, an attribute that is not categorical on the second
 * partition, or a level outside the attribute's level set.
 */
BipartiteGraph induced_subgraph(const BipartiteGraph& graph, const AttributeTable& attrs,
                                std::string_view attribute, std::string_view level);

} // namespace bergm
