#pragma once

#include "bergm/graph.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bergm {

/// Sufficient statistics s(y), aligned with the term order of a ModelSpec.
using StatisticVector = Eigen::VectorXd;

enum class TermKind {
    edges,          ///< total edge count
    node_activity,  ///< degree of one named node
    node_match,     ///< co-occurring pairs of first-partition nodes sharing an attribute value
    factor_second,  ///< summed degree of second-partition nodes at one level
    factor_first,   ///< summed degree of first-partition nodes at one level
};

std::string_view to_string(TermKind kind);
TermKind term_kind_from_string(std::string_view text);

struct Term {
    TermKind kind = TermKind::edges;
    Side side = Side::first;
    std::string node;
    std::string attribute;
    std::string level;
    /// NodeMatch on a quantitative attribute: |a - b| <= tolerance. Zero means exact equality.
    double tolerance = 0.0;
    /// Optional display name; derived from the parameters when empty.
    std::string name;

    static Term edges();
    static Term node_activity(Side side, std::string label);
    static Term node_match(std::string attribute, double tolerance = 0.0);
    static Term factor_second(std::string attribute, std::string level);
    static Term factor_first(std::string attribute, std::string level);

    Term& named(std::string display) {
        name = std::move(display);
        return *this;
    }

    std::string display_name() const;
    bool dyad_independent() const noexcept { return kind != TermKind::node_match; }
    /// Equality of what the term counts, ignoring the display name.
    bool same_statistic(const Term& other) const;
};

/// Ordered, nonempty list of distinct terms.
class ModelSpec {
public:
    ModelSpec() = default;
    explicit ModelSpec(std::vector<Term> terms);

    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    std::vector<std::string> names() const;
    bool dyad_independent() const;

private:
    std::vector<Term> terms_;
};

/**
 * A ModelSpec resolved against one graph's labels and attributes. Holds only
 * the node-level data it needs, so it can score any graph of the same shape.
 */
class BoundModel {
public:
    /// Throws ValidationError for unknown labels or attributes, wrong attribute
    /// kind or partition, undeclared levels, or attributes with missing values.
    BoundModel(const ModelSpec& spec, const BipartiteGraph& graph, const AttributeTable& attrs);

    std::size_t size() const noexcept { return terms_.size(); }
    std::size_t first_size() const noexcept { return n_; }
    std::size_t second_size() const noexcept { return m_; }
    const ModelSpec& spec() const noexcept { return spec_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    bool dyad_independent() const noexcept { return dyad_independent_; }

    /// Full evaluation on a row-major n x m 0/1 matrix.
    StatisticVector evaluate(std::span<const std::uint8_t> adjacency) const;
    StatisticVector evaluate(const BipartiteGraph& graph) const;

    /// s(y with dyad on) - s(y with dyad off), written to out[0..q).
    void change(std::span<const std::uint8_t> adjacency, std::size_t first, std::size_t second,
                double* out) const;
    StatisticVector change(std::span<const std::uint8_t> adjacency, Dyad dyad) const;

private:
    struct Compiled {
        TermKind kind = TermKind::edges;
        Side side = Side::first;
        std::size_t node = 0;
        /// Per-node class code for factors and exact NodeMatch; level code for factors.
        std::vector<int> codes;
        int level = -1;
        /// NodeMatch with tolerance works on raw values.
        std::vector<double> values;
        double tolerance = 0.0;
    };

    bool matches(const Compiled& term, std::size_t a, std::size_t b) const;

    ModelSpec spec_;
    std::vector<Compiled> terms_;
    std::vector<std::string> names_;
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    bool dyad_independent_ = true;
};

StatisticVector evaluate(const ModelSpec& spec, const BipartiteGraph& graph,
                         const AttributeTable& attrs);

/// Throws ValidationError for a dyad outside the graph.
StatisticVector change_statistics(const ModelSpec& spec, const BipartiteGraph& graph,
                                  const AttributeTable& attrs, Dyad dyad);

} // namespace bergm
