#pragma once

#include "bergm/model.hpp"
#include "bergm/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bergm {

enum class Proposal {
    uniform_dyad,  ///< toggle a uniformly chosen dyad
    tie_no_tie,    ///< half the time an existing edge, otherwise an empty dyad
};

std::string_view to_string(Proposal proposal);
Proposal proposal_from_string(std::string_view text);

struct SamplerConfig {
    Proposal proposal = Proposal::tie_no_tie;
    /// Proposals discarded before the first retained sample; default 20 n m.
    std::optional<std::size_t> burn_in;
    /// Proposals between retained samples, default n m; each gap gets one
    /// more proposal with probability 1/2 so the thinned chain is aperiodic.
    std::optional<std::size_t> interval;
    std::size_t sample_count = 1000;
    std::uint64_t seed = 0;
    /// Independent chains; chain c is seeded with seed ^ c and contributes
    /// a contiguous block of the output.
    std::size_t chains = 1;
    /// Retained samples between full re-evaluations of the tracked statistics.
    std::size_t check_every = 100;

    std::size_t effective_burn_in(std::size_t dyads) const { return burn_in.value_or(20 * dyads); }
    std::size_t effective_interval(std::size_t dyads) const {
        return interval.value_or(dyads == 0 ? 1 : dyads);
    }
    /// Throws ValidationError when interval, sample_count, chains or check_every is zero.
    void validate() const;
};

/// Mutable 0/1 matrix owned by one chain, with O(1) toggle and O(1)
/// uniform draws of an existing edge or an empty dyad.
class WorkingGraph {
public:
    explicit WorkingGraph(const BipartiteGraph& graph);
    WorkingGraph(std::size_t n, std::size_t m, std::span<const std::uint8_t> adjacency);

    std::size_t first_size() const noexcept { return n_; }
    std::size_t second_size() const noexcept { return m_; }
    std::size_t dyad_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edges_; }
    bool has(std::size_t dyad) const { return adjacency_[dyad] != 0; }
    void toggle(std::size_t dyad);

    std::size_t random_edge(Rng& rng) const { return order_[rng.below(edges_)]; }
    std::size_t random_empty(Rng& rng) const {
        return order_[edges_ + rng.below(adjacency_.size() - edges_)];
    }

    std::span<const std::uint8_t> adjacency() const noexcept { return adjacency_; }
    /// Graph value with the labels of `like`.
    BipartiteGraph to_graph(const BipartiteGraph& like) const;

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::size_t edges_ = 0;
    std::vector<std::uint8_t> adjacency_;
    // order_[0, edges_) are present dyads, the rest empty; where_ inverts order_.
    std::vector<std::uint32_t> order_;
    std::vector<std::uint32_t> where_;
};

/**
 * Metropolis-Hastings chain over graphs with stationary law
 * P(y) proportional to exp(theta . s(y)).
 */
class Chain {
public:
    Chain(const BoundModel& model, const Eigen::VectorXd& theta, const BipartiteGraph& start,
          Proposal proposal, std::uint64_t seed);

    /// One proposal; returns whether it was accepted.
    bool step();
    void run(std::size_t proposals);

    const StatisticVector& statistics() const noexcept { return stats_; }
    const WorkingGraph& state() const noexcept { return state_; }
    std::size_t proposals() const noexcept { return proposed_; }
    std::size_t accepted() const noexcept { return accepted_; }

    /// Throws InternalConsistencyError when tracked statistics differ from a full evaluation.
    void verify() const;

private:
    const BoundModel& model_;
    Eigen::VectorXd theta_;
    WorkingGraph state_;
    StatisticVector stats_;
    Eigen::VectorXd delta_;
    Proposal proposal_;
    Rng rng_;
    std::size_t proposed_ = 0;
    std::size_t accepted_ = 0;
};

struct Simulation {
    /// One row per retained sample, columns aligned with the model terms.
    Eigen::MatrixXd statistics;
    /// Retained adjacency matrices, only when requested.
    std::vector<std::vector<std::uint8_t>> adjacency;
    std::size_t proposals = 0;
    std::size_t accepted = 0;
};

/// Throws ValidationError on a theta of the wrong length or with non-finite entries.
void validate_theta(const BoundModel& model, const Eigen::VectorXd& theta);

Simulation simulate(const BoundModel& model, const Eigen::VectorXd& theta,
                    const BipartiteGraph& start, const SamplerConfig& config,
                    bool keep_graphs = false);

struct Sample {
    BipartiteGraph graph;
    StatisticVector statistics;
};

/// Bit-identical output for equal seed and config.
std::vector<Sample> sample(const ModelSpec& spec, const Eigen::VectorXd& theta,
                           const BipartiteGraph& start, const AttributeTable& attrs,
                           const SamplerConfig& config);

} // namespace bergm
