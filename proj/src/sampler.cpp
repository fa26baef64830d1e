#include "bergm/sampler.hpp"

#include "bergm/error.hpp"

#include <cmath>
#include <thread>

namespace bergm {

std::string_view to_string(Proposal proposal) {
    return proposal == Proposal::tie_no_tie ? "tnt" : "uniform";
}

Proposal proposal_from_string(std::string_view text) {
    if (text == "tnt") return Proposal::tie_no_tie;
    if (text == "uniform") return Proposal::uniform_dyad;
    throw ValidationError("unknown proposal '" + std::string(text) + "' (expected tnt or uniform)");
}

void SamplerConfig::validate() const {
    if (interval && *interval == 0) throw ValidationError("sampler interval must be at least 1");
    if (sample_count == 0) throw ValidationError("sampler sample_count must be at least 1");
    if (chains == 0) throw ValidationError("sampler chains must be at least 1");
    if (check_every == 0) throw ValidationError("sampler check_every must be at least 1");
}

// ---------------------------------------------------------------------------

WorkingGraph::WorkingGraph(const BipartiteGraph& graph)
    : WorkingGraph(graph.first_size(), graph.second_size(), graph.adjacency()) {}

WorkingGraph::WorkingGraph(std::size_t n, std::size_t m, std::span<const std::uint8_t> adjacency)
    : n_(n), m_(m), adjacency_(adjacency.begin(), adjacency.end()) {
    if (adjacency_.size() != n * m) throw ValidationError("adjacency size mismatch");
    const std::size_t dyads = adjacency_.size();
    order_.resize(dyads);
    where_.resize(dyads);
    std::size_t front = 0;
    for (std::size_t d = 0; d < dyads; ++d) {
        if (adjacency_[d]) order_[front++] = static_cast<std::uint32_t>(d);
    }
    edges_ = front;
    for (std::size_t d = 0; d < dyads; ++d) {
        if (!adjacency_[d]) order_[front++] = static_cast<std::uint32_t>(d);
    }
    for (std::size_t p = 0; p < dyads; ++p) where_[order_[p]] = static_cast<std::uint32_t>(p);
}

void WorkingGraph::toggle(std::size_t dyad) {
    // Swap the dyad across the edge/empty boundary of order_.
    const std::size_t pos = where_[dyad];
    std::size_t boundary;
    if (adjacency_[dyad]) {
        boundary = edges_ - 1;
        --edges_;
    } else {
        boundary = edges_;
        ++edges_;
    }
    const std::uint32_t other = order_[boundary];
    order_[boundary] = static_cast<std::uint32_t>(dyad);
    order_[pos] = other;
    where_[other] = static_cast<std::uint32_t>(pos);
    where_[dyad] = static_cast<std::uint32_t>(boundary);
    adjacency_[dyad] ^= 1;
}

BipartiteGraph WorkingGraph::to_graph(const BipartiteGraph& like) const {
    if (like.first_size() != n_ || like.second_size() != m_) {
        throw ValidationError("label source has a different shape");
    }
    std::vector<Dyad> edges;
    edges.reserve(edges_);
    for (std::size_t d = 0; d < adjacency_.size(); ++d) {
        if (adjacency_[d]) edges.push_back({d / m_, d % m_});
    }
    return BipartiteGraph(like.labels(Side::first), like.labels(Side::second), edges);
}

// ---------------------------------------------------------------------------

void validate_theta(const BoundModel& model, const Eigen::VectorXd& theta) {
    if (static_cast<std::size_t>(theta.size()) != model.size()) {
        throw ValidationError("theta has " + std::to_string(theta.size()) + " entries; model has " +
                              std::to_string(model.size()) + " terms");
    }
    if (!theta.allFinite()) throw ValidationError("theta has non-finite entries");
}

Chain::Chain(const BoundModel& model, const Eigen::VectorXd& theta, const BipartiteGraph& start,
             Proposal proposal, std::uint64_t seed)
    : model_(model), theta_(theta), state_(start), proposal_(proposal), rng_(seed) {
    validate_theta(model, theta);
    stats_ = model.evaluate(start);
    delta_.resize(static_cast<Eigen::Index>(model.size()));
}

bool Chain::step() {
    const std::size_t dyads = state_.dyad_count();
    if (dyads == 0) return false;
    ++proposed_;

    std::size_t dyad;
    double log_correction = 0.0;
    if (proposal_ == Proposal::uniform_dyad) {
        dyad = rng_.below(dyads);
    } else {
        const auto total = static_cast<double>(dyads);
        const std::size_t edges = state_.edge_count();
        // Probability of proposing an addition from a graph with e edges.
        auto p_add = [dyads](std::size_t e) { return e == 0 ? 1.0 : e == dyads ? 0.0 : 0.5; };
        const double here = p_add(edges);
        const bool add = here == 1.0 || (here > 0.0 && rng_.uniform() < here);
        const auto e = static_cast<double>(edges);
        if (add) {
            dyad = state_.random_empty(rng_);
            const double forward = here / (total - e);
            const double reverse = (1.0 - p_add(edges + 1)) / (e + 1.0);
            log_correction = std::log(reverse / forward);
        } else {
            dyad = state_.random_edge(rng_);
            const double forward = (1.0 - here) / e;
            const double reverse = p_add(edges - 1) / (total - e + 1.0);
            log_correction = std::log(reverse / forward);
        }
    }

    const std::size_t m = state_.second_size();
    model_.change(state_.adjacency(), dyad / m, dyad % m, delta_.data());
    const double sign = state_.has(dyad) ? -1.0 : 1.0;
    const double log_ratio = sign * theta_.dot(delta_) + log_correction;
    if (log_ratio < 0.0 && rng_.uniform() >= std::exp(log_ratio)) return false;

    state_.toggle(dyad);
    stats_ += sign * delta_;
    ++accepted_;
    return true;
}

void Chain::run(std::size_t proposals) {
    for (std::size_t p = 0; p < proposals; ++p) step();
}

void Chain::verify() const {
    const StatisticVector full = model_.evaluate(state_.adjacency());
    if (full != stats_) {
        throw InternalConsistencyError("tracked chain statistics diverged from a full evaluation");
    }
}

// ---------------------------------------------------------------------------

namespace {

struct ChainOutput {
    Eigen::MatrixXd statistics;
    std::vector<std::vector<std::uint8_t>> adjacency;
    std::size_t proposals = 0;
    std::size_t accepted = 0;
};

ChainOutput run_chain(const BoundModel& model, const Eigen::VectorXd& theta,
                      const BipartiteGraph& start, const SamplerConfig& config,
                      std::uint64_t seed, std::size_t count, bool keep_graphs) {
    const std::size_t dyads = start.dyad_count();
    Chain chain(model, theta, start, config.proposal, seed);
    chain.run(config.effective_burn_in(dyads));
    const std::size_t interval = config.effective_interval(dyads);
    // A fair coin adds one proposal to each gap. Where every toggle is
    // accepted (theta = 0, uniform proposal) a fixed even gap would keep the
    // edge-count parity constant; the random gap is independent of the chain,
    // so retained states keep the target distribution.
    Rng gap(derive_seed(seed, 0x6A9));

    ChainOutput out;
    out.statistics.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(model.size()));
    for (std::size_t s = 0; s < count; ++s) {
        chain.run(interval + (gap.uniform() < 0.5 ? 1 : 0));
        if ((s + 1) % config.check_every == 0) chain.verify();
        out.statistics.row(static_cast<Eigen::Index>(s)) = chain.statistics().transpose();
        if (keep_graphs) {
            const auto adj = chain.state().adjacency();
            out.adjacency.emplace_back(adj.begin(), adj.end());
        }
    }
    chain.verify();
    out.proposals = chain.proposals();
    out.accepted = chain.accepted();
    return out;
}

} // namespace

Simulation simulate(const BoundModel& model, const Eigen::VectorXd& theta,
                    const BipartiteGraph& start, const SamplerConfig& config, bool keep_graphs) {
    config.validate();
    validate_theta(model, theta);
    if (start.first_size() != model.first_size() || start.second_size() != model.second_size()) {
        throw ValidationError("start graph shape does not match the bound model");
    }

    const std::size_t chains = std::min(config.chains, config.sample_count);
    std::vector<ChainOutput> outputs(chains);
    auto work = [&](std::size_t c) {
        const std::size_t count =
            config.sample_count / chains + (c < config.sample_count % chains ? 1 : 0);
        outputs[c] = run_chain(model, theta, start, config, chain_seed(config.seed, c), count,
                               keep_graphs);
    };
    if (chains == 1) {
        work(0);
    } else {
        std::vector<std::exception_ptr> errors(chains);
        {
            std::vector<std::jthread> threads;
            threads.reserve(chains);
            for (std::size_t c = 0; c < chains; ++c) {
                threads.emplace_back([&, c] {
                    try {
                        work(c);
                    } catch (...) {
                        errors[c] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& error : errors) {
            if (error) std::rethrow_exception(error);
        }
    }

    Simulation sim;
    sim.statistics.resize(static_cast<Eigen::Index>(config.sample_count),
                          static_cast<Eigen::Index>(model.size()));
    Eigen::Index row = 0;
    for (auto& out : outputs) {
        sim.statistics.middleRows(row, out.statistics.rows()) = out.statistics;
        row += out.statistics.rows();
        for (auto& adj : out.adjacency) sim.adjacency.push_back(std::move(adj));
        sim.proposals += out.proposals;
        sim.accepted += out.accepted;
    }
    return sim;
}

std::vector<Sample> sample(const ModelSpec& spec, const Eigen::VectorXd& theta,
                           const BipartiteGraph& start, const AttributeTable& attrs,
                           const SamplerConfig& config) {
    const BoundModel model(spec, start, attrs);
    Simulation sim = simulate(model, theta, start, config, true);
    std::vector<Sample> out;
    out.reserve(sim.adjacency.size());
    for (std::size_t s = 0; s < sim.adjacency.size(); ++s) {
        WorkingGraph state(start.first_size(), start.second_size(), sim.adjacency[s]);
        out.push_back({state.to_graph(start), sim.statistics.row(static_cast<Eigen::Index>(s)).transpose()});
    }
    return out;
}

} // namespace bergm
