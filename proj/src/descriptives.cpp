#include "bergm/descriptives.hpp"

#include "bergm/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bergm {

std::vector<std::size_t> rank_descending(std::span<const double> values, RankMethod method) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<std::size_t> ranks(values.size());
    std::size_t dense = 0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const bool tie = pos > 0 && values[order[pos]] == values[order[pos - 1]];
        if (!tie) ++dense;
        if (method == RankMethod::dense) {
            ranks[order[pos]] = dense;
        } else {
            ranks[order[pos]] = tie ? ranks[order[pos - 1]] : pos + 1;
        }
    }
    return ranks;
}

RankingTable ranking_table(const BipartiteGraph& graph, const AttributeTable& attrs,
                           std::string_view importance, RankMethod centrality_method) {
    const std::size_t n = graph.first_size();
    std::vector<double> degrees(n);
    for (std::size_t i = 0; i < n; ++i) degrees[i] = static_cast<double>(graph.degree(Side::first, i));
    const auto centrality = rank_descending(degrees, centrality_method);

    std::vector<std::optional<double>> scores(n);
    std::vector<std::optional<std::size_t>> score_ranks(n);
    if (!importance.empty()) {
        const Attribute& attr = attrs.get(importance);
        if (attr.side != Side::first || attr.kind != AttributeKind::quantitative) {
            throw ValidationError("importance attribute '" + attr.name +
                                  "' must be quantitative on the first partition");
        }
        attrs.require_total(attr.name, graph);
        std::vector<double> values(n);
        for (std::size_t i = 0; i < n; ++i) values[i] = *attr.numbers[i];
        const auto ranks = rank_descending(values, RankMethod::dense);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = values[i];
            score_ranks[i] = ranks[i];
        }
    }

    RankingTable table;
    table.total_degree = graph.edge_count();
    const double total = static_cast<double>(graph.edge_count());
    for (std::size_t i = 0; i < n; ++i) {
        RankingRow row;
        row.skill = graph.label(Side::first, i);
        row.importance = scores[i];
        row.importance_rank = score_ranks[i];
        row.centrality_rank = centrality[i];
        row.degree = graph.degree(Side::first, i);
        row.percent = total > 0.0 ? 100.0 * static_cast<double>(row.degree) / total : 0.0;
        table.total_percent += row.percent;
        table.rows.push_back(std::move(row));
    }
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const RankingRow& a, const RankingRow& b) { return a.degree > b.degree; });
    return table;
}

Eigen::VectorXd eigenvector_centrality(const BipartiteGraph& graph, Side side, double tolerance) {
    const auto n = static_cast<Eigen::Index>(graph.first_size());
    const auto m = static_cast<Eigen::Index>(graph.second_size());
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, m);
    for (const Dyad& d : graph.edges()) {
        b(static_cast<Eigen::Index>(d.first), static_cast<Eigen::Index>(d.second)) = 1.0;
    }
    const Eigen::MatrixXd gram = side == Side::first ? Eigen::MatrixXd(b * b.transpose())
                                                     : Eigen::MatrixXd(b.transpose() * b);
    const Eigen::Index size = gram.rows();
    if (size == 0 || graph.edge_count() == 0) return Eigen::VectorXd::Zero(size);

    Eigen::VectorXd x = Eigen::VectorXd::Constant(size, 1.0 / std::sqrt(static_cast<double>(size)));
    for (int iter = 0; iter < 100000; ++iter) {
        Eigen::VectorXd next = gram * x;
        next /= next.norm();
        const double change = (next - x).lpNorm<Eigen::Infinity>();
        x = std::move(next);
        if (change <= tolerance) return x;
    }
    throw ConvergenceError("eigenvector centrality power iteration did not converge");
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t start = 0; start < order.size();) {
        std::size_t end = start;
        while (end + 1 < order.size() && v[order[end + 1]] == v[order[start]]) ++end;
        const double avg = (static_cast<double>(start + end) / 2.0) + 1.0;
        for (std::size_t k = start; k <= end; ++k) ranks[order[k]] = avg;
        start = end + 1;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double t_test_p(double r, std::size_t n) {
    if (std::isnan(r)) return std::numeric_limits<double>::quiet_NaN();
    if (std::abs(r) >= 1.0 - 1e-15) return 0.0;
    const double df = static_cast<double>(n) - 2.0;
    const double t = r * std::sqrt(df / (1.0 - r * r));
    const boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

bool zero_variance(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

} // namespace

Correlation correlate(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("correlation inputs differ in length");
    if (x.size() < 3) throw ValidationError("correlation needs at least 3 observations");
    Correlation c;
    c.pearson = pearson(x, y);
    c.pearson_p = t_test_p(c.pearson, x.size());
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    c.spearman = pearson(rx, ry);
    c.spearman_p = t_test_p(c.spearman, x.size());
    return c;
}

CorrelationReport correlation_report(const BipartiteGraph& graph, const AttributeTable& attrs,
                                     std::span<const std::string> metrics, std::string_view importance) {
    const std::size_t n = graph.first_size();
    if (n < 3) throw ValidationError("correlation report needs at least 3 first-partition nodes");
    CorrelationReport report;

    const Attribute& attr = attrs.get(importance);
    if (attr.side != Side::first || attr.kind != AttributeKind::quantitative) {
        throw ValidationError("importance attribute '" + attr.name +
                              "' must be quantitative on the first partition");
    }
    attrs.require_total(attr.name, graph);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) scores[i] = *attr.numbers[i];
    report.variables.push_back(attr.name);
    report.values.push_back(std::move(scores));

    for (const auto& metric : metrics) {
        std::vector<double> values(n);
        if (metric == "degree") {
            for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<double>(graph.degree(Side::first, i));
        } else if (metric == "eigenvector") {
            const Eigen::VectorXd ev = eigenvector_centrality(graph, Side::first);
            for (std::size_t i = 0; i < n; ++i) values[i] = ev[static_cast<Eigen::Index>(i)];
        } else {
            throw ValidationError("unknown centrality metric '" + metric + "' (expected degree or eigenvector)");
        }
        report.variables.push_back(metric);
        report.values.push_back(std::move(values));
    }

    const std::size_t k = report.variables.size();
    for (std::size_t a = 0; a < k; ++a) {
        if (zero_variance(report.values[a])) report.undefined.push_back(report.variables[a]);
    }
    report.matrix.assign(k, std::vector<Correlation>(k));
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            report.matrix[a][b] = correlate(report.values[a], report.values[b]);
        }
    }
    return report;
}

std::vector<SubgraphRow> subgraph_summary(const BipartiteGraph& graph, const AttributeTable& attrs,
                                          std::span<const std::string> attributes) {
    auto summarize = [](const BipartiteGraph& g, SubgraphRow row) {
        row.second_count = g.second_size();
        row.edges = g.edge_count();
        row.empty = g.second_size() == 0;
        if (g.first_size() > 0) {
            const auto first = degree_summary(g, Side::first);
            row.first_mean = first.mean;
            row.first_sd = first.sd;
        }
        if (row.empty) {
            row.second_mean = row.second_sd = std::numeric_limits<double>::quiet_NaN();
        } else {
            const auto second = degree_summary(g, Side::second);
            row.second_mean = second.mean;
            row.second_sd = second.sd;
        }
        return row;
    };

    std::vector<SubgraphRow> rows;
    for (const auto& name : attributes) {
        const Attribute& attr = attrs.get(name);
        if (attr.side != Side::second || attr.kind != AttributeKind::categorical) {
            throw ValidationError("sub-graph attribute '" + name + "' must be categorical on the second partition");
        }
        for (const auto& level : attr.level_set) {
            rows.push_back(summarize(induced_subgraph(graph, attrs, name, level), {name, level}));
        }
    }
    rows.push_back(summarize(graph, {}));
    return rows;
}

} // namespace bergm
