#include "bergm/model.hpp"

#include "bergm/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace bergm {

std::string_view to_string(TermKind kind) {
    switch (kind) {
    case TermKind::edges: return "edges";
    case TermKind::node_activity: return "nodeactivity";
    case TermKind::node_match: return "nodematch";
    case TermKind::factor_second: return "factor2";
    case TermKind::factor_first: return "factor1";
    }
    return "?";
}

TermKind term_kind_from_string(std::string_view text) {
    for (TermKind kind : {TermKind::edges, TermKind::node_activity, TermKind::node_match,
                          TermKind::factor_second, TermKind::factor_first}) {
        if (text == to_string(kind)) return kind;
    }
    throw ValidationError("unknown term kind '" + std::string(text) + "'");
}

Term Term::edges() {
    return Term{};
}

Term Term::node_activity(Side side, std::string label) {
    Term t;
    t.kind = TermKind::node_activity;
    t.side = side;
    t.node = std::move(label);
    return t;
}

Term Term::node_match(std::string attribute, double tolerance) {
    Term t;
    t.kind = TermKind::node_match;
    t.attribute = std::move(attribute);
    t.tolerance = tolerance;
    return t;
}

Term Term::factor_second(std::string attribute, std::string level) {
    Term t;
    t.kind = TermKind::factor_second;
    t.side = Side::second;
    t.attribute = std::move(attribute);
    t.level = std::move(level);
    return t;
}

Term Term::factor_first(std::string attribute, std::string level) {
    Term t;
    t.kind = TermKind::factor_first;
    t.attribute = std::move(attribute);
    t.level = std::move(level);
    return t;
}

std::string Term::display_name() const {
    if (!name.empty()) return name;
    switch (kind) {
    case TermKind::edges: return "edges";
    case TermKind::node_activity:
        return side == Side::first ? node : "second:" + node;
    case TermKind::node_match: return "nodematch." + attribute;
    case TermKind::factor_second: return "factor2." + attribute + "." + level;
    case TermKind::factor_first: return "factor1." + attribute + "." + level;
    }
    return "?";
}

bool Term::same_statistic(const Term& other) const {
    if (kind != other.kind) return false;
    switch (kind) {
    case TermKind::edges: return true;
    case TermKind::node_activity: return side == other.side && node == other.node;
    case TermKind::node_match: return attribute == other.attribute && tolerance == other.tolerance;
    case TermKind::factor_second:
    case TermKind::factor_first: return attribute == other.attribute && level == other.level;
    }
    return false;
}

ModelSpec::ModelSpec(std::vector<Term> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw ValidationError("model has no terms");
    for (std::size_t a = 0; a < terms_.size(); ++a) {
        if (terms_[a].tolerance < 0.0 || !std::isfinite(terms_[a].tolerance)) {
            throw ValidationError("term '" + terms_[a].display_name() + "': invalid tolerance");
        }
        for (std::size_t b = 0; b < a; ++b) {
            if (terms_[a].same_statistic(terms_[b])) {
                throw ValidationError("duplicate term '" + terms_[a].display_name() + "'");
            }
            if (terms_[a].display_name() == terms_[b].display_name()) {
                throw ValidationError("two terms share the name '" + terms_[a].display_name() + "'");
            }
        }
    }
}

std::vector<std::string> ModelSpec::names() const {
    std::vector<std::string> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(t.display_name());
    return out;
}

bool ModelSpec::dyad_independent() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.dyad_independent(); });
}

// ---------------------------------------------------------------------------

namespace {

const Attribute& bound_attribute(const Term& term, const AttributeTable& attrs,
                                 const BipartiteGraph& graph, Side side) {
    const Attribute* attr = attrs.find(term.attribute);
    if (attr == nullptr) {
        throw ValidationError("term '" + term.display_name() + "': unknown attribute '" +
                              term.attribute + "'");
    }
    if (attr->side != side) {
        throw ValidationError("term '" + term.display_name() + "': attribute '" + attr->name +
                              "' is defined on the " + std::string(to_string(attr->side)) +
                              " partition, expected " + std::string(to_string(side)));
    }
    attrs.require_total(attr->name, graph);
    return *attr;
}

/// Dense codes by first appearance of each distinct level.
std::vector<int> level_codes(const Attribute& attr, std::map<std::string, int>& dictionary) {
    std::vector<int> codes;
    codes.reserve(attr.levels.size());
    for (const auto& v : attr.levels) {
        auto [it, inserted] = dictionary.emplace(*v, static_cast<int>(dictionary.size()));
        codes.push_back(it->second);
    }
    return codes;
}

std::vector<int> value_codes(const Attribute& attr) {
    std::map<double, int> dictionary;
    std::vector<int> codes;
    codes.reserve(attr.numbers.size());
    for (const auto& v : attr.numbers) {
        auto [it, inserted] = dictionary.emplace(*v, static_cast<int>(dictionary.size()));
        codes.push_back(it->second);
    }
    return codes;
}

} // namespace

BoundModel::BoundModel(const ModelSpec& spec, const BipartiteGraph& graph, const AttributeTable& attrs)
    : spec_(spec), n_(graph.first_size()), m_(graph.second_size()) {
    if (spec.size() == 0) throw ValidationError("model has no terms");
    if (attrs.partition_size(Side::first) != n_ || attrs.partition_size(Side::second) != m_) {
        throw ValidationError("attribute table does not match the graph's partition sizes");
    }
    names_ = spec.names();
    dyad_independent_ = spec.dyad_independent();
    for (const Term& term : spec.terms()) {
        Compiled c;
        c.kind = term.kind;
        switch (term.kind) {
        case TermKind::edges: break;
        case TermKind::node_activity:
            c.side = term.side;
            c.node = graph.index_of(term.side, term.node);
            break;
        case TermKind::node_match: {
            const Attribute& attr = bound_attribute(term, attrs, graph, Side::first);
            c.tolerance = term.tolerance;
            if (attr.kind == AttributeKind::categorical) {
                if (term.tolerance != 0.0) {
                    throw ValidationError("term '" + term.display_name() +
                                          "': tolerance requires a quantitative attribute");
                }
                std::map<std::string, int> dictionary;
                c.codes = level_codes(attr, dictionary);
            } else if (term.tolerance == 0.0) {
                c.codes = value_codes(attr);
            } else {
                for (const auto& v : attr.numbers) c.values.push_back(*v);
            }
            break;
        }
        case TermKind::factor_second:
        case TermKind::factor_first: {
            const Side side = term.kind == TermKind::factor_second ? Side::second : Side::first;
            c.side = side;
            const Attribute& attr = bound_attribute(term, attrs, graph, side);
            if (attr.kind != AttributeKind::categorical) {
                throw ValidationError("term '" + term.display_name() + "': attribute '" +
                                      attr.name + "' is not categorical");
            }
            if (std::find(attr.level_set.begin(), attr.level_set.end(), term.level) ==
                attr.level_set.end()) {
                throw ValidationError("term '" + term.display_name() + "': attribute '" +
                                      attr.name + "' has no level '" + term.level + "'");
            }
            std::map<std::string, int> dictionary;
            c.codes = level_codes(attr, dictionary);
            const auto it = dictionary.find(term.level);
            // A declared level nobody holds gets a code no node carries.
            c.level = it == dictionary.end() ? -1 : it->second;
            break;
        }
        }
        terms_.push_back(std::move(c));
    }
}

bool BoundModel::matches(const Compiled& term, std::size_t a, std::size_t b) const {
    if (!term.codes.empty()) return term.codes[a] == term.codes[b];
    return std::abs(term.values[a] - term.values[b]) <= term.tolerance;
}

StatisticVector BoundModel::evaluate(std::span<const std::uint8_t> y) const {
    if (y.size() != n_ * m_) throw ValidationError("adjacency size does not match the bound model");
    std::vector<std::size_t> row(n_, 0), col(m_, 0);
    std::size_t edges = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = 0; k < m_; ++k) {
            if (y[i * m_ + k]) {
                ++row[i];
                ++col[k];
                ++edges;
            }
        }
    }

    StatisticVector s = StatisticVector::Zero(static_cast<Eigen::Index>(terms_.size()));
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        const Compiled& term = terms_[t];
        double value = 0.0;
        switch (term.kind) {
        case TermKind::edges: value = static_cast<double>(edges); break;
        case TermKind::node_activity:
            value = static_cast<double>(term.side == Side::first ? row[term.node] : col[term.node]);
            break;
        case TermKind::factor_second:
            for (std::size_t k = 0; k < m_; ++k) {
                if (term.codes[k] == term.level) value += static_cast<double>(col[k]);
            }
            break;
        case TermKind::factor_first:
            for (std::size_t i = 0; i < n_; ++i) {
                if (term.codes[i] == term.level) value += static_cast<double>(row[i]);
            }
            break;
        case TermKind::node_match:
            if (!term.codes.empty()) {
                // Per column: sum over classes of C(count, 2).
                std::map<int, std::size_t> counts;
                for (std::size_t k = 0; k < m_; ++k) {
                    counts.clear();
                    for (std::size_t i = 0; i < n_; ++i) {
                        if (y[i * m_ + k]) ++counts[term.codes[i]];
                    }
                    for (const auto& [code, c] : counts) value += static_cast<double>(c * (c - 1) / 2);
                }
            } else {
                for (std::size_t k = 0; k < m_; ++k) {
                    for (std::size_t i = 0; i < n_; ++i) {
                        if (!y[i * m_ + k]) continue;
                        for (std::size_t j = i + 1; j < n_; ++j) {
                            if (y[j * m_ + k] && matches(term, i, j)) value += 1.0;
                        }
                    }
                }
            }
            break;
        }
        s[static_cast<Eigen::Index>(t)] = value;
    }
    return s;
}

StatisticVector BoundModel::evaluate(const BipartiteGraph& graph) const {
    if (graph.first_size() != n_ || graph.second_size() != m_) {
        throw ValidationError("graph shape does not match the bound model");
    }
    return evaluate(graph.adjacency());
}

void BoundModel::change(std::span<const std::uint8_t> y, std::size_t i, std::size_t k,
                        double* out) const {
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        const Compiled& term = terms_[t];
        switch (term.kind) {
        case TermKind::edges: out[t] = 1.0; break;
        case TermKind::node_activity:
            out[t] = (term.side == Side::first ? i : k) == term.node ? 1.0 : 0.0;
            break;
        case TermKind::factor_second: out[t] = term.codes[k] == term.level ? 1.0 : 0.0; break;
        case TermKind::factor_first: out[t] = term.codes[i] == term.level ? 1.0 : 0.0; break;
        case TermKind::node_match: {
            double count = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
                if (j != i && y[j * m_ + k] && matches(term, i, j)) count += 1.0;
            }
            out[t] = count;
            break;
        }
        }
    }
}

StatisticVector BoundModel::change(std::span<const std::uint8_t> y, Dyad dyad) const {
    if (dyad.first >= n_ || dyad.second >= m_) {
        throw ValidationError("dyad (" + std::to_string(dyad.first) + ", " +
                              std::to_string(dyad.second) + ") out of range");
    }
    if (y.size() != n_ * m_) throw ValidationError("adjacency size does not match the bound model");
    StatisticVector out(static_cast<Eigen::Index>(terms_.size()));
    change(y, dyad.first, dyad.second, out.data());
    return out;
}

StatisticVector evaluate(const ModelSpec& spec, const BipartiteGraph& graph, const AttributeTable& attrs) {
    return BoundModel(spec, graph, attrs).evaluate(graph);
}

StatisticVector change_statistics(const ModelSpec& spec, const BipartiteGraph& graph,
                                  const AttributeTable& attrs, Dyad dyad) {
    return BoundModel(spec, graph, attrs).change(graph.adjacency(), dyad);
}

} // namespace bergm
