#include "bergm/graph.hpp"

#include "bergm/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace bergm {

std::string_view to_string(Side side) {
    return side == Side::first ? "first" : "second";
}

Side side_from_string(std::string_view text) {
    if (text == "first") return Side::first;
    if (text == "second") return Side::second;
    throw ValidationError("unknown partition '" + std::string(text) +
                          "' (expected 'first' or 'second')");
}

std::string_view to_string(AttributeKind kind) {
    return kind == AttributeKind::quantitative ? "quantitative" : "categorical";
}

namespace {

std::unordered_map<std::string, std::size_t> index_labels(const std::vector<std::string>& labels,
                                                          Side side) {
    std::unordered_map<std::string, std::size_t> index;
    index.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!index.emplace(labels[i], i).second) {
            throw ValidationError("duplicate node label '" + labels[i] + "' in " +
                                  std::string(to_string(side)) + " partition");
        }
    }
    return index;
}

} // namespace

BipartiteGraph::BipartiteGraph(std::vector<std::string> first_labels,
                               std::vector<std::string> second_labels,
                               std::span<const Dyad> edges)
    : first_labels_(std::move(first_labels)), second_labels_(std::move(second_labels)) {
    first_index_ = index_labels(first_labels_, Side::first);
    second_index_ = index_labels(second_labels_, Side::second);

    const std::size_t n = first_labels_.size();
    const std::size_t m = second_labels_.size();
    adjacency_.assign(n * m, 0);
    first_degrees_.assign(n, 0);
    second_degrees_.assign(m, 0);
    edges_.reserve(edges.size());
    for (const Dyad& d : edges) {
        if (d.first >= n || d.second >= m) {
            throw ValidationError("edge (" + std::to_string(d.first) + ", " +
                                  std::to_string(d.second) + ") outside a " + std::to_string(n) +
                                  " x " + std::to_string(m) + " graph");
        }
        auto& cell = adjacency_[d.first * m + d.second];
        if (cell != 0) {
            throw ValidationError("duplicate edge (" + first_labels_[d.first] + ", " +
                                  second_labels_[d.second] + ")");
        }
        cell = 1;
        ++first_degrees_[d.first];
        ++second_degrees_[d.second];
        edges_.push_back(d);
    }
    std::sort(edges_.begin(), edges_.end());
}

BipartiteGraph BipartiteGraph::from_labelled_edges(
    std::vector<std::string> first_labels, std::vector<std::string> second_labels,
    std::span<const std::pair<std::string, std::string>> edges) {
    // Index once up front so that label errors surface before edge errors.
    const auto first_index = index_labels(first_labels, Side::first);
    const auto second_index = index_labels(second_labels, Side::second);
    std::vector<Dyad> dyads;
    dyads.reserve(edges.size());
    for (const auto& [a, b] : edges) {
        const auto ia = first_index.find(a);
        if (ia == first_index.end()) {
            throw ValidationError("edge references unknown first-partition label '" + a + "'");
        }
        const auto ib = second_index.find(b);
        if (ib == second_index.end()) {
            throw ValidationError("edge references unknown second-partition label '" + b + "'");
        }
        dyads.push_back({ia->second, ib->second});
    }
    return BipartiteGraph(std::move(first_labels), std::move(second_labels), dyads);
}

BipartiteGraph BipartiteGraph::with_generated_labels(std::size_t n, std::size_t m,
                                                     std::span<const Dyad> edges) {
    std::vector<std::string> first(n), second(m);
    for (std::size_t i = 0; i < n; ++i) first[i] = "r" + std::to_string(i);
    for (std::size_t k = 0; k < m; ++k) second[k] = "c" + std::to_string(k);
    return BipartiteGraph(std::move(first), std::move(second), edges);
}

const std::string& BipartiteGraph::label(Side side, std::size_t node) const {
    const auto& all = labels(side);
    if (node >= all.size()) {
        throw ValidationError("node index " + std::to_string(node) + " out of range for " +
                              std::string(to_string(side)) + " partition of size " +
                              std::to_string(all.size()));
    }
    return all[node];
}

std::optional<std::size_t> BipartiteGraph::find(Side side, std::string_view label) const {
    const auto& index = side == Side::first ? first_index_ : second_index_;
    const auto it = index.find(std::string(label));
    if (it == index.end()) return std::nullopt;
    return it->second;
}

std::size_t BipartiteGraph::index_of(Side side, std::string_view label) const {
    if (auto found = find(side, label)) return *found;
    throw ValidationError("unknown " + std::string(to_string(side)) + "-partition label '" +
                          std::string(label) + "'");
}

bool BipartiteGraph::has_edge(std::size_t first, std::size_t second) const {
    if (first >= first_size() || second >= second_size()) {
        throw ValidationError("dyad (" + std::to_string(first) + ", " + std::to_string(second) +
                              ") out of range");
    }
    return adjacency_[first * second_size() + second] != 0;
}

std::size_t BipartiteGraph::degree(Side side, std::size_t node) const {
    const auto& all = degrees(side);
    if (node >= all.size()) {
        throw ValidationError("node index " + std::to_string(node) + " out of range for " +
                              std::string(to_string(side)) + " partition of size " +
                              std::to_string(all.size()));
    }
    return all[node];
}

bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.first_labels_ == b.first_labels_ && a.second_labels_ == b.second_labels_ &&
           a.adjacency_ == b.adjacency_;
}

// ---------------------------------------------------------------------------

bool Attribute::is_total() const {
    if (kind == AttributeKind::quantitative) {
        return std::all_of(numbers.begin(), numbers.end(), [](const auto& v) { return v.has_value(); });
    }
    return std::all_of(levels.begin(), levels.end(), [](const auto& v) { return v.has_value(); });
}

bool operator==(const Attribute& a, const Attribute& b) {
    if (a.name != b.name || a.side != b.side || a.kind != b.kind) return false;
    if (a.kind == AttributeKind::quantitative) return a.numbers == b.numbers;
    auto la = a.level_set, lb = b.level_set;
    std::sort(la.begin(), la.end());
    std::sort(lb.begin(), lb.end());
    return a.levels == b.levels && la == lb;
}

bool operator==(const AttributeTable& a, const AttributeTable& b) {
    if (a.first_size_ != b.first_size_ || a.second_size_ != b.second_size_ ||
        a.attributes_.size() != b.attributes_.size()) {
        return false;
    }
    for (const auto& attr : a.attributes_) {
        const Attribute* other = b.find(attr.name);
        if (other == nullptr || !(attr == *other)) return false;
    }
    return true;
}

Attribute& AttributeTable::declare(const std::string& name, Side side, AttributeKind kind) {
    for (auto& attr : attributes_) {
        if (attr.name != name) continue;
        if (attr.side != side) {
            throw ValidationError("attribute '" + name + "' is already defined on the " +
                                  std::string(to_string(attr.side)) + " partition");
        }
        if (attr.kind != kind) {
            throw ValidationError("attribute '" + name + "' is already " +
                                  std::string(to_string(attr.kind)) + "; cannot redeclare as " +
                                  std::string(to_string(kind)));
        }
        return attr;
    }
    Attribute attr;
    attr.name = name;
    attr.side = side;
    attr.kind = kind;
    const std::size_t size = partition_size(side);
    if (kind == AttributeKind::quantitative) {
        attr.numbers.assign(size, std::nullopt);
    } else {
        attr.levels.assign(size, std::nullopt);
    }
    attributes_.push_back(std::move(attr));
    return attributes_.back();
}

void AttributeTable::set_number(const std::string& name, Side side, std::size_t node, double value) {
    Attribute& attr = declare(name, side, AttributeKind::quantitative);
    if (node >= attr.numbers.size()) {
        throw ValidationError("attribute '" + name + "': node index out of range");
    }
    if (!std::isfinite(value)) {
        throw ValidationError("attribute '" + name + "': non-finite value");
    }
    attr.numbers[node] = value;
}

void AttributeTable::set_level(const std::string& name, Side side, std::size_t node, std::string value) {
    Attribute& attr = declare(name, side, AttributeKind::categorical);
    if (node >= attr.levels.size()) {
        throw ValidationError("attribute '" + name + "': node index out of range");
    }
    if (std::find(attr.level_set.begin(), attr.level_set.end(), value) == attr.level_set.end()) {
        attr.level_set.push_back(value);
    }
    attr.levels[node] = std::move(value);
}

void AttributeTable::add_quantitative(const std::string& name, Side side,
                                      std::vector<std::optional<double>> values) {
    if (find(name) != nullptr) throw ValidationError("attribute '" + name + "' defined twice");
    if (values.size() != partition_size(side)) {
        throw ValidationError("attribute '" + name + "' has " + std::to_string(values.size()) +
                              " values for a partition of size " +
                              std::to_string(partition_size(side)));
    }
    Attribute& attr = declare(name, side, AttributeKind::quantitative);
    for (const auto& v : values) {
        if (v && !std::isfinite(*v)) throw ValidationError("attribute '" + name + "': non-finite value");
    }
    attr.numbers = std::move(values);
}

void AttributeTable::add_categorical(const std::string& name, Side side,
                                     std::vector<std::optional<std::string>> values,
                                     std::vector<std::string> level_set) {
    if (find(name) != nullptr) throw ValidationError("attribute '" + name + "' defined twice");
    if (values.size() != partition_size(side)) {
        throw ValidationError("attribute '" + name + "' has " + std::to_string(values.size()) +
                              " values for a partition of size " +
                              std::to_string(partition_size(side)));
    }
    Attribute& attr = declare(name, side, AttributeKind::categorical);
    const bool declared = !level_set.empty();
    attr.level_set = std::move(level_set);
    for (const auto& v : values) {
        if (!v) continue;
        const bool known = std::find(attr.level_set.begin(), attr.level_set.end(), *v) !=
                           attr.level_set.end();
        if (known) continue;
        if (declared) {
            throw ValidationError("attribute '" + name + "': value '" + *v +
                                  "' is not among the declared levels");
        }
        attr.level_set.push_back(*v);
    }
    attr.levels = std::move(values);
}

const Attribute* AttributeTable::find(std::string_view name) const {
    for (const auto& attr : attributes_) {
        if (attr.name == name) return &attr;
    }
    return nullptr;
}

const Attribute& AttributeTable::get(std::string_view name) const {
    if (const Attribute* attr = find(name)) return *attr;
    throw ValidationError("unknown attribute '" + std::string(name) + "'");
}

Attribute& AttributeTable::mutable_get(std::string_view name) {
    for (auto& attr : attributes_) {
        if (attr.name == name) return attr;
    }
    throw ValidationError("unknown attribute '" + std::string(name) + "'");
}

void AttributeTable::require_total(std::string_view name, const BipartiteGraph& graph) const {
    const Attribute& attr = get(name);
    const std::size_t size = partition_size(attr.side);
    for (std::size_t node = 0; node < size; ++node) {
        if (!attr.has_value(node)) {
            throw ValidationError("attribute '" + attr.name + "' has no value for " +
                                  std::string(to_string(attr.side)) + "-partition node '" +
                                  graph.label(attr.side, node) + "'");
        }
    }
}

AttributeTable AttributeTable::restrict(Side side, std::span<const std::size_t> kept) const {
    AttributeTable out(side == Side::first ? kept.size() : first_size_,
                       side == Side::second ? kept.size() : second_size_);
    for (const auto& attr : attributes_) {
        Attribute copy = attr;
        if (attr.side == side) {
            if (attr.kind == AttributeKind::quantitative) {
                copy.numbers.clear();
                for (std::size_t node : kept) copy.numbers.push_back(attr.numbers.at(node));
            } else {
                copy.levels.clear();
                for (std::size_t node : kept) copy.levels.push_back(attr.levels.at(node));
            }
        }
        out.attributes_.push_back(std::move(copy));
    }
    return out;
}

// ---------------------------------------------------------------------------

std::size_t degree(const BipartiteGraph& graph, Side side, std::size_t node) {
    return graph.degree(side, node);
}

DegreeSummary degree_summary(const BipartiteGraph& graph, Side side) {
    const auto& degrees = graph.degrees(side);
    if (degrees.empty()) {
        throw ValidationError("degree summary of an empty " + std::string(to_string(side)) +
                              " partition");
    }
    DegreeSummary out;
    const double count = static_cast<double>(degrees.size());
    out.mean = static_cast<double>(graph.edge_count()) / count;
    double ss = 0.0;
    std::size_t max_degree = 0;
    for (std::size_t d : degrees) {
        const double dev = static_cast<double>(d) - out.mean;
        ss += dev * dev;
        max_degree = std::max(max_degree, d);
    }
    out.sd = degrees.size() > 1 ? std::sqrt(ss / (count - 1.0))
                                : std::numeric_limits<double>::quiet_NaN();
    out.histogram.assign(max_degree + 1, 0);
    for (std::size_t d : degrees) ++out.histogram[d];
    return out;
}

std::vector<std::size_t> select_second(const AttributeTable& attrs, std::string_view attribute,
                                       std::string_view level) {
    const Attribute& attr = attrs.get(attribute);
    if (attr.side != Side::second || attr.kind != AttributeKind::categorical) {
        throw ValidationError("attribute '" + attr.name +
                              "' is not categorical on the second partition");
    }
    if (std::find(attr.level_set.begin(), attr.level_set.end(), level) == attr.level_set.end()) {
        throw ValidationError("attribute '" + attr.name + "' has no level '" + std::string(level) + "'");
    }
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < attr.levels.size(); ++k) {
        if (attr.levels[k] && *attr.levels[k] == level) kept.push_back(k);
    }
    return kept;
}

BipartiteGraph restrict_second(const BipartiteGraph& graph, std::span<const std::size_t> kept) {
    std::vector<std::string> second;
    second.reserve(kept.size());
    std::vector<Dyad> edges;
    for (std::size_t newk = 0; newk < kept.size(); ++newk) {
        const std::size_t k = kept[newk];
        second.push_back(graph.label(Side::second, k));
        for (std::size_t i = 0; i < graph.first_size(); ++i) {
            if (graph.has_edge(i, k)) edges.push_back({i, newk});
        }
    }
    return BipartiteGraph(graph.labels(Side::first), std::move(second), edges);
}

BipartiteGraph induced_subgraph(const BipartiteGraph& graph, const AttributeTable& attrs,
                                std::string_view attribute, std::string_view level) {
    const auto kept = select_second(attrs, attribute, level);
    return restrict_second(graph, kept);
}

} // namespace bergm
