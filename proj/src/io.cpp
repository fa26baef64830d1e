#include "bergm/io.hpp"

#include "bergm/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace bergm::io {

Json tool_info() {
    Json info;
    info["name"] = tool_name;
    info["version"] = tool_version;
    return info;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read '" + path.string() + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ValidationError("failed writing '" + path.string() + "'");
}

Json read_json(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

std::string dump(const Json& json) {
    return json.dump(2, ' ', false, Json::error_handler_t::strict) + "\n";
}

namespace {

// Schema helpers: every failure names the JSON path.

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ValidationError(path + ": " + message);
}

void only_keys(const Json& object, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!object.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : object.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) fail(path + "." + key, "unknown field");
    }
}

const Json& field(const Json& object, const std::string& path, std::string_view key) {
    const auto it = object.find(std::string(key));
    if (it == object.end()) fail(path + "." + std::string(key), "missing required field");
    return *it;
}

std::string string_at(const Json& value, const std::string& path) {
    if (!value.is_string()) fail(path, "expected a string");
    return value.get<std::string>();
}

double number_at(const Json& value, const std::string& path) {
    if (value.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!value.is_number()) fail(path, "expected a number");
    return value.get<double>();
}

std::vector<std::string> string_array(const Json& value, const std::string& path) {
    if (!value.is_array()) fail(path, "expected an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        out.push_back(string_at(value[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Eigen::VectorXd vector_from(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json number_or_null(double value) {
    if (std::isfinite(value)) return value;
    return nullptr;
}

/// Column-aligned text; the first column left-aligned, the rest right-aligned.
std::string align(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            const std::string pad(width[c] - row[c].size(), ' ');
            if (c == 0) {
                line += row[c] + pad;
            } else {
                line += "  " + pad + row[c];
            }
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

} // namespace

// Network file ---------------------------------------------------------------

Json network_to_json(const BipartiteGraph& graph, const AttributeTable& attrs, const Json& metadata) {
    Json out;
    out["partitions"]["first"] = graph.labels(Side::first);
    out["partitions"]["second"] = graph.labels(Side::second);
    Json edges = Json::array();
    for (const Dyad& d : graph.edges()) {
        edges.push_back({graph.label(Side::first, d.first), graph.label(Side::second, d.second)});
    }
    out["edges"] = std::move(edges);
    Json attributes = Json::object();
    for (Side side : {Side::first, Side::second}) {
        Json block = Json::object();
        for (const Attribute& attr : attrs.attributes()) {
            if (attr.side != side) continue;
            Json entry;
            entry["kind"] = to_string(attr.kind);
            if (attr.kind == AttributeKind::categorical) entry["levels"] = attr.level_set;
            Json values = Json::object();
            for (std::size_t node = 0; node < attrs.partition_size(side); ++node) {
                const std::string& label = graph.label(side, node);
                if (attr.kind == AttributeKind::quantitative) {
                    values[label] = attr.numbers[node] ? Json(*attr.numbers[node]) : Json(nullptr);
                } else {
                    values[label] = attr.levels[node] ? Json(*attr.levels[node]) : Json(nullptr);
                }
            }
            entry["values"] = std::move(values);
            block[attr.name] = std::move(entry);
        }
        if (!block.empty()) attributes[std::string(to_string(side))] = std::move(block);
    }
    out["attributes"] = std::move(attributes);
    if (!metadata.is_null()) out["metadata"] = metadata;
    return out;
}

NetworkFile network_from_json(const Json& json) {
    const std::string root = "$";
    only_keys(json, root, {"partitions", "edges", "attributes", "metadata"});
    const Json& partitions = field(json, root, "partitions");
    only_keys(partitions, "$.partitions", {"first", "second"});
    auto first = string_array(field(partitions, "$.partitions", "first"), "$.partitions.first");
    auto second = string_array(field(partitions, "$.partitions", "second"), "$.partitions.second");

    const Json& edges_json = field(json, root, "edges");
    if (!edges_json.is_array()) fail("$.edges", "expected an array");
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t e = 0; e < edges_json.size(); ++e) {
        const std::string path = "$.edges[" + std::to_string(e) + "]";
        const Json& pair = edges_json[e];
        if (!pair.is_array() || pair.size() != 2) fail(path, "expected a [first-label, second-label] pair");
        edges.emplace_back(string_at(pair[0], path + "[0]"), string_at(pair[1], path + "[1]"));
    }

    NetworkFile file;
    file.graph = BipartiteGraph::from_labelled_edges(std::move(first), std::move(second), edges);
    file.attributes = AttributeTable(file.graph);
    if (const auto it = json.find("attributes"); it != json.end()) {
        only_keys(*it, "$.attributes", {"first", "second"});
        for (const auto& [side_name, block] : it->items()) {
            const Side side = side_from_string(side_name);
            const std::string side_path = "$.attributes." + side_name;
            if (!block.is_object()) fail(side_path, "expected an object");
            for (const auto& [name, entry] : block.items()) {
                const std::string path = side_path + "." + name;
                only_keys(entry, path, {"kind", "levels", "values"});
                const std::string kind_text = string_at(field(entry, path, "kind"), path + ".kind");
                AttributeKind kind;
                if (kind_text == "quantitative") {
                    kind = AttributeKind::quantitative;
                } else if (kind_text == "categorical") {
                    kind = AttributeKind::categorical;
                } else {
                    fail(path + ".kind", "expected 'quantitative' or 'categorical'");
                }
                const Json& values = field(entry, path, "values");
                if (!values.is_object()) fail(path + ".values", "expected an object keyed by node label");
                const std::size_t size = file.graph.size(side);
                if (kind == AttributeKind::quantitative) {
                    if (entry.contains("levels")) fail(path + ".levels", "only categorical attributes have levels");
                    std::vector<std::optional<double>> numbers(size);
                    for (const auto& [label, value] : values.items()) {
                        const auto node = file.graph.find(side, label);
                        if (!node) fail(path + ".values." + label, "unknown node label");
                        if (value.is_null()) continue;
                        if (!value.is_number()) fail(path + ".values." + label, "type mismatch: expected a number");
                        numbers[*node] = value.get<double>();
                    }
                    file.attributes.add_quantitative(name, side, std::move(numbers));
                } else {
                    std::vector<std::optional<std::string>> levels(size);
                    for (const auto& [label, value] : values.items()) {
                        const auto node = file.graph.find(side, label);
                        if (!node) fail(path + ".values." + label, "unknown node label");
                        if (value.is_null()) continue;
                        if (!value.is_string()) fail(path + ".values." + label, "type mismatch: expected a string");
                        levels[*node] = value.get<std::string>();
                    }
                    std::vector<std::string> level_set;
                    if (const auto lv = entry.find("levels"); lv != entry.end()) {
                        level_set = string_array(*lv, path + ".levels");
                    }
                    file.attributes.add_categorical(name, side, std::move(levels), std::move(level_set));
                }
            }
        }
    }
    if (const auto it = json.find("metadata"); it != json.end()) file.metadata = *it;
    return file;
}

NetworkFile read_network(const std::filesystem::path& path) {
    return network_from_json(read_json(path));
}

// Model file -----------------------------------------------------------------

Json model_to_json(const ModelSpec& spec) {
    Json out = Json::array();
    for (const Term& term : spec.terms()) {
        Json entry;
        entry["kind"] = to_string(term.kind);
        Json params = Json::object();
        switch (term.kind) {
        case TermKind::edges: break;
        case TermKind::node_activity:
            params["partition"] = to_string(term.side);
            params["node"] = term.node;
            break;
        case TermKind::node_match:
            params["attribute"] = term.attribute;
            if (term.tolerance != 0.0) params["tolerance"] = term.tolerance;
            break;
        case TermKind::factor_second:
        case TermKind::factor_first:
            params["attribute"] = term.attribute;
            params["level"] = term.level;
            break;
        }
        entry["params"] = std::move(params);
        if (!term.name.empty()) entry["name"] = term.name;
        out.push_back(std::move(entry));
    }
    return out;
}

ModelSpec model_from_json(const Json& json) {
    if (!json.is_array()) fail("$", "model must be an array of terms");
    std::vector<Term> terms;
    for (std::size_t t = 0; t < json.size(); ++t) {
        const std::string path = "$[" + std::to_string(t) + "]";
        const Json& entry = json[t];
        only_keys(entry, path, {"kind", "params", "name"});
        const TermKind kind = term_kind_from_string(string_at(field(entry, path, "kind"), path + ".kind"));
        const Json params = entry.contains("params") ? entry.at("params") : Json::object();
        const std::string ppath = path + ".params";
        Term term;
        switch (kind) {
        case TermKind::edges:
            only_keys(params, ppath, {});
            term = Term::edges();
            break;
        case TermKind::node_activity: {
            only_keys(params, ppath, {"partition", "node"});
            const Side side = params.contains("partition")
                                  ? side_from_string(string_at(params.at("partition"), ppath + ".partition"))
                                  : Side::first;
            term = Term::node_activity(side, string_at(field(params, ppath, "node"), ppath + ".node"));
            break;
        }
        case TermKind::node_match: {
            only_keys(params, ppath, {"attribute", "tolerance"});
            const double tolerance =
                params.contains("tolerance") ? number_at(params.at("tolerance"), ppath + ".tolerance") : 0.0;
            term = Term::node_match(string_at(field(params, ppath, "attribute"), ppath + ".attribute"), tolerance);
            break;
        }
        case TermKind::factor_second:
        case TermKind::factor_first: {
            only_keys(params, ppath, {"attribute", "level"});
            auto attribute = string_at(field(params, ppath, "attribute"), ppath + ".attribute");
            auto level = string_at(field(params, ppath, "level"), ppath + ".level");
            term = kind == TermKind::factor_second ? Term::factor_second(std::move(attribute), std::move(level))
                                                   : Term::factor_first(std::move(attribute), std::move(level));
            break;
        }
        }
        if (entry.contains("name")) term.name = string_at(entry.at("name"), path + ".name");
        terms.push_back(std::move(term));
    }
    return ModelSpec(std::move(terms));
}

ModelSpec read_model(const std::filesystem::path& path) {
    return model_from_json(read_json(path));
}

// Dictionary and attributes ---------------------------------------------------

SkillDictionary dictionary_from_json(const Json& json) {
    if (!json.is_object()) fail("$", "dictionary must be an object of skill -> [patterns]");
    SkillDictionary dictionary;
    for (const auto& [skill, patterns] : json.items()) {
        dictionary.add(skill, string_array(patterns, "$." + skill));
    }
    return dictionary;
}

SkillDictionary read_dictionary(const std::filesystem::path& path) {
    return dictionary_from_json(read_json(path));
}

namespace {

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(cell));
            cell.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !cell.empty()) {
                row.push_back(std::move(cell));
                rows.push_back(std::move(row));
            }
            row.clear();
            cell.clear();
            any = false;
        } else {
            cell += c;
            any = true;
        }
    }
    if (quoted) throw ValidationError("attributes CSV: unterminated quoted field");
    if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::vector<AttributeRecord> parse_attribute_csv(std::string_view text) {
    auto rows = parse_csv(text);
    std::vector<AttributeRecord> records;
    std::size_t start = 0;
    if (!rows.empty() && rows[0].size() >= 3 && rows[0][0] == "label" && rows[0][1] == "attr" &&
        rows[0][2] == "value") {
        start = 1;
    }
    for (std::size_t r = start; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 3 && row.size() != 4) {
            throw ValidationError("attributes CSV line " + std::to_string(r + 1) +
                                  ": expected label,attr,value[,partition]");
        }
        AttributeRecord record{row[0], row[1], row[2], std::nullopt};
        if (row.size() == 4 && !row[3].empty()) record.side = side_from_string(row[3]);
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<AttributeRecord> read_attribute_csv(const std::filesystem::path& path) {
    return parse_attribute_csv(read_text(path));
}

// Fit and gof reports ----------------------------------------------------------

Json fit_to_json(const FitResult& fit, const ModelSpec& spec, const Json& run) {
    Json out;
    out["tool"] = tool_info();
    if (!run.is_null()) out["run"] = run;
    out["method"] = to_string(fit.method);
    out["model"] = model_to_json(spec);
    Json terms = Json::array();
    for (std::size_t j = 0; j < fit.size(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        Json t;
        t["name"] = fit.names[j];
        t["estimate"] = number_or_null(fit.theta[i]);
        t["std_error"] = number_or_null(fit.std_errors[i]);
        t["z"] = number_or_null(fit.z_values[i]);
        t["p"] = number_or_null(fit.p_values[i]);
        t["stars"] = significance_stars(fit.p_values[i]);
        terms.push_back(std::move(t));
    }
    out["terms"] = std::move(terms);
    out["log_likelihood"] = number_or_null(fit.log_likelihood);
    out["log_likelihood_kind"] = to_string(fit.likelihood_kind);
    out["aic"] = number_or_null(fit.aic);
    out["bic"] = number_or_null(fit.bic);
    out["dyad_count"] = fit.dyad_count;
    Json conv;
    conv["converged"] = fit.convergence.converged;
    conv["iterations"] = fit.convergence.iterations;
    conv["gradient_norm"] = number_or_null(fit.convergence.gradient_norm);
    Json trajectory = Json::array();
    for (const auto& theta : fit.convergence.trajectory) {
        trajectory.push_back(std::vector<double>(theta.data(), theta.data() + theta.size()));
    }
    conv["trajectory"] = std::move(trajectory);
    out["convergence"] = std::move(conv);
    return out;
}

FitFile fit_from_json(const Json& json) {
    only_keys(json, "$", {"tool", "run", "method", "model", "terms", "log_likelihood", "log_likelihood_kind",
                          "aic", "bic", "dyad_count", "convergence"});
    FitFile file;
    file.spec = model_from_json(field(json, "$", "model"));
    if (json.contains("run")) file.run = json.at("run");
    FitResult& fit = file.fit;
    fit.method = fit_method_from_string(string_at(field(json, "$", "method"), "$.method"));
    const Json& terms = field(json, "$", "terms");
    if (!terms.is_array()) fail("$.terms", "expected an array");
    if (terms.size() != file.spec.size()) fail("$.terms", "term count differs from the model");
    std::vector<double> theta, se, z, p;
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const std::string path = "$.terms[" + std::to_string(j) + "]";
        only_keys(terms[j], path, {"name", "estimate", "std_error", "z", "p", "stars"});
        fit.names.push_back(string_at(field(terms[j], path, "name"), path + ".name"));
        theta.push_back(number_at(field(terms[j], path, "estimate"), path + ".estimate"));
        se.push_back(number_at(field(terms[j], path, "std_error"), path + ".std_error"));
        z.push_back(number_at(field(terms[j], path, "z"), path + ".z"));
        p.push_back(number_at(field(terms[j], path, "p"), path + ".p"));
    }
    if (fit.names != file.spec.names()) fail("$.terms", "term names differ from the model");
    fit.theta = vector_from(theta);
    fit.std_errors = vector_from(se);
    fit.z_values = vector_from(z);
    fit.p_values = vector_from(p);
    fit.log_likelihood = number_at(field(json, "$", "log_likelihood"), "$.log_likelihood");
    const std::string kind = string_at(field(json, "$", "log_likelihood_kind"), "$.log_likelihood_kind");
    if (kind == "exact") {
        fit.likelihood_kind = LikelihoodKind::exact;
    } else if (kind == "pseudo") {
        fit.likelihood_kind = LikelihoodKind::pseudo;
    } else if (kind == "bridge") {
        fit.likelihood_kind = LikelihoodKind::bridge;
    } else {
        fail("$.log_likelihood_kind", "unknown kind '" + kind + "'");
    }
    fit.aic = number_at(field(json, "$", "aic"), "$.aic");
    fit.bic = number_at(field(json, "$", "bic"), "$.bic");
    const Json& dyads = field(json, "$", "dyad_count");
    if (!dyads.is_number_unsigned()) fail("$.dyad_count", "expected a nonnegative integer");
    fit.dyad_count = dyads.get<std::size_t>();
    const Json& conv = field(json, "$", "convergence");
    only_keys(conv, "$.convergence", {"converged", "iterations", "gradient_norm", "trajectory"});
    const Json& converged = field(conv, "$.convergence", "converged");
    if (!converged.is_boolean()) fail("$.convergence.converged", "expected a boolean");
    fit.convergence.converged = converged.get<bool>();
    const Json& iterations = field(conv, "$.convergence", "iterations");
    if (!iterations.is_number_unsigned()) fail("$.convergence.iterations", "expected a nonnegative integer");
    fit.convergence.iterations = iterations.get<std::size_t>();
    fit.convergence.gradient_norm = number_at(field(conv, "$.convergence", "gradient_norm"),
                                              "$.convergence.gradient_norm");
    if (conv.contains("trajectory")) {
        const Json& trajectory = conv.at("trajectory");
        if (!trajectory.is_array()) fail("$.convergence.trajectory", "expected an array");
        for (std::size_t t = 0; t < trajectory.size(); ++t) {
            const std::string path = "$.convergence.trajectory[" + std::to_string(t) + "]";
            if (!trajectory[t].is_array()) fail(path, "expected an array");
            std::vector<double> values;
            for (std::size_t j = 0; j < trajectory[t].size(); ++j) {
                values.push_back(number_at(trajectory[t][j], path + "[" + std::to_string(j) + "]"));
            }
            fit.convergence.trajectory.push_back(vector_from(values));
        }
    }
    return file;
}

FitFile read_fit(const std::filesystem::path& path) {
    return fit_from_json(read_json(path));
}

std::string render_fit(const FitResult& fit) {
    std::vector<std::vector<std::string>> rows{{"Term", "Estimate", "Std.Err", "z", "p", ""}};
    for (std::size_t j = 0; j < fit.size(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        rows.push_back({fit.names[j], format_number(fit.theta[i]), format_number(fit.std_errors[i]),
                        format_number(fit.z_values[i]), format_number(fit.p_values[i]),
                        significance_stars(fit.p_values[i])});
    }
    std::string out = "Method: " + std::string(to_string(fit.method)) + "\n\n" + align(rows) + "\n";
    out += align({{"Log-likelihood", format_number(fit.log_likelihood) + " (" +
                                         std::string(to_string(fit.likelihood_kind)) + ")"},
                  {"AIC", format_number(fit.aic)},
                  {"BIC", format_number(fit.bic)}});
    out += "Convergence: " + std::string(fit.convergence.converged ? "converged" : "not converged") +
           " after " + std::to_string(fit.convergence.iterations) + " iterations, final gradient norm " +
           format_number(fit.convergence.gradient_norm) + "\n";
    out += "Signif. codes: *** p < 0.001, ** p < 0.01, * p < 0.05, . p < 0.1\n";
    return out;
}

Json gof_to_json(const GofReport& report, const Json& run) {
    Json out;
    out["tool"] = tool_info();
    if (!run.is_null()) out["run"] = run;
    out["sample_count"] = report.sample_count;
    out["seed"] = report.seed;
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        Json r;
        r["name"] = row.name;
        r["observed"] = row.observed;
        r["min"] = row.sim_min;
        r["mean"] = row.sim_mean;
        r["max"] = row.sim_max;
        r["p"] = row.p;
        rows.push_back(std::move(r));
    }
    out["statistics"] = std::move(rows);
    out["mahalanobis"] = number_or_null(report.mahalanobis);
    out["mahalanobis_squared"] = number_or_null(report.mahalanobis_squared);
    out["pseudo_inverse"] = report.pseudo_inverse;
    out["warnings"] = report.warnings;
    if (!report.degree_rows.empty()) {
        Json degrees = Json::array();
        for (const auto& row : report.degree_rows) {
            Json r;
            r["partition"] = to_string(row.side);
            r["degree"] = row.degree;
            r["observed"] = row.observed;
            r["min"] = row.sim_min;
            r["mean"] = row.sim_mean;
            r["max"] = row.sim_max;
            r["p"] = row.p;
            degrees.push_back(std::move(r));
        }
        out["degree_distribution"] = std::move(degrees);
    }
    return out;
}

std::string render_gof(const GofReport& report) {
    std::vector<std::vector<std::string>> rows{{"Statistic", "Obs", "Min", "Mean", "Max", "p"}};
    for (const auto& row : report.rows) {
        rows.push_back({row.name, format_number(row.observed), format_number(row.sim_min),
                        format_number(row.sim_mean), format_number(row.sim_max), format_number(row.p)});
    }
    std::string out = "Goodness of fit over " + std::to_string(report.sample_count) +
                      " simulated networks (seed " + std::to_string(report.seed) + ")\n\n" + align(rows) + "\n";
    out += "Mahalanobis distance: " + format_number(report.mahalanobis) + " (squared " +
           format_number(report.mahalanobis_squared) + ")\n";
    for (const auto& w : report.warnings) out += "Warning: " + w + "\n";
    if (!report.degree_rows.empty()) {
        std::vector<std::vector<std::string>> deg{{"Partition", "Degree", "Obs", "Min", "Mean", "Max", "p"}};
        for (const auto& row : report.degree_rows) {
            deg.push_back({std::string(to_string(row.side)), std::to_string(row.degree), format_number(row.observed),
                           format_number(row.sim_min), format_number(row.sim_mean), format_number(row.sim_max),
                           format_number(row.p)});
        }
        out += "\nDegree distribution (auxiliary)\n\n" + align(deg);
    }
    return out;
}

std::string statistics_tsv(std::span<const std::string> names, const Eigen::MatrixXd& statistics) {
    std::string out;
    for (std::size_t j = 0; j < names.size(); ++j) out += (j ? "\t" : "") + names[j];
    out += "\n";
    char buf[64];
    for (Eigen::Index r = 0; r < statistics.rows(); ++r) {
        for (Eigen::Index c = 0; c < statistics.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", statistics(r, c));
            out += (c ? "\t" : "");
            out += buf;
        }
        out += "\n";
    }
    return out;
}

// Descriptives -----------------------------------------------------------------

Json ranking_to_json(const RankingTable& table) {
    Json rows = Json::array();
    for (const auto& row : table.rows) {
        Json r;
        r["skill"] = row.skill;
        r["importance"] = row.importance ? Json(*row.importance) : Json(nullptr);
        r["importance_rank"] = row.importance_rank ? Json(*row.importance_rank) : Json(nullptr);
        r["centrality_rank"] = row.centrality_rank;
        r["degree"] = row.degree;
        r["percent"] = row.percent;
        rows.push_back(std::move(r));
    }
    Json out;
    out["rows"] = std::move(rows);
    out["total_degree"] = table.total_degree;
    out["total_percent"] = table.total_percent;
    return out;
}

std::string render_ranking(const RankingTable& table) {
    std::vector<std::vector<std::string>> rows{{"Skill", "Importance rank", "Centrality rank", "Degree", "Perc"}};
    char buf[32];
    for (const auto& row : table.rows) {
        std::snprintf(buf, sizeof buf, "%.2f %%", row.percent);
        rows.push_back({row.skill, row.importance_rank ? std::to_string(*row.importance_rank) : "",
                        std::to_string(row.centrality_rank), std::to_string(row.degree), buf});
    }
    std::snprintf(buf, sizeof buf, "%.2f %%", table.total_percent);
    rows.push_back({"Total of connections", "", "", std::to_string(table.total_degree), buf});
    return align(rows);
}

Json correlations_to_json(const CorrelationReport& report) {
    Json out;
    out["variables"] = report.variables;
    Json values = Json::object();
    for (std::size_t a = 0; a < report.variables.size(); ++a) values[report.variables[a]] = report.values[a];
    out["values"] = std::move(values);
    Json pairs = Json::array();
    for (std::size_t a = 0; a < report.variables.size(); ++a) {
        for (std::size_t b = a + 1; b < report.variables.size(); ++b) {
            const Correlation& c = report.matrix[a][b];
            Json p;
            p["x"] = report.variables[a];
            p["y"] = report.variables[b];
            p["pearson"] = number_or_null(c.pearson);
            p["pearson_p"] = number_or_null(c.pearson_p);
            p["spearman"] = number_or_null(c.spearman);
            p["spearman_p"] = number_or_null(c.spearman_p);
            pairs.push_back(std::move(p));
        }
    }
    out["pairs"] = std::move(pairs);
    out["undefined"] = report.undefined;
    return out;
}

std::string render_correlations(const CorrelationReport& report) {
    std::vector<std::vector<std::string>> rows{{"X", "Y", "Pearson r", "p", "Spearman rho", "p"}};
    for (std::size_t a = 0; a < report.variables.size(); ++a) {
        for (std::size_t b = a + 1; b < report.variables.size(); ++b) {
            const Correlation& c = report.matrix[a][b];
            rows.push_back({report.variables[a], report.variables[b], format_number(c.pearson),
                            format_number(c.pearson_p), format_number(c.spearman), format_number(c.spearman_p)});
        }
    }
    std::string out = align(rows);
    for (const auto& name : report.undefined) out += "Warning: '" + name + "' has zero variance; correlations undefined\n";
    return out;
}

Json subgraphs_to_json(const std::vector<SubgraphRow>& rows) {
    Json out = Json::array();
    for (const auto& row : rows) {
        Json r;
        r["attribute"] = row.attribute.empty() ? Json(nullptr) : Json(row.attribute);
        r["level"] = row.attribute.empty() ? Json("entire network") : Json(row.level);
        r["second_count"] = row.second_count;
        r["edges"] = row.edges;
        r["first_mean"] = number_or_null(row.first_mean);
        r["first_sd"] = number_or_null(row.first_sd);
        r["second_mean"] = number_or_null(row.second_mean);
        r["second_sd"] = number_or_null(row.second_sd);
        r["empty"] = row.empty;
        out.push_back(std::move(r));
    }
    return out;
}

std::string render_subgraphs(const std::vector<SubgraphRow>& rows) {
    std::vector<std::vector<std::string>> table{
        {"Sub-graph", "Size", "First mean", "First SD", "Second mean", "Second SD"}};
    char buf[4][32];
    for (const auto& row : rows) {
        const double values[4] = {row.first_mean, row.first_sd, row.second_mean, row.second_sd};
        for (int c = 0; c < 4; ++c) {
            if (std::isnan(values[c])) {
                std::snprintf(buf[c], sizeof buf[c], "NA");
            } else {
                std::snprintf(buf[c], sizeof buf[c], "%.2f", values[c]);
            }
        }
        std::string name = row.attribute.empty() ? "Entire network" : row.level;
        if (row.empty) name += " (empty)";
        table.push_back({name, std::to_string(row.second_count), buf[0], buf[1], buf[2], buf[3]});
    }
    return align(table);
}

} // namespace bergm::io
