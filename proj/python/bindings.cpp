// Python module: JSON documents in and out, statistics as NumPy arrays.

#include "bergm/cli.hpp"
#include "bergm/descriptives.hpp"
#include "bergm/error.hpp"
#include "bergm/estimation.hpp"
#include "bergm/gof.hpp"
#include "bergm/ingestion.hpp"
#include "bergm/io.hpp"
#include "bergm/sampler.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

namespace py = pybind11;
using namespace bergm;
using io::Json;

namespace {

SamplerConfig sampler_from(const std::string& text) {
    const Json j = text.empty() ? Json::object() : Json::parse(text);
    SamplerConfig c;
    if (j.contains("proposal")) c.proposal = proposal_from_string(j.at("proposal").get<std::string>());
    if (j.contains("burn_in") && !j.at("burn_in").is_null()) c.burn_in = j.at("burn_in").get<std::size_t>();
    if (j.contains("interval") && !j.at("interval").is_null()) c.interval = j.at("interval").get<std::size_t>();
    if (j.contains("sample_count")) c.sample_count = j.at("sample_count").get<std::size_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("chains")) c.chains = j.at("chains").get<std::size_t>();
    c.validate();
    return c;
}

std::string fit(const std::string& network, const std::string& model, const std::string& method,
                const std::string& sampler, std::size_t max_iterations, bool inflate_se) {
    const io::NetworkFile net = io::network_from_json(Json::parse(network));
    const ModelSpec spec = io::model_from_json(Json::parse(model));
    Json run;
    run["method"] = method;
    FitResult result;
    switch (fit_method_from_string(method)) {
    case FitMethod::mple: result = fit_mple(spec, net.graph, net.attributes); break;
    case FitMethod::exact: result = fit_exact(spec, net.graph, net.attributes); break;
    case FitMethod::mcmle: {
        McmleOptions options;
        options.sampler = sampler_from(sampler);
        options.max_iterations = max_iterations;
        options.inflate_se = inflate_se;
        run["seed"] = options.sampler.seed;
        result = fit_mcmle(spec, net.graph, net.attributes, options);
        break;
    }
    }
    return io::dump(io::fit_to_json(result, spec, run));
}

std::string goodness_of_fit(const std::string& network, const std::string& fit_json, const std::string& sampler,
                            bool pinv, bool degree_gof) {
    const io::NetworkFile net = io::network_from_json(Json::parse(network));
    const io::FitFile fitted = io::fit_from_json(Json::parse(fit_json));
    GofOptions options;
    options.allow_pseudo_inverse = pinv;
    options.degree_distribution = degree_gof;
    const SamplerConfig config = sampler_from(sampler);
    Json run;
    run["seed"] = config.seed;
    return io::dump(io::gof_to_json(gof(fitted.spec, net.graph, net.attributes, fitted.fit, config, options), run));
}

py::tuple simulate_statistics(const std::string& network, const std::string& model,
                              const std::vector<double>& theta, const std::string& sampler) {
    const io::NetworkFile net = io::network_from_json(Json::parse(network));
    const ModelSpec spec = io::model_from_json(Json::parse(model));
    const BoundModel bound(spec, net.graph, net.attributes);
    const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
    Eigen::MatrixXd stats = simulate(bound, t, net.graph, sampler_from(sampler)).statistics;
    return py::make_tuple(bound.names(), std::move(stats));
}

std::string describe(const std::string& network, const std::vector<std::string>& metrics,
                     const std::string& importance, const std::optional<std::vector<std::string>>& by,
                     const std::string& rank) {
    const io::NetworkFile net = io::network_from_json(Json::parse(network));
    const bool has_importance = !importance.empty() && net.attributes.find(importance) != nullptr;
    const RankMethod method = rank == "dense" ? RankMethod::dense : RankMethod::competition;
    Json report;
    report["ranking"] = io::ranking_to_json(ranking_table(
        net.graph, net.attributes, has_importance ? std::string_view(importance) : std::string_view(), method));
    report["correlations"] = has_importance ? io::correlations_to_json(correlation_report(
                                                  net.graph, net.attributes, metrics, importance))
                                            : Json(nullptr);
    std::vector<std::string> groups;
    if (by) {
        groups = *by;
    } else {
        for (const auto& attr : net.attributes.attributes()) {
            if (attr.side == Side::second && attr.kind == AttributeKind::categorical) groups.push_back(attr.name);
        }
    }
    report["subgraphs"] = io::subgraphs_to_json(subgraph_summary(net.graph, net.attributes, groups));
    return io::dump(report);
}

std::string build(const std::string& corpus_dir, const std::string& dictionary,
                  const std::vector<std::string>& attribute_csvs) {
    const Corpus corpus = load_corpus(corpus_dir);
    const BuildResult built = build_network(corpus, io::dictionary_from_json(Json::parse(dictionary)));
    std::vector<AttributeRecord> records;
    for (const auto& text : attribute_csvs) {
        auto more = io::parse_attribute_csv(text);
        records.insert(records.end(), more.begin(), more.end());
    }
    const AttributeTable attrs = attach_attributes(built.graph, records);
    Json metadata;
    metadata["tool"] = io::tool_info();
    metadata["skipped_documents"] = corpus.skipped();
    return io::dump(io::network_to_json(built.graph, attrs, metadata));
}

std::vector<double> change(const std::string& network, const std::string& model, const std::string& first,
                           const std::string& second) {
    const io::NetworkFile net = io::network_from_json(Json::parse(network));
    const ModelSpec spec = io::model_from_json(Json::parse(model));
    const Dyad d{net.graph.index_of(Side::first, first), net.graph.index_of(Side::second, second)};
    const StatisticVector delta = change_statistics(spec, net.graph, net.attributes, d);
    return {delta.data(), delta.data() + delta.size()};
}

py::tuple run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
}

} // namespace

PYBIND11_MODULE(_bergm, m) {
    m.doc() = "Bipartite exponential random graph models";
    m.attr("__version__") = std::string(tool_version);

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    // Malformed JSON documents are input errors too.
    py::register_local_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Json::exception& e) {
            py::set_error(py::module_::import("bergm._bergm").attr("ValidationError"), e.what());
        }
    });

    m.def("fit", &fit, py::arg("network"), py::arg("model"), py::arg("method"), py::arg("sampler"),
          py::arg("max_iterations"), py::arg("inflate_se"));
    m.def("gof", &goodness_of_fit, py::arg("network"), py::arg("fit"), py::arg("sampler"), py::arg("pinv"),
          py::arg("degree_gof"));
    m.def("simulate", &simulate_statistics, py::arg("network"), py::arg("model"), py::arg("theta"),
          py::arg("sampler"));
    m.def("describe", &describe, py::arg("network"), py::arg("metrics"), py::arg("importance"), py::arg("by"),
          py::arg("rank"));
    m.def("build", &build, py::arg("corpus"), py::arg("dictionary"), py::arg("attribute_csvs"));
    m.def("change_statistics", &change, py::arg("network"), py::arg("model"), py::arg("first"), py::arg("second"));
    m.def("run_cli", &run_cli, py::arg("args"));
}
