#include "bergm/cli.hpp"

#include "bergm/descriptives.hpp"
#include "bergm/error.hpp"
#include "bergm/estimation.hpp"
#include "bergm/gof.hpp"
#include "bergm/ingestion.hpp"
#include "bergm/io.hpp"
#include "bergm/sampler.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <vector>

namespace bergm::cli {

namespace {

using io::Json;
namespace fs = std::filesystem;

struct SamplerFlags {
    std::optional<std::size_t> burn_in;
    std::optional<std::size_t> interval;
    std::string proposal = "tnt";
    std::uint64_t seed = 0;
    std::size_t nsim = 1000;
    std::size_t chains = 1;
};

void add_sampler_flags(CLI::App* cmd, SamplerFlags& flags, const std::string& nsim_help) {
    cmd->add_option("--seed", flags.seed, "Random seed")->capture_default_str();
    cmd->add_option("--nsim", flags.nsim, nsim_help)->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--burnin", flags.burn_in, "Proposals discarded before the first sample (default 20 n m)");
    cmd->add_option("--interval", flags.interval, "Proposals between retained samples (default n m)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--proposal", flags.proposal, "MCMC proposal")
        ->check(CLI::IsMember({"tnt", "uniform"}))
        ->capture_default_str();
    cmd->add_option("--chains", flags.chains, "Independent chains")->capture_default_str()->check(CLI::PositiveNumber);
}

SamplerConfig sampler_config(const SamplerFlags& flags) {
    SamplerConfig config;
    config.proposal = proposal_from_string(flags.proposal);
    config.burn_in = flags.burn_in;
    config.interval = flags.interval;
    config.sample_count = flags.nsim;
    config.seed = flags.seed;
    config.chains = flags.chains;
    config.validate();
    return config;
}

/// The sampler settings actually used for a graph with `dyads` dyads.
Json sampler_json(const SamplerConfig& config, std::size_t dyads) {
    Json j;
    j["proposal"] = to_string(config.proposal);
    j["burn_in"] = config.effective_burn_in(dyads);
    j["interval"] = config.effective_interval(dyads);
    j["sample_count"] = config.sample_count;
    j["seed"] = config.seed;
    j["chains"] = config.chains;
    return j;
}

Json degree_summary_json(const BipartiteGraph& graph, Side side) {
    Json j;
    if (graph.size(side) == 0) return j;
    const DegreeSummary s = degree_summary(graph, side);
    j["mean"] = s.mean;
    j["sd"] = std::isfinite(s.sd) ? Json(s.sd) : Json(nullptr);
    j["histogram"] = s.histogram;
    return j;
}

std::vector<AttributeRequirement> parse_requirements(const std::vector<std::string>& specs) {
    std::vector<AttributeRequirement> out;
    for (const auto& spec : specs) {
        AttributeRequirement req;
        const auto colon = spec.find(':');
        req.name = spec.substr(0, colon);
        if (req.name.empty()) throw ValidationError("--require: empty attribute name in '" + spec + "'");
        if (colon != std::string::npos) {
            const std::string kind = spec.substr(colon + 1);
            if (kind == "quantitative") {
                req.kind = AttributeKind::quantitative;
            } else if (kind == "categorical") {
                req.kind = AttributeKind::categorical;
            } else {
                throw ValidationError("--require: kind must be quantitative or categorical, got '" + kind + "'");
            }
        }
        out.push_back(std::move(req));
    }
    return out;
}

// build ------------------------------------------------------------------------

struct BuildArgs {
    std::string corpus, dictionary, output, report;
    std::vector<std::string> attributes, required;
};

int run_build(const BuildArgs& a, bool quiet, std::ostream& out) {
    const Corpus corpus = load_corpus(a.corpus);
    const SkillDictionary dictionary = io::read_dictionary(a.dictionary);
    BuildResult built = build_network(corpus, dictionary);

    std::vector<AttributeRecord> records;
    for (const auto& path : a.attributes) {
        auto more = io::read_attribute_csv(path);
        records.insert(records.end(), more.begin(), more.end());
    }
    const AttributeTable attrs = attach_attributes(built.graph, records, parse_requirements(a.required));

    Json run;
    run["subcommand"] = "build";
    run["corpus"] = a.corpus;
    run["dictionary"] = a.dictionary;
    run["attributes"] = a.attributes;
    run["require"] = a.required;
    Json metadata;
    metadata["tool"] = io::tool_info();
    metadata["run"] = run;
    metadata["skipped_documents"] = corpus.skipped();
    io::write_text(a.output, io::dump(io::network_to_json(built.graph, attrs, metadata)));

    if (!a.report.empty()) {
        Json report;
        report["tool"] = io::tool_info();
        report["run"] = run;
        Json matches = Json::array();
        for (const auto& m : built.matches) {
            Json entry;
            entry["skill"] = built.graph.label(Side::first, m.skill);
            entry["document"] = built.graph.label(Side::second, m.document);
            entry["patterns"] = m.patterns;
            matches.push_back(std::move(entry));
        }
        report["matches"] = std::move(matches);
        report["skipped_documents"] = corpus.skipped();
        io::write_text(a.report, io::dump(report));
    }

    if (!quiet) {
        out << "Network: " << built.graph.first_size() << " skills x " << built.graph.second_size()
            << " documents, " << built.graph.edge_count() << " edges\n";
        for (const auto& id : corpus.skipped()) out << "Skipped empty document: " << id << "\n";
        for (std::size_t s = 0; s < built.graph.first_size(); ++s) {
            if (built.graph.degree(Side::first, s) == 0) {
                out << "Skill with no matches: " << built.graph.label(Side::first, s) << "\n";
            }
        }
    }
    return 0;
}

// describe ---------------------------------------------------------------------

struct DescribeArgs {
    std::string network, output, importance = "importance", rank = "competition";
    std::vector<std::string> metrics{"degree", "eigenvector"};
    std::vector<std::string> by;
    bool importance_given = false;
    bool by_given = false;
};

int run_describe(const DescribeArgs& a, bool quiet, std::ostream& out) {
    const io::NetworkFile net = io::read_network(a.network);
    const BipartiteGraph& graph = net.graph;
    const AttributeTable& attrs = net.attributes;

    const bool has_importance = attrs.find(a.importance) != nullptr;
    if (a.importance_given && !has_importance) {
        throw ValidationError("importance attribute '" + a.importance + "' is not defined");
    }
    const RankMethod method = a.rank == "dense" ? RankMethod::dense : RankMethod::competition;
    const RankingTable ranking =
        ranking_table(graph, attrs, has_importance ? std::string_view(a.importance) : std::string_view(), method);

    std::optional<CorrelationReport> correlations;
    if (has_importance) correlations = correlation_report(graph, attrs, a.metrics, a.importance);

    std::vector<std::string> by = a.by;
    if (!a.by_given) {
        for (const auto& attr : attrs.attributes()) {
            if (attr.side == Side::second && attr.kind == AttributeKind::categorical) by.push_back(attr.name);
        }
    }
    const auto subgraphs = subgraph_summary(graph, attrs, by);

    Json run;
    run["subcommand"] = "describe";
    run["network"] = a.network;
    run["metrics"] = a.metrics;
    run["importance"] = has_importance ? Json(a.importance) : Json(nullptr);
    run["centrality_rank"] = a.rank;
    run["by"] = by;
    Json report;
    report["tool"] = io::tool_info();
    report["run"] = run;
    report["first_degrees"] = degree_summary_json(graph, Side::first);
    report["second_degrees"] = degree_summary_json(graph, Side::second);
    report["ranking"] = io::ranking_to_json(ranking);
    report["correlations"] = correlations ? io::correlations_to_json(*correlations) : Json(nullptr);
    report["subgraphs"] = io::subgraphs_to_json(subgraphs);
    if (!a.output.empty()) io::write_text(a.output, io::dump(report));

    if (!quiet) {
        out << "Degree ranking\n\n" << io::render_ranking(ranking) << "\n";
        out << "Degree by sub-graph\n\n" << io::render_subgraphs(subgraphs);
        if (correlations) out << "\nCorrelations\n\n" << io::render_correlations(*correlations);
    }
    return 0;
}

// fit --------------------------------------------------------------------------

struct FitArgs {
    std::string network, model, output, method = "mple";
    SamplerFlags sampler;
    std::size_t max_iterations = 20;
    bool inflate_se = false;
};

int run_fit(const FitArgs& a, bool quiet, std::ostream& out) {
    const io::NetworkFile net = io::read_network(a.network);
    const ModelSpec spec = io::read_model(a.model);
    const FitMethod method = fit_method_from_string(a.method);

    Json run;
    run["subcommand"] = "fit";
    run["network"] = a.network;
    run["model"] = a.model;
    run["method"] = a.method;
    run["seed"] = a.sampler.seed;

    FitResult fit;
    switch (method) {
    case FitMethod::mple: fit = fit_mple(spec, net.graph, net.attributes); break;
    case FitMethod::exact: fit = fit_exact(spec, net.graph, net.attributes); break;
    case FitMethod::mcmle: {
        McmleOptions options;
        options.sampler = sampler_config(a.sampler);
        options.max_iterations = a.max_iterations;
        options.inflate_se = a.inflate_se;
        run["sampler"] = sampler_json(options.sampler, net.graph.dyad_count());
        run["max_iterations"] = a.max_iterations;
        run["inflate_se"] = a.inflate_se;
        fit = fit_mcmle(spec, net.graph, net.attributes, options);
        break;
    }
    }

    if (!a.output.empty()) io::write_text(a.output, io::dump(io::fit_to_json(fit, spec, run)));
    if (!quiet) out << io::render_fit(fit);
    return 0;
}

// simulate ---------------------------------------------------------------------

struct SimulateArgs {
    std::string network, fit, model, output, save_networks;
    std::vector<double> theta;
    SamplerFlags sampler;
};

int run_simulate(const SimulateArgs& a, bool quiet, std::ostream& out) {
    const io::NetworkFile net = io::read_network(a.network);
    ModelSpec spec;
    Eigen::VectorXd theta;
    if (!a.fit.empty()) {
        if (!a.model.empty() || !a.theta.empty()) {
            throw ValidationError("give either --fit or --model with --theta, not both");
        }
        io::FitFile fit = io::read_fit(a.fit);
        spec = std::move(fit.spec);
        theta = fit.fit.theta;
    } else {
        if (a.model.empty() || a.theta.empty()) throw ValidationError("give --fit, or --model with --theta");
        spec = io::read_model(a.model);
        theta = Eigen::Map<const Eigen::VectorXd>(a.theta.data(), static_cast<Eigen::Index>(a.theta.size()));
    }
    const SamplerConfig config = sampler_config(a.sampler);
    const BoundModel model(spec, net.graph, net.attributes);
    validate_theta(model, theta);

    Eigen::MatrixXd statistics;
    if (a.save_networks.empty()) {
        statistics = simulate(model, theta, net.graph, config).statistics;
    } else {
        const auto samples = sample(spec, theta, net.graph, net.attributes, config);
        fs::create_directories(a.save_networks);
        statistics.resize(static_cast<Eigen::Index>(samples.size()), static_cast<Eigen::Index>(spec.size()));
        char name[32];
        for (std::size_t s = 0; s < samples.size(); ++s) {
            statistics.row(static_cast<Eigen::Index>(s)) = samples[s].statistics.transpose();
            std::snprintf(name, sizeof name, "network_%06zu.json", s + 1);
            io::write_text(fs::path(a.save_networks) / name,
                           io::dump(io::network_to_json(samples[s].graph, net.attributes)));
        }
    }
    const auto names = model.names();
    const std::string tsv = io::statistics_tsv(names, statistics);

    Json run;
    run["subcommand"] = "simulate";
    run["network"] = a.network;
    run["fit"] = a.fit.empty() ? Json(nullptr) : Json(a.fit);
    run["model"] = a.model.empty() ? Json(nullptr) : Json(a.model);
    run["theta"] = std::vector<double>(theta.data(), theta.data() + theta.size());
    run["sampler"] = sampler_json(config, net.graph.dyad_count());
    run["save_networks"] = a.save_networks.empty() ? Json(nullptr) : Json(a.save_networks);
    Json meta;
    meta["tool"] = io::tool_info();
    meta["run"] = run;
    meta["columns"] = names;

    if (a.output.empty()) {
        out << tsv;
    } else {
        io::write_text(a.output, tsv);
        io::write_text(a.output + ".meta.json", io::dump(meta));
        if (!quiet) {
            out << "Wrote " << statistics.rows() << " samples of " << names.size() << " statistics to "
                << a.output << "\n";
        }
    }
    return 0;
}

// gof --------------------------------------------------------------------------

struct GofArgs {
    std::string network, fit, output;
    SamplerFlags sampler;
    bool pinv = false;
    bool degrees = false;
};

int run_gof(const GofArgs& a, bool quiet, std::ostream& out) {
    const io::NetworkFile net = io::read_network(a.network);
    const io::FitFile fit = io::read_fit(a.fit);
    const SamplerConfig config = sampler_config(a.sampler);
    GofOptions options;
    options.allow_pseudo_inverse = a.pinv;
    options.degree_distribution = a.degrees;
    const GofReport report = gof(fit.spec, net.graph, net.attributes, fit.fit, config, options);

    Json run;
    run["subcommand"] = "gof";
    run["network"] = a.network;
    run["fit"] = a.fit;
    run["sampler"] = sampler_json(config, net.graph.dyad_count());
    run["pinv"] = a.pinv;
    run["degree_gof"] = a.degrees;
    if (!a.output.empty()) io::write_text(a.output, io::dump(io::gof_to_json(report, run)));
    if (!quiet) out << io::render_gof(report);
    return 0;
}

} // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bipartite exponential random graph models: build, describe, fit, simulate, gof", "bergm"};
    app.set_version_flag("--version", std::string(tool_name) + " " + std::string(tool_version));
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "Suppress the text report on standard output");

    BuildArgs build;
    auto* cmd_build = app.add_subcommand("build", "Build a network from a corpus and a skills dictionary");
    cmd_build->add_option("--corpus", build.corpus, "Directory of .txt documents")->required();
    cmd_build->add_option("--dict", build.dictionary, "Skills dictionary JSON")->required();
    cmd_build->add_option("--attrs", build.attributes, "Attribute CSV (label,attr,value[,partition]); repeatable");
    cmd_build->add_option("--require", build.required, "Attribute that must be total, as name[:kind]; repeatable");
    cmd_build->add_option("-o,--output", build.output, "Network JSON to write")->required();
    cmd_build->add_option("--report", build.report, "Match report JSON to write");

    DescribeArgs describe;
    auto* cmd_describe = app.add_subcommand("describe", "Degree ranking, correlations and sub-graph summaries");
    cmd_describe->add_option("--network", describe.network, "Network JSON")->required();
    cmd_describe->add_option("--metrics", describe.metrics, "Centrality metrics: degree, eigenvector")
        ->delimiter(',')
        ->check(CLI::IsMember({"degree", "eigenvector"}));
    auto* importance = cmd_describe->add_option("--importance", describe.importance,
                                                "Quantitative first-partition attribute to rank and correlate");
    auto* by = cmd_describe->add_option("--by", describe.by,
                                        "Categorical second-partition attributes for sub-graphs (default: all)")
                   ->delimiter(',');
    cmd_describe->add_option("--centrality-rank", describe.rank, "Tie handling for centrality ranks")
        ->check(CLI::IsMember({"competition", "dense"}))
        ->capture_default_str();
    cmd_describe->add_option("-o,--output", describe.output, "Report JSON to write");

    FitArgs fit;
    auto* cmd_fit = app.add_subcommand("fit", "Fit a model");
    cmd_fit->add_option("--network", fit.network, "Network JSON")->required();
    cmd_fit->add_option("--model", fit.model, "Model JSON")->required();
    cmd_fit->add_option("--method", fit.method, "Estimator")
        ->check(CLI::IsMember({"mple", "mcmle", "exact"}))
        ->capture_default_str();
    cmd_fit->add_option("-o,--output", fit.output, "Fit JSON to write");
    add_sampler_flags(cmd_fit, fit.sampler, "Networks sampled per MC-MLE iteration");
    cmd_fit->add_option("--max-iterations", fit.max_iterations, "MC-MLE iteration limit")->capture_default_str();
    cmd_fit->add_flag("--inflate-se", fit.inflate_se, "Add MCMC error to MC-MLE standard errors");

    SimulateArgs sim;
    auto* cmd_sim = app.add_subcommand("simulate", "Simulate networks and their statistics");
    cmd_sim->add_option("--network", sim.network, "Network JSON (start state and attributes)")->required();
    cmd_sim->add_option("--fit", sim.fit, "Fit JSON supplying model and coefficients");
    cmd_sim->add_option("--model", sim.model, "Model JSON (with --theta)");
    cmd_sim->add_option("--theta", sim.theta, "Comma-separated coefficients")->delimiter(',');
    cmd_sim->add_option("-o,--output", sim.output, "Statistics TSV to write (default standard output)");
    cmd_sim->add_option("--save-networks", sim.save_networks, "Directory for the sampled networks");
    add_sampler_flags(cmd_sim, sim.sampler, "Networks to simulate");

    GofArgs gof_args;
    auto* cmd_gof = app.add_subcommand("gof", "Simulation-based goodness of fit");
    cmd_gof->add_option("--network", gof_args.network, "Network JSON")->required();
    cmd_gof->add_option("--fit", gof_args.fit, "Fit JSON")->required();
    cmd_gof->add_option("-o,--output", gof_args.output, "Report JSON to write");
    cmd_gof->add_flag("--pinv", gof_args.pinv, "Use a pseudo-inverse when the simulated covariance is singular");
    cmd_gof->add_flag("--degree-gof", gof_args.degrees, "Add the degree-distribution comparison");
    add_sampler_flags(cmd_gof, gof_args.sampler, "Networks to simulate");

    std::vector<std::string> argv_storage{"bergm"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_storage) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    describe.importance_given = importance->count() > 0;
    describe.by_given = by->count() > 0;

    try {
        if (cmd_build->parsed()) return run_build(build, quiet, out);
        if (cmd_describe->parsed()) return run_describe(describe, quiet, out);
        if (cmd_fit->parsed()) return run_fit(fit, quiet, out);
        if (cmd_sim->parsed()) return run_simulate(sim, quiet, out);
        if (cmd_gof->parsed()) return run_gof(gof_args, quiet, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const InternalConsistencyError& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace bergm::cli
