// Command-line front end for the container library.
//
// Exit codes: 0 success, 1 a requested trace or coverage check failed,
// 2 invalid input, 3 non-simple hypergraph, 4 internal consistency failure.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hgc/hgc.hpp"
#include "hgc/report.hpp"

namespace {

using hgc::Json;

constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitNotSimple = 3;
constexpr int kExitInternal = 4;

struct Common {
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    std::size_t budget = 64;
    std::string output;
};

std::uint64_t env_or(const char* name, std::uint64_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw hgc::InputError(std::string("environment variable ") + name + " is not an integer");
    }
}

hgc::Caps caps_from_env() {
    hgc::Caps caps;
    caps.max_vertices = env_or("HGC_MAX_VERTICES", caps.max_vertices);
    caps.max_edges = env_or("HGC_MAX_EDGES", caps.max_edges);
    return caps;
}

std::uint64_t enum_cap() { return env_or("HGC_ENUM_CAP", 10'000'000); }

void emit(const Json& doc, const std::string& path) {
    const std::string text = doc.dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw hgc::InputError("cannot write '" + path + "'");
    out << text;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw hgc::InputError("cannot write '" + path + "'");
    out << text;
}

hgc::Hypergraph load_graph(const std::string& path) {
    auto parsed = hgc::load_hypergraph(path, caps_from_env());
    for (const auto& w : parsed.warnings) std::cerr << "warning: " << path << ": " << w << "\n";
    return std::move(parsed.graph);
}

hgc::PatternGraph load_pattern(const std::string& path) {
    return hgc::PatternGraph::from_hypergraph(load_graph(path));
}

Json header(const std::string& command, Json config) {
    return Json{{"command", command}, {"version", hgc::kVersion}, {"config", std::move(config)}};
}

// ---------------------------------------------------------------------------

struct ParamsArgs {
    std::size_t r = 2;
    std::string d;
    bool json = false;
};

int run_params(const ParamsArgs& a, const Common& c) {
    const auto params = hgc::compute_params(a.r, hgc::Rational::parse(a.d));
    if (a.json || !c.output.empty()) {
        Json doc = header("params", {{"r", a.r}, {"d", a.d}});
        doc["params"] = hgc::to_json(params);
        emit(doc, c.output);
        return 0;
    }
    std::cout << std::setprecision(6);
    std::cout << "r = " << params.r << "  d = " << params.d << "\n"
              << "u = " << params.u << "\n"
              << "q = " << params.q << (params.vacuous ? "  (vacuous: q >= 1)" : "") << "\n"
              << "alpha = " << params.alpha << "\n"
              << "measure threshold = " << params.measure_threshold << "\n"
              << "j   p_j           p_j^(r-1) d u^j\n";
    for (std::size_t j = 0; j < params.r; ++j) {
        const double check = std::pow(params.p_by_j[j], static_cast<double>(params.r - 1)) * params.d.to_double() *
                             std::pow(params.u, static_cast<double>(j));
        std::cout << std::left << std::setw(4) << j << std::setw(14) << params.p_by_j[j] << check << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct ContainersArgs {
    std::string graph;
    std::string delta;
    std::string family = "maximal";
    std::string family_file;
    bool verify = false;
    bool traces = false;
};

std::vector<hgc::VertexSet> read_family_file(const std::string& path, std::size_t n) {
    std::ifstream in(path);
    if (!in) throw hgc::InputError("cannot open family file '" + path + "'");
    std::vector<hgc::VertexSet> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] == '#') continue;
        out.push_back(hgc::VertexSet::parse_list(n, line));
    }
    return out;
}

int run_containers(const ContainersArgs& a, const Common& c) {
    const auto delta = hgc::Rational::parse(a.delta);
    hgc::require_delta(delta);
    const auto g = load_graph(a.graph);
    if (const auto s = hgc::is_simple(g); !s.simple) {
        std::cerr << "error: hypergraph is not simple; edges " << s.witness->first << " and " << s.witness->second
                  << " overlap: {";
        for (auto v : g.edge(s.witness->first)) std::cerr << ' ' << v;
        std::cerr << " } {";
        for (auto v : g.edge(s.witness->second)) std::cerr << ' ' << v;
        std::cerr << " }\n";
        return kExitNotSimple;
    }

    std::vector<hgc::VertexSet> family;
    bool family_truncated = false;
    if (a.family == "maximal") {
        auto res = hgc::maximal_independent_sets(g, enum_cap());
        family = std::move(res.sets);
        family_truncated = res.truncated;
    } else if (a.family == "empty") {
        family.emplace_back(g.label_count());
    } else if (a.family == "file") {
        if (a.family_file.empty()) throw hgc::InputError("--family file needs --family-file");
        family = read_family_file(a.family_file, g.label_count());
    } else {
        throw hgc::InputError("unknown family '" + a.family + "' (maximal, empty, file)");
    }

    hgc::CollectionOptions opt;
    opt.seed = c.seed;
    opt.budget = c.budget;
    opt.threads = c.threads;
    const auto rep = hgc::build_collection(g, family, delta, opt);

    Json doc = header("containers", {{"graph", a.graph},
                                     {"delta", delta.str()},
                                     {"family", a.family},
                                     {"family_file", a.family_file},
                                     {"seed", c.seed},
                                     {"budget", c.budget},
                                     {"verify", a.verify}});
    doc["graph"] = {{"r", g.uniformity()}, {"n", g.label_count()}, {"m", g.edge_count()},
                    {"average_degree", g.average_degree().str()}};
    doc["family_size"] = family.size();
    doc["family_truncated"] = family_truncated;
    doc["collection"] = hgc::to_json(rep, a.traces);

    bool ok = rep.failures == 0;
    if (a.verify) {
        const auto cov = hgc::verify_coverage(g, rep.containers, enum_cap());
        doc["coverage"] = hgc::to_json(cov);
        ok = ok && cov.uncovered_count == 0 && !cov.truncated;
    }
    emit(doc, c.output);
    return ok ? 0 : kExitFailure;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string graph;
    std::string report;
};

int run_verify(const VerifyArgs& a, const Common& c) {
    const auto g = load_graph(a.graph);
    std::ifstream in(a.report);
    if (!in) throw hgc::InputError("cannot open report '" + a.report + "'");
    Json doc;
    try {
        in >> doc;
    } catch (const Json::exception& e) {
        throw hgc::InputError(std::string("report is not valid JSON: ") + e.what());
    }
    const Json* list = nullptr;
    if (doc.contains("collection") && doc["collection"].contains("containers")) list = &doc["collection"]["containers"];
    else if (doc.contains("containers")) list = &doc["containers"];
    if (!list || !list->is_array()) throw hgc::InputError("report has no container list");

    std::vector<hgc::VertexSet> containers;
    for (const auto& item : *list) {
        hgc::VertexSet s(g.label_count());
        for (const auto& v : item) {
            if (!v.is_number_unsigned() || v.get<std::uint64_t>() >= g.label_count())
                throw hgc::InputError("container vertex out of range");
            s.insert(v.get<hgc::Vertex>());
        }
        containers.push_back(std::move(s));
    }
    const auto cov = hgc::verify_coverage(g, containers, enum_cap());
    Json out = header("verify", {{"graph", a.graph}, {"report", a.report}});
    out["coverage"] = hgc::to_json(cov);
    emit(out, c.output);
    return cov.uncovered_count == 0 && !cov.truncated ? 0 : kExitFailure;
}

// ---------------------------------------------------------------------------

struct HfreeArgs {
    std::string pattern;
    std::size_t n_points = 0;
    double epsilon = 0.2;
    std::string delta;
    std::optional<double> rho;
    std::optional<double> rho_prime;
    bool census = false;
    bool verify = false;
    std::size_t max_retries = 16;
    std::string export_graph;
    std::string export_codec;
};

int run_hfree(const HfreeArgs& a, const Common& c) {
    const auto h = load_pattern(a.pattern);
    if (!(a.epsilon > 0 && a.epsilon < 1)) throw hgc::InputError("--epsilon must lie in (0, 1)");
    // delta = eta / 2 with eta taken equal to epsilon unless given
    const auto delta = a.delta.empty() ? hgc::Rational::parse(Json(a.epsilon).dump()) / hgc::Rational(2)
                                       : hgc::Rational::parse(a.delta);
    hgc::require_delta(delta);
    auto [rho, rho_prime] = hgc::default_rho(h);
    if (a.rho) rho = *a.rho;
    if (a.rho_prime) rho_prime = *a.rho_prime;
    else if (a.rho) rho_prime = (rho + 1.0) / 2.0;

    hgc::PipelineOptions opt;
    opt.seed = c.seed;
    opt.budget = c.budget;
    opt.threads = c.threads;
    opt.max_retries = a.max_retries;
    opt.census = a.census;
    opt.verify = a.verify;
    opt.family_cap = enum_cap();
    opt.verify_cap = enum_cap();
    opt.copy_caps.max_vertices = caps_from_env().max_vertices;

    if (!a.export_graph.empty()) {
        const auto cg = hgc::enumerate_copies(h, a.n_points, opt.copy_caps, c.threads);
        write_file(a.export_graph, hgc::format_hypergraph(cg.graph));
        if (!a.export_codec.empty()) write_file(a.export_codec, hgc::format_codec(cg.codec));
    }

    const auto rep = hgc::hfree_container_pipeline(h, a.n_points, a.epsilon, delta, rho, rho_prime, opt);
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";

    Json doc = header("hfree", {{"pattern", a.pattern},
                                {"N", a.n_points},
                                {"epsilon", a.epsilon},
                                {"delta", delta.str()},
                                {"rho", rho},
                                {"rho_prime", rho_prime},
                                {"census", a.census},
                                {"verify", a.verify},
                                {"max_retries", a.max_retries},
                                {"seed", c.seed},
                                {"budget", c.budget}});
    doc["report"] = hgc::to_json(rep);

    bool ok = rep.collection.failures == 0;
    if (rep.coverage) ok = ok && rep.coverage->uncovered_count == 0 && !rep.coverage->truncated;
    emit(doc, c.output);
    return ok ? 0 : kExitFailure;
}

// ---------------------------------------------------------------------------

struct SparseTuranArgs {
    std::string pattern;
    std::size_t n_points = 0;
    double p = 0;
    double gamma = 0;
    std::size_t trials = 100;
    std::string csv;
};

int run_sparse_turan(const SparseTuranArgs& a, const Common& c) {
    if (!(a.p >= 0 && a.p <= 1)) throw hgc::InputError("--p must lie in [0, 1]");
    if (!(a.gamma > 0 && a.gamma < 1)) throw hgc::InputError("--gamma must lie in (0, 1)");
    const auto h = load_pattern(a.pattern);
    const auto rep = hgc::sparse_turan_experiment(h, a.n_points, a.p, a.gamma, a.trials, c.seed, c.threads);
    Json doc = header("sparse-turan", {{"pattern", a.pattern},
                                       {"N", a.n_points},
                                       {"p", a.p},
                                       {"gamma", a.gamma},
                                       {"trials", a.trials},
                                       {"seed", c.seed}});
    doc["report"] = hgc::to_json(rep);
    const std::string csv = hgc::sparse_turan_csv(rep);
    if (!a.csv.empty()) write_file(a.csv, csv);
    else if (!c.output.empty()) std::cout << csv;
    emit(doc, c.output);
    return 0;
}

void add_common(CLI::App* sub, Common& c, bool with_seed = true) {
    if (with_seed) sub->add_option("--seed", c.seed, "random seed (mandatory)")->required();
    sub->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    sub->add_option("--budget", c.budget, "attempts per container step")->check(CLI::PositiveNumber);
    sub->add_option("--output,-o", c.output, "report path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hypergraph containers: construction, iteration, H-free counting"};
    app.require_subcommand(1);
    app.set_version_flag("--version", hgc::kVersion);

    Common common;

    ParamsArgs params_args;
    auto* params = app.add_subcommand("params", "print container parameters for given r, d");
    params->add_option("--r", params_args.r, "uniformity")->required();
    params->add_option("--d", params_args.d, "average degree (a/b or decimal)")->required();
    params->add_flag("--json", params_args.json, "emit JSON");
    params->add_option("--output,-o", common.output, "report path");

    ContainersArgs cont_args;
    auto* cont = app.add_subcommand("containers", "build an iterated container collection");
    cont->add_option("--graph", cont_args.graph, "hypergraph file")->required();
    cont->add_option("--delta", cont_args.delta, "edge fraction target, 0 < delta < 1")->required();
    cont->add_option("--family", cont_args.family, "maximal | empty | file");
    cont->add_option("--family-file", cont_args.family_file, "independent sets, one comma list per line");
    cont->add_flag("--verify", cont_args.verify, "check coverage of every independent set");
    cont->add_flag("--traces", cont_args.traces, "include per-member iteration traces");
    add_common(cont, common);

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "check a container report against all independent sets");
    verify->add_option("--graph", verify_args.graph, "hypergraph file")->required();
    verify->add_option("--report", verify_args.report, "containers report JSON")->required();
    add_common(verify, common, false);

    HfreeArgs hfree_args;
    auto* hfree = app.add_subcommand("hfree", "containers for H-free ell-graphs on [N]");
    hfree->add_option("--pattern", hfree_args.pattern, "pattern graph file")->required();
    hfree->add_option("--N", hfree_args.n_points, "ground set size")->required();
    hfree->add_option("--epsilon", hfree_args.epsilon, "copy-density tolerance");
    hfree->add_option("--delta", hfree_args.delta, "container edge fraction (default epsilon/2)");
    hfree->add_option("--rho", hfree_args.rho, "sparsification degree exponent");
    hfree->add_option("--rho-prime", hfree_args.rho_prime, "sampling exponent, rho < rho' < 1");
    hfree->add_option("--max-retries", hfree_args.max_retries, "sparsification retries");
    hfree->add_flag("--census", hfree_args.census, "exact census of H-free graphs when C(N,ell) <= 28");
    hfree->add_flag("--verify", hfree_args.verify, "check coverage of every H-free graph");
    hfree->add_option("--export-graph", hfree_args.export_graph, "write G(N,H) in hypergraph format");
    hfree->add_option("--export-codec", hfree_args.export_codec, "write the vertex -> ell-set codec");
    add_common(hfree, common);

    SparseTuranArgs st_args;
    auto* st = app.add_subcommand("sparse-turan", "largest H-free subgraphs of random ell-graphs");
    st->add_option("--pattern", st_args.pattern, "pattern graph file")->required();
    st->add_option("--N", st_args.n_points, "ground set size")->required();
    st->add_option("--p", st_args.p, "edge probability")->required();
    st->add_option("--gamma", st_args.gamma, "density slack, 0 < gamma < 1")->required();
    st->add_option("--trials", st_args.trials, "number of samples");
    st->add_option("--csv", st_args.csv, "per-trial CSV path");
    add_common(st, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*params) return run_params(params_args, common);
        if (*cont) return run_containers(cont_args, common);
        if (*verify) return run_verify(verify_args, common);
        if (*hfree) return run_hfree(hfree_args, common);
        if (*st) return run_sparse_turan(st_args, common);
    } catch (const hgc::NotSimpleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotSimple;
    } catch (const hgc::InvariantViolation& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const hgc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
