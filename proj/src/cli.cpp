#include "erspar/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "erspar/derand.hpp"
#include "erspar/graph.hpp"
#include "erspar/kwise.hpp"
#include "erspar/lowerbound.hpp"
#include "erspar/resistance.hpp"
#include "erspar/sparsify.hpp"
#include "erspar/verify.hpp"

namespace erspar {

namespace {

WeightedGraph load_graph(const std::string& path, std::istream& in) {
    if (path == "-") return parse_edge_list(in);
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path);
    return parse_edge_list(f);
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void emit(const std::string& payload, const std::string& output_path, std::ostream& out) {
    if (output_path.empty()) {
        out << payload;
        return;
    }
    std::ofstream f(output_path);
    if (!f) throw ParseError("cannot open " + output_path + " for writing");
    f << payload;
}

struct CliOptions {
    double tolerance = 1e-9;
    bool quiet = false;
    std::string output;
};

} // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"effective-resistance graph sparsifier toolkit"};
    app.require_subcommand(0, 1);

    CliOptions global;
    app.add_option("--tolerance", global.tolerance, "floating-point comparison slack")
        ->capture_default_str();
    app.add_flag("--quiet", global.quiet, "suppress stderr diagnostics");
    app.add_option("--output", global.output, "write the result payload to this file");

    struct {
        std::string graph;
        double gamma = 0.0;
        uint64_t noise_seed = 1;
    } res;
    auto* cmd_res = app.add_subcommand("resistances", "per-edge effective resistances");
    cmd_res->add_option("graph", res.graph, "edge-list file ('-' for stdin)")->required();
    cmd_res->add_option("--approx-gamma", res.gamma, "use a gamma-perturbed pseudoinverse");
    cmd_res->add_option("--noise-seed", res.noise_seed, "perturbation seed (0 = exact)");

    struct {
        int m = 0, k = 0, t = 0;
        uint64_t seed = 0;
        std::string marginals_file;
        double marginal = 0.5;
    } kw;
    auto* cmd_kwise = app.add_subcommand("kwise", "evaluate one point of a k-wise sample space");
    cmd_kwise->add_option("--m", kw.m, "coordinate count")->required();
    cmd_kwise->add_option("--k", kw.k, "independence parameter")->required();
    cmd_kwise->add_option("--t", kw.t, "marginal precision bits")->required();
    cmd_kwise->add_option("--seed", kw.seed, "seed index")->required();
    cmd_kwise->add_option("--marginals", kw.marginals_file, "file with m probabilities");
    cmd_kwise->add_option("--marginal", kw.marginal, "uniform marginal when no file is given")
        ->capture_default_str();

    struct {
        std::string graph;
        int k = 2, t = 8;
        double eps = 0.5, delta = 0.25;
        double rate = 0.0;
        bool random = false;
        uint64_t seed = 0;
        uint64_t rng_seed = 0x657273706172ULL;
        double gamma = 0.0;
        uint64_t noise_seed = 1;
    } sp;
    auto* cmd_sp = app.add_subcommand("sparsify", "effective-resistance edge sampling");
    cmd_sp->add_option("graph", sp.graph)->required();
    cmd_sp->add_option("--k", sp.k, "independence parameter (even)")->required();
    cmd_sp->add_option("--eps", sp.eps)->required();
    cmd_sp->add_option("--delta", sp.delta)->capture_default_str();
    cmd_sp->add_option("--t", sp.t, "marginal precision bits")->capture_default_str();
    cmd_sp->add_option("--rate", sp.rate, "override the oversampling rate s");
    auto* opt_seed = cmd_sp->add_option("--seed", sp.seed, "seed index for the sample space");
    auto* opt_random = cmd_sp->add_flag("--random", sp.random, "draw the seed from --rng-seed");
    opt_seed->excludes(opt_random);
    cmd_sp->add_option("--rng-seed", sp.rng_seed, "generator seed for --random")
        ->capture_default_str();
    cmd_sp->add_option("--approx-gamma", sp.gamma, "use gamma-approximate resistances");
    cmd_sp->add_option("--noise-seed", sp.noise_seed, "perturbation seed for --approx-gamma");

    struct {
        std::string graph;
        int k = 2;
        double eps = 0.5;
        uint64_t cap = 1ULL << 24;
        int jobs = 1;
        uint64_t noise_seed = 0;
    } dr;
    auto* cmd_dr = app.add_subcommand("derand", "deterministic sparsification by enumeration");
    cmd_dr->add_option("graph", dr.graph)->required();
    cmd_dr->add_option("--k", dr.k)->required();
    cmd_dr->add_option("--eps", dr.eps)->required();
    cmd_dr->add_option("--cap", dr.cap, "max seeds to try")->capture_default_str();
    cmd_dr->add_option("--jobs", dr.jobs, "parallel workers")->capture_default_str();
    cmd_dr->add_option("--noise-seed", dr.noise_seed,
                       "perturbed-oracle seed (0 = exact oracle)");

    struct {
        std::string graph_a, graph_b;
        double eps = 0.1, alpha = 0.5;
        std::string mode = "exact";
        uint64_t noise_seed = 1;
    } vf;
    auto* cmd_vf = app.add_subcommand("verify", "trace-power spectral-proximity test");
    cmd_vf->add_option("graph", vf.graph_a, "reference graph")->required();
    cmd_vf->add_option("candidate", vf.graph_b, "candidate graph")->required();
    cmd_vf->add_option("--eps", vf.eps)->required();
    cmd_vf->add_option("--alpha", vf.alpha)->required();
    cmd_vf->add_option("--mode", vf.mode, "exact|solver")->capture_default_str();
    cmd_vf->add_option("--noise-seed", vf.noise_seed, "solver-mode perturbation seed");

    struct {
        std::string fixture = "petersen";
        std::string dist = "partition";
        std::string report = "independence";
    } lb;
    auto* cmd_lb = app.add_subcommand("lowerbound", "bounded-independence lower-bound lab");
    cmd_lb->add_option("--fixture", lb.fixture, "petersen|heawood|complete:n|cycle:n")
        ->capture_default_str();
    cmd_lb->add_option("--dist", lb.dist, "partition|threewise")->capture_default_str();
    cmd_lb->add_option("--report", lb.report, "independence|disconnect")->capture_default_str();

    struct {
        std::string graph;
    } rd;
    auto* cmd_rd = app.add_subcommand("round", "integer-weight rounding reduction");
    cmd_rd->add_option("graph", rd.graph)->required();

    std::vector<const char*> argv;
    argv.push_back("erspar");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(cmd_res)) {
            WeightedGraph g = load_graph(res.graph, in);
            ResistanceTable table =
                cmd_res->count("--approx-gamma")
                    ? effective_resistances_approx(g, res.gamma, res.noise_seed)
                    : effective_resistances_exact(g);
            std::string payload;
            for (int i = 0; i < g.edge_count(); ++i)
                payload += std::to_string(g.edge(i).u) + " " + std::to_string(g.edge(i).v) +
                           " " + format_double(table.values[i]) + "\n";
            emit(payload, global.output, out);
            return 0;
        }

        if (app.got_subcommand(cmd_kwise)) {
            std::vector<double> p;
            if (!kw.marginals_file.empty()) {
                std::ifstream f(kw.marginals_file);
                if (!f) throw ParseError("cannot open " + kw.marginals_file);
                double x;
                while (f >> x) p.push_back(x);
                if (p.size() != static_cast<size_t>(kw.m))
                    throw LengthMismatch("kwise: marginals file has " + std::to_string(p.size()) +
                                         " values, expected " + std::to_string(kw.m));
            } else {
                p.assign(kw.m, kw.marginal);
            }
            KWiseSpace space(p, kw.k, kw.t);
            std::vector<uint8_t> bits = space.sample_at(space.seed_from_index(kw.seed));
            std::string payload;
            for (uint8_t b : bits) payload += b ? '1' : '0';
            payload += '\n';
            emit(payload, global.output, out);
            return 0;
        }

        if (app.got_subcommand(cmd_sp)) {
            if (sp.k < 2 || sp.k % 2 != 0) {
                err << "error: --k must be a positive even integer\n";
                return 2;
            }
            WeightedGraph g = load_graph(sp.graph, in);
            ResistanceTable table;
            if (cmd_sp->count("--approx-gamma")) {
                table = effective_resistances_approx(g, sp.gamma, sp.noise_seed);
                table = adjust_for_alpha(table, sp.gamma);
            } else {
                table = effective_resistances_exact(g);
            }
            SparsifyParams params{sp.k, sp.eps, sp.delta, 0.0};
            params.s = cmd_sp->count("--rate")
                           ? sp.rate
                           : oversampling_rate(g.vertex_count(), sp.k, sp.eps, sp.delta);
            SparsifierOutput result;
            if (sp.random) {
                std::mt19937_64 rng(sp.rng_seed);
                if (!global.quiet) err << "rng_seed=" << sp.rng_seed << "\n";
                result = sparsify_random(g, table, params, sp.t, rng);
            } else {
                KWiseSpace space = sampling_space(g, table, params, sp.t);
                result = sparsify_with_seed(g, table, params, sp.t,
                                            space.seed_from_index(sp.seed));
            }
            if (!global.quiet) {
                double expected = 0.0;
                for (double p : result.probs) expected += p;
                err << "edges=" << result.graph.edge_count()
                    << " expected=" << format_double(expected) << "\n";
                if (result.rate_below_theory)
                    err << "warning: rate s below the 2 e ln n analysis regime\n";
                if (sp.k > std::log2(g.vertex_count()))
                    err << "warning: k above log2(n); the guarantee only improves\n";
            }
            emit(serialize_edge_list(result.graph), global.output, out);
            return 0;
        }

        if (app.got_subcommand(cmd_dr)) {
            if (dr.k < 2 || dr.k % 2 != 0) {
                err << "error: --k must be a positive even integer\n";
                return 2;
            }
            WeightedGraph g = load_graph(dr.graph, in);
            DerandConfig config{dr.k, dr.eps, dr.cap, dr.jobs, dr.noise_seed};
            DerandResult result = derandomized_sparsify(g, config);
            if (!global.quiet)
                err << "s=" << format_double(result.constants.s)
                    << " t=" << result.constants.t_bits << "\n";
            std::string payload = serialize_edge_list(result.graph);
            payload += "# seed=" + std::to_string(result.report.seed_index) +
                       " edges=" + std::to_string(result.report.edge_count) +
                       " threshold=" + std::to_string(result.constants.edge_threshold) +
                       " verdict=YES\n";
            emit(payload, global.output, out);
            return 0;
        }

        if (app.got_subcommand(cmd_vf)) {
            if (vf.mode != "exact" && vf.mode != "solver") {
                err << "error: --mode must be exact or solver\n";
                return 2;
            }
            WeightedGraph ga = load_graph(vf.graph_a, in);
            WeightedGraph gb = load_graph(vf.graph_b, in);
            VerifierParams params;
            params.eps = vf.eps;
            params.alpha = vf.alpha;
            params.mode = vf.mode == "exact" ? PinvMode::ExactPinv : PinvMode::SolverPinv;
            params.noise_seed = vf.noise_seed;
            params.tol = global.tolerance;
            Verdict v = verify(laplacian(ga), laplacian(gb), params);
            if (!global.quiet) err << (v == Verdict::YES ? "YES" : "NO") << "\n";
            return v == Verdict::YES ? 0 : 1;
        }

        if (app.got_subcommand(cmd_lb)) {
            WeightedGraph g = petersen_graph();
            bool complete = false;
            if (lb.fixture == "petersen") {
                g = petersen_graph();
            } else if (lb.fixture == "heawood") {
                g = heawood_graph();
            } else if (lb.fixture.rfind("complete:", 0) == 0) {
                g = complete_graph(std::stoi(lb.fixture.substr(9)));
                complete = true;
            } else if (lb.fixture.rfind("cycle:", 0) == 0) {
                g = cycle_graph(std::stoi(lb.fixture.substr(6)));
            } else {
                err << "error: unknown fixture " << lb.fixture << "\n";
                return 2;
            }
            Distribution dist = Distribution::partition(g);
            if (lb.dist == "threewise") {
                if (!complete) {
                    err << "error: threewise needs --fixture complete:n\n";
                    return 2;
                }
                dist = Distribution::three_wise_complete(g.vertex_count());
            } else if (lb.dist != "partition") {
                err << "error: --dist must be partition or threewise\n";
                return 2;
            }
            std::string payload;
            if (lb.report == "independence") {
                payload = "independence_order=" + std::to_string(independence_order(dist)) + "\n";
            } else if (lb.report == "disconnect") {
                Dyadic d = disconnection_probability(dist);
                payload = "disconnection_probability=" + std::to_string(d.num) + "/2^" +
                          std::to_string(d.log2_den) + " (" + format_double(d.value()) + ")\n";
            } else {
                err << "error: --report must be independence or disconnect\n";
                return 2;
            }
            emit(payload, global.output, out);
            return 0;
        }

        if (app.got_subcommand(cmd_rd)) {
            WeightedGraph g = load_graph(rd.graph, in);
            RoundedMultigraph rm = round_to_multigraph(g);
            std::string payload = "t=" + std::to_string(rm.shift_t) + "\n";
            payload += serialize_edge_list(rm.graph);
            emit(payload, global.output, out);
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }

    out << app.help();
    return 2;
}

} // namespace erspar
