// Command-line front end for the workspace-similarity design toolkit.
//
// Subcommands cover the full pipeline: sample a workspace cloud, fit its
// enclosing ellipsoid, evaluate one candidate design, run one optimization,
// or benchmark the algorithms over repeated seeded runs. Every output file
// embeds the config hash and seed that produced it, and identical
// (config, seed) pairs reproduce identical bytes regardless of --threads.

#include <wsopt/bench.hpp>
#include <wsopt/config_json.hpp>
#include <wsopt/io.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace {

    using namespace wsopt;

    struct GlobalFlags {
        std::optional<std::string> config;
        std::optional<std::uint64_t> seed;
        std::optional<int> threads;
        std::optional<std::string> out;
    };

    // Precedence, lowest to highest: built-in defaults, config file,
    // WSOPT_OUT (output directory only), command-line flags.
    RunConfig resolve_config(const GlobalFlags& g)
    {
        RunConfig cfg = g.config ? load_config(*g.config) : RunConfig{};
        if (const char* env = std::getenv("WSOPT_OUT"))
            cfg.out_dir = env;
        if (g.out)
            cfg.out_dir = *g.out;
        if (g.seed)
            cfg.eval.seed = *g.seed;
        if (g.threads) {
            cfg.eval.threads = *g.threads;
            cfg.solver.threads = *g.threads;
        }
        validate_config(cfg);
        return cfg;
    }

    DecisionVector parse_design(const std::string& text)
    {
        Eigen::Matrix<double, 5, 1> v;
        int consumed = 0;
        if (std::sscanf(text.c_str(), " %lf , %lf , %lf , %lf , %lf %n", &v[0], &v[1], &v[2], &v[3], &v[4],
                        &consumed) != 5 ||
            static_cast<size_t>(consumed) != text.size())
            throw InvalidConfig("design '" + text + "': expected five comma-separated numbers l1,l2,l3,l4,c");
        const DecisionVector x = DecisionVector::from_vector(v);
        if (!decision_in_bounds(x))
            throw OutOfBounds("design '" + text + "' lies outside the search box");
        return x;
    }

    std::filesystem::path out_path(const RunConfig& cfg, const std::string& file)
    {
        return std::filesystem::path(cfg.out_dir) / file;
    }

    ReferenceFront cached_front(const RunConfig& cfg, const SrlEvaluator& ev, std::uint64_t hash)
    {
        return load_or_estimate_front(ev, cfg.front_budget, cfg.eval.seed, hash, out_path(cfg, "front_cache.json"));
    }

    int cmd_workspace(const RunConfig& cfg, const std::string& mode_name, std::optional<int> n_flag,
                      const DecisionVector& x)
    {
        const Mode mode = mode_from_string(mode_name);
        const int n = n_flag.value_or(cfg.eval.sampling.n);
        if (n < 1)
            throw InvalidConfig("workspace: n must be >= 1");
        std::uint64_t sample_seed = derive_seed(cfg.eval.seed, seed_role::reporting);
        if (mode == Mode::human_arm)
            sample_seed = derive_seed(cfg.eval.seed, seed_role::arm_reference);
        else if (mode == Mode::cane)
            sample_seed = derive_seed(cfg.eval.seed, seed_role::cane_reference);

        const ChainModel chain = build_chain(mode, x, cfg.body);
        const PointCloud cloud = (mode == Mode::srl_lower && cfg.body.ground_filter)
                                     ? reduced_workspace(chain, cfg.body, n, sample_seed, cfg.eval.threads)
                                     : sample_workspace(chain, n, sample_seed, cfg.eval.threads);
        const std::filesystem::path file = out_path(cfg, "cloud_" + to_string(mode) + ".csv");
        write_text_file(file, cloud_csv(cloud.pts, config_hash(cfg), cfg.eval.seed, to_string(mode)));
        std::printf("%s: %lld points -> %s\n", to_string(mode).c_str(), static_cast<long long>(cloud.size()),
                    file.string().c_str());
        return 0;
    }

    int cmd_fit(const RunConfig& cfg, const std::string& cloud_file)
    {
        const Eigen::Matrix3Xd pts = read_cloud_csv(cloud_file);
        const MveeResult<3> fit = mvee_fit<3>(pts, cfg.eval.mvee);
        const Ellipsoid e = axes_from_shape(fit.center, fit.shape);
        const nlohmann::json j = {{"schema", "wsopt-fit-1"},
                                  {"config_hash", detail::hash_hex(config_hash(cfg))},
                                  {"seed", cfg.eval.seed},
                                  {"source", cloud_file},
                                  {"points", pts.cols()},
                                  {"ellipsoid", ellipsoid_json(e)},
                                  {"fit", fit_report_json(fit.report)}};
        const std::filesystem::path file =
            out_path(cfg, std::filesystem::path(cloud_file).stem().string() + "_fit.json");
        write_json_file(file, j);
        std::printf("fit: %lld points, gap %.3g, semi-axes [%.4f %.4f %.4f] -> %s\n",
                    static_cast<long long>(pts.cols()), fit.report.duality_gap, e.semi_axes[0], e.semi_axes[1],
                    e.semi_axes[2], file.string().c_str());
        return 0;
    }

    int cmd_eval(const RunConfig& cfg, const DecisionVector& x)
    {
        const std::uint64_t hash = config_hash(cfg);
        const SrlEvaluator ev{cfg.body, cfg.eval};
        const ReferenceFront front = cached_front(cfg, ev, hash);
        ObjectiveProfile prof = ev.evaluate_report(x);
        score(prof, front, cfg.eval.igd_order);
        const nlohmann::json j = {{"schema", "wsopt-eval-1"},
                                  {"config_hash", detail::hash_hex(hash)},
                                  {"seed", cfg.eval.seed},
                                  {"x", detail::vector_json(x.to_vector())},
                                  {"total_length", x.total_length()},
                                  {"profile", profile_json(prof)},
                                  {"front", front_json(front)}};
        const std::filesystem::path file = out_path(cfg, "eval.json");
        write_json_file(file, j);
        std::printf("phi %.6f, total length %.3f m -> %s\n", prof.phi, x.total_length(), file.string().c_str());
        return 0;
    }

    nlohmann::json run_json(const RunConfig& cfg, std::uint64_t hash, Algo algo, const SolverParams& p,
                            const RunResult& res)
    {
        nlohmann::json j = {{"schema", "wsopt-run-1"},
                            {"config_hash", detail::hash_hex(hash)},
                            {"seed", cfg.eval.seed},
                            {"algorithm", algo_name(algo)},
                            {"pop", p.pop},
                            {"max_iter", p.max_iter},
                            {"evals", res.evals},
                            {"best",
                             {{"x", detail::vector_json(res.best.x)},
                              {"phi", res.best.phi},
                              {"objectives", detail::vector_json(res.best.objectives)}}},
                            {"total_length", res.best.x.head(4).sum()}};
        if (res.trace.conv_iter)
            j["conv_iter"] = *res.trace.conv_iter;
        else
            j["conv_iter"] = nullptr;
        return j;
    }

    int cmd_optimize(const RunConfig& cfg, const std::string& algo_sel, bool timing)
    {
        const Algo algo = algo_from_name(algo_sel);
        const std::uint64_t hash = config_hash(cfg);
        SolverParams p = cfg.solver;
        p.timing = timing;
        const SrlEvaluator ev{cfg.body, cfg.eval};
        const ReferenceFront front = cached_front(cfg, ev, hash);
        const Problem prob = make_srl_problem(ev, front);
        const RunResult res = run_algorithm(algo, prob, p, cfg.eval.seed);

        const std::string tag = std::string(algo_name(algo)) + "_seed" + std::to_string(cfg.eval.seed);
        const std::filesystem::path trace_file = out_path(cfg, "run_" + tag + ".csv");
        write_text_file(trace_file, trace_csv(res.trace, prob, stamp_preamble(hash, cfg.eval.seed)));
        const std::filesystem::path report_file = out_path(cfg, "run_" + tag + ".json");
        write_json_file(report_file, run_json(cfg, hash, algo, p, res));

        const DecisionVector best = DecisionVector::from_vector(res.best.x);
        std::printf("%s seed %llu: best phi %.6f at [%.3f %.3f %.3f %.3f %.3f], total %.3f m", algo_name(algo),
                    static_cast<unsigned long long>(cfg.eval.seed), res.best.phi, best.l[0], best.l[1], best.l[2],
                    best.l[3], best.c, best.total_length());
        if (res.trace.conv_iter)
            std::printf(", converged at iter %d", *res.trace.conv_iter);
        std::printf("\n-> %s, %s\n", trace_file.string().c_str(), report_file.string().c_str());
        return 0;
    }

    int cmd_bench(const RunConfig& cfg, const std::string& algo_sel, std::optional<int> runs_flag, bool timing)
    {
        const int n_runs = runs_flag.value_or(cfg.runs);
        if (n_runs < 1)
            throw InvalidConfig("bench: need at least one run");
        std::vector<Algo> algos;
        if (algo_sel == "all")
            algos = {Algo::mscfa, Algo::firefly, Algo::random_search};
        else
            algos = {algo_from_name(algo_sel)};

        const std::uint64_t hash = config_hash(cfg);
        SolverParams p = cfg.solver;
        p.timing = timing;
        const SrlEvaluator ev{cfg.body, cfg.eval};
        const ReferenceFront front = cached_front(cfg, ev, hash);
        const Problem prob = make_srl_problem(ev, front);
        const auto rescore = [&](const Eigen::VectorXd& xv) {
            ObjectiveProfile prof = ev.evaluate_report(DecisionVector::from_vector(xv));
            score(prof, front, cfg.eval.igd_order);
            return prof.phi;
        };

        // A run that dies (degenerate geometry, empty workspace) is recorded
        // with its error text; the aggregate covers the surviving runs. The
        // command succeeds only if every run did.
        std::vector<BenchReport> reports;
        std::string errors = "algorithm,seed,error\n";
        int failed = 0;
        for (const Algo algo : algos) {
            std::vector<BenchRun> runs;
            for (int i = 0; i < n_runs; ++i) {
                const std::uint64_t seed = cfg.eval.seed + static_cast<std::uint64_t>(i);
                try {
                    runs.push_back({seed, run_algorithm(algo, prob, p, seed)});
                }
                catch (const Error& e) {
                    ++failed;
                    errors += std::string(algo_name(algo)) + "," + std::to_string(seed) + "," + e.what() + "\n";
                    std::fprintf(stderr, "bench: %s seed %llu failed: %s\n", algo_name(algo),
                                 static_cast<unsigned long long>(seed), e.what());
                }
            }
            if (!runs.empty()) {
                BenchReport rep = make_report(algo, runs, prob, p, rescore);
                rep.config_hash = hash;
                reports.push_back(rep);
                emit_traces(runs, prob, out_path(cfg, "traces"), algo_name(algo), hash);
            }
        }

        const std::string table = emit_table(reports);
        write_text_file(out_path(cfg, "bench.csv"), table);
        if (failed > 0)
            write_text_file(out_path(cfg, "bench_errors.csv"), errors);
        std::fputs(table.c_str(), stdout);
        std::printf("-> %s\n", out_path(cfg, "bench.csv").string().c_str());
        if (failed > 0) {
            std::fprintf(stderr, "bench: %d run(s) failed, see %s\n", failed,
                         out_path(cfg, "bench_errors.csv").string().c_str());
            return 3;
        }
        return 0;
    }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Workspace-similarity design optimization for a waist-mounted assistive limb"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalFlags g;
    app.add_option("--config", g.config, "JSON config file (defaults apply to every omitted key)");
    app.add_option("--seed", g.seed, "master seed; all randomness derives from it");
    app.add_option("--threads", g.threads, "worker threads; outputs do not depend on this");
    app.add_option("--out", g.out, "output directory (overrides config and WSOPT_OUT)");

    std::string ws_mode = "srl_upper";
    std::optional<int> ws_n;
    std::string ws_x;
    CLI::App* ws = app.add_subcommand("workspace", "sample a workspace point cloud and write it as CSV");
    ws->add_option("--mode", ws_mode, "srl_upper|srl_lower|human_arm|cane (default srl_upper)");
    ws->add_option("--n", ws_n, "sample count (default: config sampling.n)");
    ws->add_option("-x,--design", ws_x, "limb design l1,l2,l3,l4,c (default 0.25,0.25,0.25,0.25,0)");

    std::string fit_cloud;
    CLI::App* fit = app.add_subcommand("fit", "fit the minimum-volume enclosing ellipsoid of a cloud CSV");
    fit->add_option("--cloud", fit_cloud, "input point-cloud CSV")->required();

    std::string eval_x;
    CLI::App* ev = app.add_subcommand("eval", "evaluate one design against the reference workspaces");
    ev->add_option("-x,--design", eval_x, "limb design l1,l2,l3,l4,c")->required();

    std::string opt_algo = "mscfa";
    bool opt_timing = false;
    CLI::App* opt = app.add_subcommand("optimize", "run one seeded optimization and write trace + report");
    opt->add_option("--algo", opt_algo, "mscfa|fa|random (default mscfa)");
    opt->add_flag("--timing", opt_timing, "record wall-clock times (makes outputs run-dependent)");

    std::string bench_algo = "all";
    std::optional<int> bench_runs;
    bool bench_timing = false;
    CLI::App* bench = app.add_subcommand("bench", "repeat seeded runs and write the comparison table");
    bench->add_option("--algo", bench_algo, "mscfa|fa|random|all (default all)");
    bench->add_option("--runs", bench_runs, "runs per algorithm (default: config runs)");
    bench->add_flag("--timing", bench_timing, "record wall-clock times (makes outputs run-dependent)");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        const RunConfig cfg = resolve_config(g);
        if (ws->parsed())
            return cmd_workspace(cfg, ws_mode, ws_n, ws_x.empty() ? DecisionVector{} : parse_design(ws_x));
        if (fit->parsed())
            return cmd_fit(cfg, fit_cloud);
        if (ev->parsed())
            return cmd_eval(cfg, parse_design(eval_x));
        if (opt->parsed())
            return cmd_optimize(cfg, opt_algo, opt_timing);
        if (bench->parsed())
            return cmd_bench(cfg, bench_algo, bench_runs, bench_timing);
    }
    catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    catch (const NumericError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    }
    catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 4;
    }
    return 0;
}
