#ifndef WSOPT_BENCH_HPP
#define WSOPT_BENCH_HPP

#include <wsopt/problem.hpp>
#include <wsopt/solver.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

namespace wsopt {

    // --- algorithm selection ----------------------------------------------

    enum class Algo {
        mscfa,
        firefly,
        random_search
    };

    inline const char* algo_name(Algo a)
    {
        switch (a) {
        case Algo::mscfa: return "mscfa";
        case Algo::firefly: return "fa";
        case Algo::random_search: return "random";
        }
        throw InvalidConfig("algo_name: unknown algorithm id");
    }

    inline Algo algo_from_name(const std::string& name)
    {
        if (name == "mscfa")
            return Algo::mscfa;
        if (name == "fa" || name == "firefly")
            return Algo::firefly;
        if (name == "random" || name == "rs")
            return Algo::random_search;
        throw InvalidConfig("unknown algorithm '" + name + "' (expected mscfa, fa, or random)");
    }

    inline RunResult run_algorithm(Algo a, const Problem& prob, const SolverParams& params, std::uint64_t seed)
    {
        switch (a) {
        case Algo::mscfa: return run_mscfa(prob, params, seed);
        case Algo::firefly: return run_firefly(prob, params, seed);
        case Algo::random_search: return run_random_search(prob, params, seed);
        }
        throw InvalidConfig("run_algorithm: unknown algorithm id");
    }

    // --- problem adapter for the limb-design instance ---------------------

    // Wraps the evaluator and a reference front as a generic problem. Designs
    // whose workspace collapses (for example a support limb that cannot reach
    // the ground anywhere) are reported as penalized rather than fatal: the
    // search treats them as maximally poor and moves on.
    inline Problem make_srl_problem(const SrlEvaluator& evaluator, const ReferenceFront& front)
    {
        Problem p;
        p.lb = decision_lower_bounds();
        p.ub = decision_upper_bounds();
        p.length_dims = 4;
        p.objective_dims = objective_count;
        p.eval = [&evaluator, front](const Eigen::VectorXd& v) {
            EvalResult r;
            try {
                ObjectiveProfile prof = evaluator.evaluate(DecisionVector::from_vector(v));
                score(prof, front, evaluator.settings().igd_order);
                r.phi = prof.phi;
                r.objectives = prof.values();
                r.ok = true;
            }
            catch (const NumericError&) {
                r.phi = big_cost;
                r.objectives = Eigen::VectorXd::Constant(objective_count, big_cost);
                r.ok = false;
            }
            return r;
        };
        return p;
    }

    // --- multi-run harness ------------------------------------------------

    struct BenchRun {
        std::uint64_t seed = 0;
        RunResult result;
    };

    struct BenchReport {
        std::string algorithm;
        int runs = 0;
        int pop = 0;
        int max_iter = 0;
        double best_cost_mean = 0.0;
        double best_cost_sd = 0.0;
        double best_cost_best = 0.0; // cost of the reported solution
        Eigen::VectorXd best_solution;
        double total_length = 0.0;
        double conv_mean = std::numeric_limits<double>::quiet_NaN();
        double conv_sd = std::numeric_limits<double>::quiet_NaN();
        int conv_runs = 0;
        double time_run_mean = 0.0;
        double time_run_sd = 0.0;
        double time_iter_mean = 0.0;
        double best_cost_rescored = std::numeric_limits<double>::quiet_NaN();
        std::vector<std::uint64_t> seeds;
        std::uint64_t config_hash = 0;
    };

    namespace detail {

        // Sorted accumulation keeps the statistics exactly invariant to the
        // order runs are supplied in.
        inline double sorted_mean(std::vector<double> v)
        {
            if (v.empty())
                return std::numeric_limits<double>::quiet_NaN();
            std::sort(v.begin(), v.end());
            double acc = 0.0;
            for (double x : v)
                acc += x;
            return acc / static_cast<double>(v.size());
        }

        inline double sorted_sd(std::vector<double> v)
        {
            if (v.size() < 2)
                return v.empty() ? std::numeric_limits<double>::quiet_NaN() : 0.0;
            const double mu = sorted_mean(v);
            for (double& x : v)
                x = (x - mu) * (x - mu);
            std::sort(v.begin(), v.end());
            double acc = 0.0;
            for (double x : v)
                acc += x;
            return std::sqrt(acc / static_cast<double>(v.size() - 1));
        }

        inline std::string fmt(double x)
        {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", x);
            return buf;
        }

    } // namespace detail

    // Seeds base_seed .. base_seed + n_runs - 1, one full run each. Runs are
    // independent, so they parallelize across threads without affecting the
    // results; each inner run then evaluates serially.
    inline std::vector<BenchRun> repeat_runs(const Problem& prob, Algo algo, const SolverParams& params,
                                             int n_runs, std::uint64_t base_seed, int threads = 1)
    {
        if (n_runs < 1)
            throw InvalidConfig("repeat_runs: need at least one run");
        SolverParams inner = params;
        if (threads > 1)
            inner.threads = 1;
        std::vector<BenchRun> runs(static_cast<size_t>(n_runs));
        parallel_for(0, n_runs, threads, [&](int i) {
            BenchRun& r = runs[static_cast<size_t>(i)];
            r.seed = base_seed + static_cast<std::uint64_t>(i);
            r.result = run_algorithm(algo, prob, inner, r.seed);
        });
        return runs;
    }

    inline BenchReport make_report(Algo algo, const std::vector<BenchRun>& runs, const Problem& prob,
                                   const SolverParams& params,
                                   const std::function<double(const Eigen::VectorXd&)>& rescore = {})
    {
        if (runs.empty())
            throw InvalidConfig("make_report: no runs to aggregate");
        BenchReport rep;
        rep.algorithm = algo_name(algo);
        rep.runs = static_cast<int>(runs.size());
        rep.pop = params.pop;
        rep.max_iter = params.max_iter;

        std::vector<double> costs, convs, times;
        for (const BenchRun& r : runs) {
            costs.push_back(r.result.best.phi);
            if (r.result.trace.conv_iter)
                convs.push_back(static_cast<double>(*r.result.trace.conv_iter));
            double wall = 0.0;
            for (double s : r.result.trace.wall_time_per_iter)
                wall += s;
            times.push_back(wall);
            rep.seeds.push_back(r.seed);
        }
        rep.best_cost_mean = detail::sorted_mean(costs);
        rep.best_cost_sd = detail::sorted_sd(costs);
        rep.conv_runs = static_cast<int>(convs.size());
        if (!convs.empty()) {
            rep.conv_mean = detail::sorted_mean(convs);
            rep.conv_sd = detail::sorted_sd(convs);
        }
        rep.time_run_mean = detail::sorted_mean(times);
        rep.time_run_sd = detail::sorted_sd(times);
        rep.time_iter_mean = rep.time_run_mean / static_cast<double>(params.max_iter + 1);

        const BenchRun* best = &runs.front();
        for (const BenchRun& r : runs)
            if (r.result.best.phi < best->result.best.phi ||
                (r.result.best.phi == best->result.best.phi && r.seed < best->seed))
                best = &r;
        rep.best_cost_best = best->result.best.phi;
        rep.best_solution = best->result.best.x;
        rep.total_length = rep.best_solution.head(prob.length_dims).sum();
        if (rescore)
            rep.best_cost_rescored = rescore(rep.best_solution);
        return rep;
    }

    // Fixed-schema CSV, one row per report. The leading columns follow the
    // benchmark-table layout (algorithm, iterations, population, cost,
    // solution, total length, convergence, timing); provenance columns are
    // appended last.
    inline std::string emit_table(const std::vector<BenchReport>& reports)
    {
        std::string out = "algorithm,max_iter,pop,best_cost_mean,best_cost_sd,l1,l2,l3,l4,c,total_length,"
                          "conv_iter_mean,conv_iter_sd,conv_runs,time_per_run_mean_s,time_per_run_sd_s,"
                          "time_per_iter_mean_s,runs,best_cost_rescored,config_hash,seeds\n";
        char hash[32];
        for (const BenchReport& r : reports) {
            out += r.algorithm;
            out += ',' + std::to_string(r.max_iter) + ',' + std::to_string(r.pop);
            out += ',' + detail::fmt(r.best_cost_mean) + ',' + detail::fmt(r.best_cost_sd);
            for (int k = 0; k < 5; ++k)
                out += ',' + (k < r.best_solution.size() ? detail::fmt(r.best_solution[k]) : std::string());
            out += ',' + detail::fmt(r.total_length);
            out += ',' + detail::fmt(r.conv_mean) + ',' + detail::fmt(r.conv_sd) + ',' +
                   std::to_string(r.conv_runs);
            out += ',' + detail::fmt(r.time_run_mean) + ',' + detail::fmt(r.time_run_sd) + ',' +
                   detail::fmt(r.time_iter_mean);
            out += ',' + std::to_string(r.runs);
            out += ',' + detail::fmt(r.best_cost_rescored);
            std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(r.config_hash));
            out += ',';
            out += hash;
            out += ',';
            for (size_t i = 0; i < r.seeds.size(); ++i)
                out += (i ? ";" : "") + std::to_string(r.seeds[i]);
            out += '\n';
        }
        return out;
    }

    // Per-iteration trace of one run. Columns after the fixed three name the
    // decision dimensions: the limb instance gets its link-length names,
    // anything else generic x1..xd. The preamble (comment lines, e.g. from
    // stamp_preamble) goes in front of the header.
    inline std::string trace_csv(const RunTrace& trace, const Problem& prob, const std::string& preamble = "")
    {
        std::string out = preamble;
        out += "iter,best_phi,wall_ms";
        const Eigen::Index d = prob.dims();
        if (prob.length_dims == 4 && d == 5)
            out += ",l1,l2,l3,l4,c";
        else
            for (Eigen::Index k = 0; k < d; ++k)
                out += ",x" + std::to_string(k + 1);
        out += '\n';
        for (size_t t = 0; t < trace.best_phi_per_iter.size(); ++t) {
            out += std::to_string(t);
            out += ',' + detail::fmt(trace.best_phi_per_iter[t]);
            out += ',' + detail::fmt(1000.0 * trace.wall_time_per_iter[t]);
            const Eigen::VectorXd& x = trace.best_x_per_iter[t];
            for (Eigen::Index k = 0; k < x.size(); ++k)
                out += ',' + detail::fmt(x[k]);
            out += '\n';
        }
        return out;
    }

    // One CSV per run: <prefix>_seed<seed>.csv under dir, each stamped with
    // the config hash and its own seed.
    inline std::vector<std::filesystem::path> emit_traces(const std::vector<BenchRun>& runs, const Problem& prob,
                                                          const std::filesystem::path& dir,
                                                          const std::string& prefix, std::uint64_t config_hash)
    {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            throw IoError("emit_traces: cannot create directory " + dir.string());
        std::vector<std::filesystem::path> written;
        for (const BenchRun& r : runs) {
            const std::filesystem::path file = dir / (prefix + "_seed" + std::to_string(r.seed) + ".csv");
            std::ofstream os(file, std::ios::binary);
            if (!os)
                throw IoError("emit_traces: cannot open " + file.string());
            os << trace_csv(r.result.trace, prob, stamp_preamble(config_hash, r.seed));
            if (!os)
                throw IoError("emit_traces: write failed for " + file.string());
            written.push_back(file);
        }
        return written;
    }

} // namespace wsopt

#endif
