#ifndef WSOPT_CONFIG_JSON_HPP
#define WSOPT_CONFIG_JSON_HPP

#include <wsopt/problem.hpp>
#include <wsopt/solver.hpp>

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

namespace wsopt {

    // Everything one invocation depends on. The JSON form carries a schema
    // version, rejects unknown keys at every nesting level, and hashes to a
    // single 64-bit value that all output artifacts embed.
    struct RunConfig {
        int schema = 1;
        BodyParams body;
        EvalSettings eval;
        SolverParams solver;
        int runs = 10;            // benchmark repetitions
        int front_budget = 20000; // designs sampled to estimate the reference front
        std::string out_dir = "out";
    };

    namespace detail {

        [[noreturn]] inline void cfg_bad(const std::string& where, const std::string& what)
        {
            throw InvalidConfig(where + ": " + what);
        }

        inline double cfg_double(const nlohmann::json& v, const std::string& where)
        {
            if (!v.is_number())
                cfg_bad(where, "expected a number");
            return v.get<double>();
        }

        inline int cfg_int(const nlohmann::json& v, const std::string& where)
        {
            if (!v.is_number_integer())
                cfg_bad(where, "expected an integer");
            return v.get<int>();
        }

        inline std::uint64_t cfg_u64(const nlohmann::json& v, const std::string& where)
        {
            if (v.is_number_unsigned())
                return v.get<std::uint64_t>();
            if (v.is_number_integer() && v.get<long long>() >= 0)
                return static_cast<std::uint64_t>(v.get<long long>());
            cfg_bad(where, "expected a non-negative integer");
        }

        inline bool cfg_bool(const nlohmann::json& v, const std::string& where)
        {
            if (!v.is_boolean())
                cfg_bad(where, "expected a boolean");
            return v.get<bool>();
        }

        inline std::string cfg_string(const nlohmann::json& v, const std::string& where)
        {
            if (!v.is_string())
                cfg_bad(where, "expected a string");
            return v.get<std::string>();
        }

        inline Vec3 cfg_vec3(const nlohmann::json& v, const std::string& where)
        {
            if (!v.is_array() || v.size() != 3)
                cfg_bad(where, "expected an array of 3 numbers");
            Vec3 out;
            for (int i = 0; i < 3; ++i)
                out[i] = cfg_double(v[static_cast<size_t>(i)], where);
            return out;
        }

        template <size_t N>
        std::array<double, N> cfg_darray(const nlohmann::json& v, const std::string& where)
        {
            if (!v.is_array() || v.size() != N)
                cfg_bad(where, "expected an array of " + std::to_string(N) + " numbers");
            std::array<double, N> out{};
            for (size_t i = 0; i < N; ++i)
                out[i] = cfg_double(v[i], where);
            return out;
        }

        inline std::array<Vec3, 4> cfg_axes4(const nlohmann::json& v, const std::string& where)
        {
            if (!v.is_array() || v.size() != 4)
                cfg_bad(where, "expected an array of 4 axis vectors");
            std::array<Vec3, 4> out;
            for (size_t i = 0; i < 4; ++i)
                out[i] = cfg_vec3(v[i], where + "[" + std::to_string(i) + "]");
            return out;
        }

        // Pulls known keys out of one JSON object, tracks what was consumed,
        // and rejects anything left over.
        class ObjReader {
        public:
            ObjReader(const nlohmann::json& j, std::string where) : j_(j), where_(std::move(where))
            {
                if (!j_.is_object())
                    cfg_bad(where_, "expected an object");
            }

            template <typename T, typename Conv>
            void field(const char* key, T& out, Conv conv)
            {
                const auto it = j_.find(key);
                if (it == j_.end())
                    return;
                seen_.insert(key);
                out = conv(*it, where_ + "." + key);
            }

            void field(const char* key, double& out) { field(key, out, cfg_double); }
            void field(const char* key, int& out) { field(key, out, cfg_int); }
            void field(const char* key, std::uint64_t& out) { field(key, out, cfg_u64); }
            void field(const char* key, bool& out) { field(key, out, cfg_bool); }
            void field(const char* key, std::string& out) { field(key, out, cfg_string); }
            void field(const char* key, Vec3& out) { field(key, out, cfg_vec3); }
            void field(const char* key, std::array<double, 2>& out) { field(key, out, cfg_darray<2>); }
            void field(const char* key, std::array<double, 4>& out) { field(key, out, cfg_darray<4>); }
            void field(const char* key, std::array<Vec3, 4>& out) { field(key, out, cfg_axes4); }

            // Nested object; returns nullptr when the key is absent.
            const nlohmann::json* object(const char* key)
            {
                const auto it = j_.find(key);
                if (it == j_.end())
                    return nullptr;
                seen_.insert(key);
                return &*it;
            }

            void finish() const
            {
                for (const auto& [key, value] : j_.items()) {
                    (void)value;
                    if (!seen_.count(key))
                        cfg_bad(where_, "unknown key '" + key + "'");
                }
            }

        private:
            const nlohmann::json& j_;
            std::string where_;
            std::set<std::string> seen_;
        };

        inline nlohmann::json axes4_json(const std::array<Vec3, 4>& a)
        {
            nlohmann::json out = nlohmann::json::array();
            for (const Vec3& v : a)
                out.push_back({v[0], v[1], v[2]});
            return out;
        }

        template <size_t N>
        nlohmann::json darray_json(const std::array<double, N>& a)
        {
            nlohmann::json out = nlohmann::json::array();
            for (double v : a)
                out.push_back(v);
            return out;
        }

    } // namespace detail

    // Fully resolved canonical form: every field appears, defaults included,
    // keys alphabetical. The config hash is computed over exactly this.
    inline nlohmann::json config_to_json(const RunConfig& c)
    {
        const BodyParams& b = c.body;
        const SolverParams& s = c.solver;
        nlohmann::json j;
        j["schema"] = c.schema;
        j["seed"] = c.eval.seed;
        j["threads"] = c.eval.threads;
        j["out_dir"] = c.out_dir;
        j["runs"] = c.runs;
        j["front_budget"] = c.front_budget;
        j["igd_order"] = c.eval.igd_order;
        j["sampling"] = {{"n", c.eval.sampling.n}, {"n_opt", c.eval.sampling.n_opt}};
        j["mvee"] = {{"tol", c.eval.mvee.tol}, {"max_iter", c.eval.mvee.max_iter}};
        j["mvee_opt"] = {{"tol", c.eval.mvee_opt.tol}, {"max_iter", c.eval.mvee_opt.max_iter}};
        j["solver"] = {{"pop", s.pop},
                       {"max_iter", s.max_iter},
                       {"alpha", s.alpha},
                       {"alpha_final", s.alpha_final},
                       {"I0", s.I0},
                       {"I_min", s.I_min},
                       {"gamma", s.gamma},
                       {"beta0", s.beta0},
                       {"beta_min", s.beta_min},
                       {"eta", s.eta},
                       {"k_replace", s.k_replace},
                       {"conv_threshold", s.conv_threshold},
                       {"conv_window", s.conv_window}};
        j["body"] = {{"mount", {b.mount[0], b.mount[1], b.mount[2]}},
                     {"joint_axes", detail::axes4_json(b.joint_axes)},
                     {"joint_limits_lo", detail::darray_json(b.joint_limits_lo)},
                     {"joint_limits_hi", detail::darray_json(b.joint_limits_hi)},
                     {"lower_locked", detail::darray_json(b.lower_locked)},
                     {"shoulder", {b.shoulder[0], b.shoulder[1], b.shoulder[2]}},
                     {"upper_arm", b.upper_arm},
                     {"forearm", b.forearm},
                     {"arm_axes", detail::axes4_json(b.arm_axes)},
                     {"arm_limits_lo", detail::darray_json(b.arm_limits_lo)},
                     {"arm_limits_hi", detail::darray_json(b.arm_limits_hi)},
                     {"cane_pivot", {b.cane_pivot[0], b.cane_pivot[1], b.cane_pivot[2]}},
                     {"cane_length", b.cane_length},
                     {"cane_sweep_sagittal", b.cane_sweep_sagittal},
                     {"cane_sweep_lateral", b.cane_sweep_lateral},
                     {"total_length_target", b.total_length_target},
                     {"rho_lin", b.rho_lin},
                     {"module_masses", detail::darray_json(b.module_masses)},
                     {"torque_limits", detail::darray_json(b.torque_limits)},
                     {"kappa", b.kappa},
                     {"ground_offset", b.ground_offset},
                     {"ground_filter", b.ground_filter},
                     {"sts_height_start", b.sts_height_start},
                     {"sts_height_end", b.sts_height_end},
                     {"sts_pose_count", b.sts_pose_count},
                     {"obl_eps", b.obl_eps},
                     {"min_thickness", b.min_thickness}};
        return j;
    }

    // Value-range checks over a fully assembled configuration; called by
    // config_from_json and again by the CLI after flag overrides.
    inline void validate_config(const RunConfig& c)
    {
        using detail::cfg_bad;
        const BodyParams& b = c.body;
        if (c.schema != 1)
            cfg_bad("config.schema", "unsupported schema version " + std::to_string(c.schema));
        if (c.eval.sampling.n < 4 || c.eval.sampling.n_opt < 4)
            cfg_bad("config.sampling", "n and n_opt must be >= 4");
        if (!(c.eval.mvee.tol > 0.0) || !(c.eval.mvee_opt.tol > 0.0))
            cfg_bad("config.mvee", "tol must be > 0");
        if (c.eval.mvee.max_iter < 1 || c.eval.mvee_opt.max_iter < 1)
            cfg_bad("config.mvee", "max_iter must be >= 1");
        if (!(c.eval.igd_order >= 1.0))
            cfg_bad("config.igd_order", "must be >= 1");
        if (c.eval.threads < 1)
            cfg_bad("config.threads", "must be >= 1");
        if (c.runs < 1)
            cfg_bad("config.runs", "must be >= 1");
        if (c.front_budget < 1)
            cfg_bad("config.front_budget", "must be >= 1");
        for (int i = 0; i < 4; ++i) {
            if (!(b.joint_limits_lo[i] <= b.joint_limits_hi[i]))
                cfg_bad("config.body.joint_limits", "lo must not exceed hi");
            if (!(b.arm_limits_lo[i] <= b.arm_limits_hi[i]))
                cfg_bad("config.body.arm_limits", "lo must not exceed hi");
            if (b.module_masses[i] < 0.0 || b.torque_limits[i] < 0.0)
                cfg_bad("config.body", "module masses and torque limits must be >= 0");
        }
        if (!(b.upper_arm > 0.0) || !(b.forearm > 0.0) || !(b.cane_length > 0.0))
            cfg_bad("config.body", "reference segment lengths must be > 0");
        if (!(b.total_length_target > 0.0))
            cfg_bad("config.body.total_length_target", "must be > 0");
        if (b.rho_lin < 0.0)
            cfg_bad("config.body.rho_lin", "must be >= 0");
        if (!(b.kappa > 0.0))
            cfg_bad("config.body.kappa", "must be > 0");
        if (b.sts_pose_count < 2)
            cfg_bad("config.body.sts_pose_count", "must be >= 2");
        if (!(b.obl_eps > 0.0))
            cfg_bad("config.body.obl_eps", "must be > 0");
        if (!(b.min_thickness > 0.0))
            cfg_bad("config.body.min_thickness", "must be > 0");
        c.solver.validate(); // throws InvalidConfig on bad solver params
    }

    inline RunConfig config_from_json(const nlohmann::json& j)
    {
        RunConfig c;
        detail::ObjReader top(j, "config");
        top.field("schema", c.schema);
        top.field("seed", c.eval.seed);
        top.field("threads", c.eval.threads);
        top.field("out_dir", c.out_dir);
        top.field("runs", c.runs);
        top.field("front_budget", c.front_budget);
        top.field("igd_order", c.eval.igd_order);
        if (const nlohmann::json* s = top.object("sampling")) {
            detail::ObjReader r(*s, "config.sampling");
            r.field("n", c.eval.sampling.n);
            r.field("n_opt", c.eval.sampling.n_opt);
            r.finish();
        }
        if (const nlohmann::json* s = top.object("mvee")) {
            detail::ObjReader r(*s, "config.mvee");
            r.field("tol", c.eval.mvee.tol);
            r.field("max_iter", c.eval.mvee.max_iter);
            r.finish();
        }
        if (const nlohmann::json* s = top.object("mvee_opt")) {
            detail::ObjReader r(*s, "config.mvee_opt");
            r.field("tol", c.eval.mvee_opt.tol);
            r.field("max_iter", c.eval.mvee_opt.max_iter);
            r.finish();
        }
        if (const nlohmann::json* s = top.object("solver")) {
            SolverParams& p = c.solver;
            detail::ObjReader r(*s, "config.solver");
            r.field("pop", p.pop);
            r.field("max_iter", p.max_iter);
            r.field("alpha", p.alpha);
            r.field("alpha_final", p.alpha_final);
            r.field("I0", p.I0);
            r.field("I_min", p.I_min);
            r.field("gamma", p.gamma);
            r.field("beta0", p.beta0);
            r.field("beta_min", p.beta_min);
            r.field("eta", p.eta);
            r.field("k_replace", p.k_replace);
            r.field("conv_threshold", p.conv_threshold);
            r.field("conv_window", p.conv_window);
            r.finish();
        }
        if (const nlohmann::json* s = top.object("body")) {
            BodyParams& b = c.body;
            detail::ObjReader r(*s, "config.body");
            r.field("mount", b.mount);
            r.field("joint_axes", b.joint_axes);
            r.field("joint_limits_lo", b.joint_limits_lo);
            r.field("joint_limits_hi", b.joint_limits_hi);
            r.field("lower_locked", b.lower_locked);
            r.field("shoulder", b.shoulder);
            r.field("upper_arm", b.upper_arm);
            r.field("forearm", b.forearm);
            r.field("arm_axes", b.arm_axes);
            r.field("arm_limits_lo", b.arm_limits_lo);
            r.field("arm_limits_hi", b.arm_limits_hi);
            r.field("cane_pivot", b.cane_pivot);
            r.field("cane_length", b.cane_length);
            r.field("cane_sweep_sagittal", b.cane_sweep_sagittal);
            r.field("cane_sweep_lateral", b.cane_sweep_lateral);
            r.field("total_length_target", b.total_length_target);
            r.field("rho_lin", b.rho_lin);
            r.field("module_masses", b.module_masses);
            r.field("torque_limits", b.torque_limits);
            r.field("kappa", b.kappa);
            r.field("ground_offset", b.ground_offset);
            r.field("ground_filter", b.ground_filter);
            r.field("sts_height_start", b.sts_height_start);
            r.field("sts_height_end", b.sts_height_end);
            r.field("sts_pose_count", b.sts_pose_count);
            r.field("obl_eps", b.obl_eps);
            r.field("min_thickness", b.min_thickness);
            r.finish();
        }
        top.finish();
        c.solver.threads = c.eval.threads;
        validate_config(c);
        return c;
    }

    // Missing or unreadable file is an I/O failure; malformed JSON or a schema
    // violation is a configuration error. Both fire before any computation.
    inline RunConfig load_config(const std::filesystem::path& path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw IoError("cannot open config " + path.string());
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(is);
        }
        catch (const nlohmann::json::exception& e) {
            throw InvalidConfig("config " + path.string() + ": " + e.what());
        }
        return config_from_json(j);
    }

    // FNV-1a over the canonical serialized form; stable across runs and
    // platforms for the same effective configuration. Execution-environment
    // fields are excluded: outputs must be byte-identical across --threads,
    // the seed is reported alongside the hash in every artifact, and moving
    // the output directory does not change what was computed.
    inline std::uint64_t config_hash(const RunConfig& c)
    {
        nlohmann::json j = config_to_json(c);
        j.erase("seed");
        j.erase("threads");
        j.erase("out_dir");
        const std::string s = j.dump();
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

} // namespace wsopt

#endif
