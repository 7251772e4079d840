#ifndef WSOPT_IO_HPP
#define WSOPT_IO_HPP

#include <wsopt/problem.hpp>

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace wsopt {

    namespace detail {

        inline std::string g17(double x)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            return buf;
        }

        template <typename Derived>
        nlohmann::json vector_json(const Eigen::MatrixBase<Derived>& v)
        {
            nlohmann::json a = nlohmann::json::array();
            for (Eigen::Index i = 0; i < v.size(); ++i)
                a.push_back(v[i]);
            return a;
        }

        template <typename Derived>
        nlohmann::json matrix_rows_json(const Eigen::MatrixBase<Derived>& m)
        {
            nlohmann::json rows = nlohmann::json::array();
            for (Eigen::Index r = 0; r < m.rows(); ++r)
                rows.push_back(vector_json(m.row(r).transpose()));
            return rows;
        }

    } // namespace detail

    inline void write_text_file(const std::filesystem::path& path, const std::string& text)
    {
        if (path.has_parent_path()) {
            std::error_code ec;
            std::filesystem::create_directories(path.parent_path(), ec);
            if (ec)
                throw IoError("cannot create directory " + path.parent_path().string());
        }
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw IoError("cannot open " + path.string() + " for writing");
        os << text;
        if (!os)
            throw IoError("write failed for " + path.string());
    }

    // --- point-cloud CSV -------------------------------------------------

    inline std::string cloud_csv(const Eigen::Matrix3Xd& pts, std::uint64_t config_hash, std::uint64_t seed,
                                 const std::string& label)
    {
        std::string out = "# wsopt cloud v1\n# mode " + label + "\n";
        out += stamp_preamble(config_hash, seed);
        out += "x,y,z\n";
        for (Eigen::Index i = 0; i < pts.cols(); ++i) {
            out += detail::g17(pts(0, i));
            out += ',' + detail::g17(pts(1, i));
            out += ',' + detail::g17(pts(2, i));
            out += '\n';
        }
        return out;
    }

    inline Eigen::Matrix3Xd read_cloud_csv(const std::filesystem::path& path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw IoError("cannot open " + path.string());
        std::vector<Vec3> rows;
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#')
                continue;
            if (line.rfind("x,", 0) == 0)
                continue; // header row
            Vec3 p;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &p.x(), &p.y(), &p.z()) != 3)
                throw IoError("cloud csv " + path.string() + ": line " + std::to_string(lineno) +
                              ": expected three comma-separated numbers");
            rows.push_back(p);
        }
        if (rows.empty())
            throw IoError("cloud csv " + path.string() + ": no data rows");
        Eigen::Matrix3Xd pts(3, static_cast<Eigen::Index>(rows.size()));
        for (size_t i = 0; i < rows.size(); ++i)
            pts.col(static_cast<Eigen::Index>(i)) = rows[i];
        return pts;
    }

    // --- JSON views of the core value types ------------------------------

    // "axes" lists the principal directions as vectors, axes[i] paired with
    // semi_axes[i]; "shape" is the quadratic-form matrix by rows.
    inline nlohmann::json ellipsoid_json(const Ellipsoid& e)
    {
        nlohmann::json axes = nlohmann::json::array();
        for (int i = 0; i < 3; ++i)
            axes.push_back(detail::vector_json(e.axes.col(i)));
        return {{"center", detail::vector_json(e.center)},
                {"shape", detail::matrix_rows_json(e.shape)},
                {"semi_axes", detail::vector_json(e.semi_axes)},
                {"axes", axes},
                {"volume", e.volume()}};
    }

    inline nlohmann::json fit_report_json(const FitReport& r)
    {
        return {{"iterations", r.iterations},
                {"duality_gap", r.duality_gap},
                {"contained_fraction", r.contained_fraction},
                {"status", r.status == FitStatus::converged ? "converged" : "max_iter_exceeded"}};
    }

    inline nlohmann::json profile_json(const ObjectiveProfile& p)
    {
        return {{"upper", detail::vector_json(p.upper)},
                {"lower", detail::vector_json(p.lower)},
                {"f5", p.f5},
                {"f6", p.f6},
                {"f7", p.f7},
                {"support_force", p.support_force},
                {"D", detail::vector_json(p.D)},
                {"phi", p.phi},
                {"scored", p.scored},
                {"flags",
                 {{"upper_axis_ambiguous", p.upper_axis_ambiguous},
                  {"lower_axis_ambiguous", p.lower_axis_ambiguous},
                  {"upper_obl_clamped", p.upper_obl_clamped},
                  {"lower_obl_clamped", p.lower_obl_clamped},
                  {"sts_singular_pose", p.sts_singular_pose}}}};
    }

    inline nlohmann::json front_json(const ReferenceFront& f)
    {
        return {{"pf", detail::vector_json(f.pf)},
                {"provenance", f.provenance == ReferenceFront::Provenance::estimated ? "estimated" : "user_supplied"},
                {"budget", f.budget},
                {"seed", f.seed}};
    }

    inline ReferenceFront front_from_json(const nlohmann::json& j)
    {
        if (!j.is_object())
            throw InvalidConfig("front: expected an object");
        for (const auto& [key, value] : j.items()) {
            (void)value;
            if (key != "pf" && key != "provenance" && key != "budget" && key != "seed")
                throw InvalidConfig("front: unknown key '" + key + "'");
        }
        ReferenceFront f;
        const nlohmann::json& pf = j.at("pf");
        if (!pf.is_array() || pf.size() != 11)
            throw InvalidConfig("front: pf must be an array of 11 numbers");
        for (int i = 0; i < 11; ++i)
            f.pf[i] = pf[static_cast<size_t>(i)].get<double>();
        const std::string prov = j.value("provenance", std::string("user_supplied"));
        if (prov == "estimated")
            f.provenance = ReferenceFront::Provenance::estimated;
        else if (prov == "user_supplied")
            f.provenance = ReferenceFront::Provenance::user_supplied;
        else
            throw InvalidConfig("front: unknown provenance '" + prov + "'");
        f.budget = j.value("budget", 0);
        f.seed = j.value("seed", std::uint64_t{0});
        return f;
    }

    inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& j)
    {
        write_text_file(path, j.dump(2) + "\n");
    }

    inline nlohmann::json read_json_file(const std::filesystem::path& path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw IoError("cannot open " + path.string());
        try {
            return nlohmann::json::parse(is);
        }
        catch (const nlohmann::json::exception& e) {
            throw IoError("cannot parse " + path.string() + ": " + e.what());
        }
    }

    // --- reference-front cache -------------------------------------------
    //
    // The estimated front depends only on (config, budget, seed), so repeated
    // CLI invocations reuse a cached copy keyed by exactly that triple. A
    // missing, stale, or unreadable cache is recomputed and rewritten; an
    // empty path disables caching.

    inline ReferenceFront load_or_estimate_front(const SrlEvaluator& evaluator, int budget, std::uint64_t seed,
                                                 std::uint64_t config_hash, const std::filesystem::path& cache_path)
    {
        const std::string hex = detail::hash_hex(config_hash);
        if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
            try {
                const nlohmann::json j = read_json_file(cache_path);
                if (j.value("schema", std::string()) == "wsopt-front-1" &&
                    j.value("config_hash", std::string()) == hex && j.value("budget", -1) == budget &&
                    j.value("seed", std::uint64_t{0}) == seed) {
                    ReferenceFront f = front_from_json(j.at("front"));
                    if (f.provenance == ReferenceFront::Provenance::estimated && f.budget == budget &&
                        f.seed == seed)
                        return f;
                }
            }
            catch (const Error&) {
                // fall through to recompute
            }
            catch (const nlohmann::json::exception&) {
                // fall through to recompute
            }
        }
        const ReferenceFront f = estimate_reference_front(evaluator, budget, seed);
        if (!cache_path.empty()) {
            const nlohmann::json j = {{"schema", "wsopt-front-1"},
                                      {"config_hash", hex},
                                      {"budget", budget},
                                      {"seed", seed},
                                      {"front", front_json(f)}};
            write_json_file(cache_path, j);
        }
        return f;
    }

} // namespace wsopt

#endif
