#include <catch2/catch_amalgamated.hpp>

#include <wsopt/config_json.hpp>
#include <wsopt/io.hpp>

#include <filesystem>
#include <fstream>

using namespace wsopt;

namespace {

    struct TempDir {
        std::filesystem::path path;
        TempDir()
        {
            path = std::filesystem::temp_directory_path() / "wsopt_io_test";
            std::filesystem::remove_all(path);
            std::filesystem::create_directories(path);
        }
        ~TempDir() { std::filesystem::remove_all(path); }
    };

    void spit(const std::filesystem::path& p, const std::string& text)
    {
        std::ofstream os(p, std::ios::binary);
        REQUIRE(os);
        os << text;
    }

} // namespace

// --- config schema ---------------------------------------------------------

TEST_CASE("the default config round-trips through JSON unchanged")
{
    const RunConfig def;
    const RunConfig back = config_from_json(config_to_json(def));
    CHECK(config_to_json(back) == config_to_json(def));
    CHECK(config_hash(back) == config_hash(def));
}

TEST_CASE("a partial config overrides only what it names")
{
    const nlohmann::json j = {{"solver", {{"pop", 27}}}, {"seed", 9}};
    const RunConfig c = config_from_json(j);
    CHECK(c.solver.pop == 27);
    CHECK(c.eval.seed == 9);
    CHECK(c.solver.max_iter == RunConfig{}.solver.max_iter);
    CHECK(c.eval.sampling.n == RunConfig{}.eval.sampling.n);
}

TEST_CASE("worker count set at the top level reaches the solver")
{
    const nlohmann::json j = {{"threads", 3}};
    const RunConfig c = config_from_json(j);
    CHECK(c.eval.threads == 3);
    CHECK(c.solver.threads == 3);
}

TEST_CASE("unknown keys are rejected at every nesting level")
{
    CHECK_THROWS_AS(config_from_json({{"speling_mistake", 1}}), InvalidConfig);
    CHECK_THROWS_AS(config_from_json({{"solver", {{"populaton", 81}}}}), InvalidConfig);
    CHECK_THROWS_AS(config_from_json({{"body", {{"rho_lni", 0.2}}}}), InvalidConfig);
    CHECK_THROWS_AS(config_from_json({{"sampling", {{"m", 10}}}}), InvalidConfig);
}

TEST_CASE("unsupported schema versions are rejected")
{
    CHECK_THROWS_AS(config_from_json({{"schema", 2}}), InvalidConfig);
    CHECK(config_from_json({{"schema", 1}}).schema == 1);
}

TEST_CASE("config validation rejects inconsistent values")
{
    CHECK_THROWS_AS(config_from_json({{"runs", 0}}), InvalidConfig);
    CHECK_THROWS_AS(config_from_json({{"front_budget", 0}}), InvalidConfig);
    CHECK_THROWS_AS(config_from_json({{"igd_order", 0.5}}), InvalidConfig);
    CHECK_THROWS_AS(config_from_json({{"sampling", {{"n_opt", 2}}}}), InvalidConfig);
    CHECK_THROWS_AS(config_from_json({{"mvee", {{"tol", -1.0}}}}), InvalidConfig);
    CHECK_THROWS_AS(config_from_json({{"body", {{"rho_lin", -0.1}}}}), InvalidConfig);
    CHECK_THROWS_AS(config_from_json({{"body", {{"total_length_target", 0.0}}}}), InvalidConfig);
    CHECK_THROWS_AS(config_from_json({{"solver", {{"pop", 2}}}}), InvalidConfig);
    // Limits must come as a consistent pair.
    CHECK_THROWS_AS(
        config_from_json(
            {{"body", {{"joint_limits_lo", {0.0, 0.0, 0.0, 0.0}}, {"joint_limits_hi", {-1.0, 1.0, 1.0, 1.0}}}}}),
        InvalidConfig);
}

TEST_CASE("wrong JSON types are rejected with the offending path")
{
    try {
        config_from_json({{"solver", {{"pop", "eighty-one"}}}});
        FAIL("expected InvalidConfig");
    }
    catch (const InvalidConfig& e) {
        CHECK(std::string(e.what()).find("solver.pop") != std::string::npos);
    }
}

TEST_CASE("the config hash identifies the experiment, not the execution environment")
{
    const RunConfig def;
    RunConfig moved = def;
    moved.eval.seed = 999;
    moved.eval.threads = 8;
    moved.solver.threads = 8;
    moved.out_dir = "elsewhere";
    CHECK(config_hash(moved) == config_hash(def));

    RunConfig different = def;
    different.solver.gamma = 2.0;
    CHECK(config_hash(different) != config_hash(def));
    different = def;
    different.body.rho_lin = 0.3;
    CHECK(config_hash(different) != config_hash(def));
    different = def;
    different.eval.sampling.n_opt = 1234;
    CHECK(config_hash(different) != config_hash(def));
}

TEST_CASE("configs load from disk with I/O and parse errors kept apart")
{
    TempDir tmp;
    const auto good = tmp.path / "good.json";
    spit(good, "{\"runs\": 4}\n");
    CHECK(load_config(good).runs == 4);

    const auto broken = tmp.path / "broken.json";
    spit(broken, "{\"runs\": \n");
    CHECK_THROWS_AS(load_config(broken), InvalidConfig);

    CHECK_THROWS_AS(load_config(tmp.path / "absent.json"), IoError);
}

// --- point-cloud files -----------------------------------------------------

TEST_CASE("point clouds survive a CSV round-trip bit for bit")
{
    TempDir tmp;
    Eigen::Matrix3Xd pts(3, 4);
    pts << 0.1, -2.5, 1.0 / 3.0, 1e-17, //
        0.2, 3.14159, -0.7, 2.0 / 7.0,  //
        -0.3, 1e3, 0.0, -1.0 / 9.0;
    const auto file = tmp.path / "cloud.csv";
    write_text_file(file, cloud_csv(pts, 0xabcULL, 5, "srl_upper"));
    const Eigen::Matrix3Xd back = read_cloud_csv(file);
    REQUIRE(back.cols() == 4);
    CHECK(back == pts); // 17 significant digits: exact double round-trip

    const std::string text = cloud_csv(pts, 0xabcULL, 5, "srl_upper");
    CHECK(text.find("# mode srl_upper\n") != std::string::npos);
    CHECK(text.find("# config_hash 0000000000000abc\n") != std::string::npos);
    CHECK(text.find("# seed 5\n") != std::string::npos);
    CHECK(text.find("x,y,z\n") != std::string::npos);
}

TEST_CASE("malformed cloud files report the offending line")
{
    TempDir tmp;
    const auto file = tmp.path / "bad.csv";
    spit(file, "x,y,z\n1.0,2.0,3.0\n4.0,oops,6.0\n");
    try {
        read_cloud_csv(file);
        FAIL("expected IoError");
    }
    catch (const IoError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    const auto empty = tmp.path / "empty.csv";
    spit(empty, "x,y,z\n");
    CHECK_THROWS_AS(read_cloud_csv(empty), IoError);
    CHECK_THROWS_AS(read_cloud_csv(tmp.path / "absent.csv"), IoError);
}

TEST_CASE("text files land in directories created on demand")
{
    TempDir tmp;
    const auto nested = tmp.path / "a" / "b" / "c.txt";
    write_text_file(nested, "payload");
    std::ifstream is(nested);
    std::string word;
    is >> word;
    CHECK(word == "payload");
}

// --- JSON reports ----------------------------------------------------------

TEST_CASE("ellipsoid JSON carries the full principal-axes form")
{
    Ellipsoid e;
    e.center = Vec3(1.0, 2.0, 3.0);
    e.semi_axes = Vec3(3.0, 2.0, 1.0);
    e.axes = Mat3::Identity();
    e.shape = e.semi_axes.array().square().inverse().matrix().asDiagonal();
    const nlohmann::json j = ellipsoid_json(e);
    CHECK(j.at("center") == nlohmann::json({1.0, 2.0, 3.0}));
    CHECK(j.at("semi_axes") == nlohmann::json({3.0, 2.0, 1.0}));
    CHECK(j.at("volume").get<double>() == Catch::Approx(e.volume()));
    CHECK(j.at("axes").size() == 3);
    CHECK(j.at("shape").size() == 3);
}

TEST_CASE("reference fronts round-trip through JSON and reject junk")
{
    ReferenceFront f;
    for (int k = 0; k < 11; ++k)
        f.pf[k] = 0.25 * k;
    f.provenance = ReferenceFront::Provenance::estimated;
    f.budget = 123;
    f.seed = 77;
    const ReferenceFront back = front_from_json(front_json(f));
    CHECK(back.pf == f.pf);
    CHECK(back.provenance == f.provenance);
    CHECK(back.budget == f.budget);
    CHECK(back.seed == f.seed);

    nlohmann::json j = front_json(f);
    j["surprise"] = 1;
    CHECK_THROWS_AS(front_from_json(j), InvalidConfig);
    j = front_json(f);
    j["pf"] = {1.0, 2.0};
    CHECK_THROWS_AS(front_from_json(j), InvalidConfig);
    j = front_json(f);
    j["provenance"] = "guessed";
    CHECK_THROWS_AS(front_from_json(j), InvalidConfig);
}

// --- front cache -----------------------------------------------------------

TEST_CASE("the front cache is reused when valid and rebuilt when stale")
{
    TempDir tmp;
    BodyParams cfg;
    EvalSettings s;
    s.sampling.n = 500;
    s.sampling.n_opt = 200;
    s.seed = 3;
    const SrlEvaluator ev(cfg, s);
    const auto cache = tmp.path / "front_cache.json";

    const ReferenceFront first = load_or_estimate_front(ev, 60, 3, 0x77ULL, cache);
    REQUIRE(std::filesystem::exists(cache));
    const auto stamp = std::filesystem::last_write_time(cache);

    // Matching key: served from disk, file untouched.
    const ReferenceFront second = load_or_estimate_front(ev, 60, 3, 0x77ULL, cache);
    CHECK(second.pf == first.pf);
    CHECK(std::filesystem::last_write_time(cache) == stamp);

    // Key mismatch on any component forces a recompute and a rewrite.
    const ReferenceFront rebudget = load_or_estimate_front(ev, 80, 3, 0x77ULL, cache);
    CHECK(rebudget.budget == 80);
    CHECK(front_from_json(read_json_file(cache).at("front")).budget == 80);

    // A corrupt cache is replaced rather than trusted.
    spit(cache, "not json");
    const ReferenceFront healed = load_or_estimate_front(ev, 60, 3, 0x77ULL, cache);
    CHECK(healed.pf == first.pf);

    // Empty path disables caching entirely.
    const ReferenceFront uncached = load_or_estimate_front(ev, 60, 3, 0x77ULL, {});
    CHECK(uncached.pf == first.pf);
}
