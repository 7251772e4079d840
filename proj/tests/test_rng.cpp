#include <wsopt/rng.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

using namespace wsopt;

TEST_CASE("mix64 matches the published splitmix64 sequence")
{
    // Frozen from an independent implementation of the public-domain
    // splitmix64 reference: outputs for seed 0 are mix64 of the running
    // state 0, golden, 2*golden, ...
    CHECK(rng::mix64(0) == 0xE220A8397B1DCDAFULL);
    CHECK(rng::mix64(rng::golden) == 0x6E789E6AA1B965F4ULL);
    CHECK(rng::mix64(2 * rng::golden) == 0x06C45D188009454FULL);
    CHECK(rng::mix64(42) == 0xBDD732262FEB6E95ULL);
}

TEST_CASE("u01 reproduces frozen draws")
{
    RngStream s1(1);
    CHECK(s1.u01(0) == Catch::Approx(0.36818951565166946).epsilon(1e-15));
    CHECK(s1.u01(1) == Catch::Approx(0.16364449857840258).epsilon(1e-15));
    RngStream s7(7);
    CHECK(s7.u01(123) == Catch::Approx(0.78206648250715083).epsilon(1e-15));
}

TEST_CASE("draws are pure functions of key and counter")
{
    RngStream a(99);
    RngStream b(99);
    // Same inputs in any order give identical values.
    const double x = a.u01(5);
    (void)a.u01(77);
    (void)a.u01(3);
    CHECK(a.u01(5) == x);
    CHECK(b.u01(5) == x);
}

TEST_CASE("u01 stays in the half-open unit interval")
{
    RngStream s(2024);
    for (std::uint64_t c = 0; c < 10000; ++c) {
        const double v = s.u01(c);
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
    }
}

TEST_CASE("uniform maps into the requested interval")
{
    RngStream s(5);
    for (std::uint64_t c = 0; c < 1000; ++c) {
        const double v = s.uniform(c, -2.5, 7.25);
        REQUIRE(v >= -2.5);
        REQUIRE(v < 7.25);
    }
}

TEST_CASE("u01 sample moments look uniform")
{
    RngStream s(31337);
    const int n = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int c = 0; c < n; ++c) {
        const double v = s.u01(static_cast<std::uint64_t>(c));
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(mean == Catch::Approx(0.5).margin(0.01));
    CHECK(var == Catch::Approx(1.0 / 12.0).margin(0.005));
}

TEST_CASE("below never reaches its bound and covers all buckets")
{
    RngStream s(8);
    std::vector<int> counts(7, 0);
    for (std::uint64_t c = 0; c < 7000; ++c) {
        const std::uint64_t v = s.below(c, 7);
        REQUIRE(v < 7);
        ++counts[static_cast<size_t>(v)];
    }
    for (int k : counts) // expectation 1000 per bucket
        CHECK(k > 800);
}

TEST_CASE("sub-streams are independent and deterministic")
{
    RngStream base(1234);
    RngStream s1 = base.sub(1);
    RngStream s2 = base.sub(2);
    CHECK(s1.key != s2.key);
    CHECK(s1.key != base.key);
    CHECK(base.sub(1).key == s1.key);

    // No obvious correlation between the first draws of sibling streams.
    std::set<std::uint64_t> first;
    for (std::uint64_t tag = 0; tag < 100; ++tag)
        first.insert(base.sub(tag).bits(0));
    CHECK(first.size() == 100);
}

TEST_CASE("combine is order-sensitive")
{
    CHECK(rng::combine(1, 2) != rng::combine(2, 1));
    CHECK(rng::combine(0, 1) != rng::combine(1, 0));
}

TEST_CASE("different seeds give different streams")
{
    std::set<std::uint64_t> keys;
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
        keys.insert(RngStream(seed).key);
    CHECK(keys.size() == 1000);
}

TEST_CASE("sequence wrapper advances its counter")
{
    RngStream s(17);
    RngSequence seq(s);
    const double a = seq.u01();
    const double b = seq.u01();
    CHECK(a == s.u01(0));
    CHECK(b == s.u01(1));
    CHECK(a != b);
}
