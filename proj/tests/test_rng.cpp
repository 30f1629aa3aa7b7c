#include <doctest.h>

#include <bif/rng.hpp>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

using bif::derive_rng;
using bif::mix_seed;
using bif::sample_distinct;

TEST_CASE("mix_seed is deterministic and label-sensitive") {
    CHECK(mix_seed(42, "init") == mix_seed(42, "init"));
    CHECK(mix_seed(42, "init") != mix_seed(42, "noise"));
    CHECK(mix_seed(42, "init") != mix_seed(43, "init"));
    CHECK(mix_seed(0, "") != mix_seed(1, ""));
}

TEST_CASE("derive_rng yields reproducible independent streams") {
    auto a = derive_rng(7, "init");
    auto b = derive_rng(7, "init");
    for (int i = 0; i < 100; ++i) CHECK(a() == b());

    auto c = derive_rng(7, "noise");
    auto d = derive_rng(7, "init");
    bool all_equal = true;
    for (int i = 0; i < 100; ++i)
        if (c() != d()) all_equal = false;
    CHECK_FALSE(all_equal);
}

TEST_CASE("sample_distinct draws r distinct in-range values") {
    auto rng = derive_rng(123, "init");
    for (int trial = 0; trial < 50; ++trial) {
        auto pick = sample_distinct(100, 12, rng);
        REQUIRE(pick.size() == 12);
        std::set<int> uniq(pick.begin(), pick.end());
        CHECK(uniq.size() == 12);
        CHECK(*std::min_element(pick.begin(), pick.end()) >= 0);
        CHECK(*std::max_element(pick.begin(), pick.end()) < 100);
    }
}

TEST_CASE("sample_distinct with r equal to n is a permutation") {
    auto rng = derive_rng(5, "init");
    auto pick = sample_distinct(8, 8, rng);
    std::sort(pick.begin(), pick.end());
    for (int i = 0; i < 8; ++i) CHECK(pick[i] == i);
}

TEST_CASE("sample_distinct covers the range across repeats") {
    auto rng = derive_rng(9, "init");
    std::set<int> seen;
    for (int trial = 0; trial < 200; ++trial) {
        for (int v : sample_distinct(10, 3, rng)) seen.insert(v);
    }
    CHECK(seen.size() == 10);
}

TEST_CASE("sample_distinct rejects out-of-range draws") {
    auto rng = derive_rng(0, "init");
    CHECK_THROWS_AS(sample_distinct(5, 6, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_distinct(5, -1, rng), std::invalid_argument);
    CHECK(sample_distinct(5, 0, rng).empty());
}
