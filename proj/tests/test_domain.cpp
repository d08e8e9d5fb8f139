#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <vector>

#include "fara/domain.hpp"

using namespace fara;

namespace {

RadarActionSet make_set(int l, int m) {
    return RadarActionSet(FrequencySet(10e9, 10e6, l), m);
}

// Brute-force enumeration in the documented order: first sub-pulse most
// significant, frequencies ascending. Independent of the encode arithmetic.
std::vector<std::vector<int>> enumerate_tuples(int l, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> tuple(static_cast<std::size_t>(m), 1);
    while (true) {
        out.push_back(tuple);
        int pos = m - 1;
        while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == l) {
            tuple[static_cast<std::size_t>(pos)] = 1;
            --pos;
        }
        if (pos < 0) break;
        ++tuple[static_cast<std::size_t>(pos)];
    }
    return out;
}

}  // namespace

TEST_CASE("frequency set spacing") {
    FrequencySet f(10e9, 10e6, 4);
    CHECK(f.frequency(1) == 10e9);
    CHECK(f.frequency(4) == Catch::Approx(10.03e9));
    CHECK_THROWS_AS(FrequencySet(10e9, 10e6, 1), ConfigError);
    CHECK_THROWS_AS(FrequencySet(10e9, 0.0, 4), ConfigError);
}

TEST_CASE("encode endpoints for L=4, M=2") {
    auto set = make_set(4, 2);
    CHECK(set.size == 16);
    CHECK(encode_action({1, 1}, set) == 0);
    CHECK(encode_action({4, 4}, set) == 15);
}

TEST_CASE("encode L=3, M=3 agrees with brute-force enumeration") {
    auto set = make_set(3, 3);
    auto tuples = enumerate_tuples(3, 3);
    REQUIRE(tuples.size() == 27);
    ActionIndex expected = -1;
    for (std::size_t i = 0; i < tuples.size(); ++i)
        if (tuples[i] == std::vector<int>{2, 1, 3}) expected = static_cast<ActionIndex>(i);
    REQUIRE(expected >= 0);
    CHECK(encode_action({2, 1, 3}, set) == expected);
    // Entire enumeration matches, both directions.
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        CHECK(encode_action(tuples[i], set) == static_cast<ActionIndex>(i));
        CHECK(decode_action(static_cast<ActionIndex>(i), set) == tuples[i]);
    }
}

TEST_CASE("encode/decode round-trip is exhaustive for small spaces") {
    for (auto [l, m] : std::vector<std::pair<int, int>>{{2, 1}, {4, 2}, {3, 3}, {2, 13}, {10, 4}}) {
        auto set = make_set(l, m);
        REQUIRE(set.size <= 10000);
        for (ActionIndex a = 0; a < set.size; ++a)
            REQUIRE(set.encode(set.decode(a)) == a);
    }
}

TEST_CASE("encode rejects out-of-range tuples") {
    auto set = make_set(4, 2);
    CHECK_THROWS_AS(encode_action({0, 1}, set), InvalidActionError);
    CHECK_THROWS_AS(encode_action({1, 5}, set), InvalidActionError);
    CHECK_THROWS_AS(encode_action({1}, set), InvalidActionError);
    CHECK_THROWS_AS(decode_action(16, set), InvalidActionError);
    CHECK_THROWS_AS(decode_action(-1, set), InvalidActionError);
}

TEST_CASE("strategy invariants") {
    CHECK_NOTHROW(Strategy::from_weights({0.5, 0.5}));
    CHECK_THROWS_AS(Strategy::from_weights({0.5, 0.6}), InvalidStrategyError);
    CHECK_THROWS_AS(Strategy::from_weights({-0.1, 1.1}), InvalidStrategyError);
    CHECK_THROWS_AS(Strategy::from_weights({}), InvalidStrategyError);
    auto u = Strategy::uniform(16);
    CHECK_NOTHROW(u.validate());
    CHECK(u[3] == Catch::Approx(1.0 / 16));
}

TEST_CASE("point mass sampling is deterministic") {
    auto s = Strategy::from_weights({1.0, 0.0, 0.0});
    auto rng = make_stream(1, 0, StreamRole::Radar);
    for (int i = 0; i < 100; ++i) CHECK(sample(s, rng) == 0);
}

TEST_CASE("sampling matches probabilities (binomial concentration)") {
    auto s = Strategy::from_weights({0.5, 0.5});
    auto rng = make_stream(7, 0, StreamRole::Radar);
    int zeros = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        if (sample(s, rng) == 0) ++zeros;
    CHECK(std::abs(zeros / static_cast<double>(n) - 0.5) < 0.01);
}

TEST_CASE("uniform sampling over 16 actions stays near 1/16") {
    auto s = Strategy::uniform(16);
    auto rng = make_stream(11, 0, StreamRole::Radar);
    std::vector<int> counts(16, 0);
    const int n = 160000;
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(sample(s, rng))];
    for (int c : counts)
        CHECK(std::abs(c / static_cast<double>(n) - 0.0625) < 0.004);
}

TEST_CASE("sampling is reproducible for equal seeds") {
    auto s = Strategy::from_weights({0.2, 0.3, 0.5});
    auto r1 = make_stream(99, 4, StreamRole::Jammer);
    auto r2 = make_stream(99, 4, StreamRole::Jammer);
    for (int i = 0; i < 1000; ++i) REQUIRE(sample(s, r1) == sample(s, r2));
}

TEST_CASE("degenerate strategies are rejected at sampling") {
    auto rng = make_stream(1, 0, StreamRole::Radar);
    Strategy nan_strategy;  // bypass construction checks via from_weights failure paths
    CHECK_THROWS_AS(Strategy::from_weights({std::nan(""), 1.0}), InvalidStrategyError);
    CHECK_THROWS_AS(Strategy::from_weights({-0.5, 1.5}), InvalidStrategyError);
}

TEST_CASE("history window keeps the most recent entries first") {
    HistoryWindow w(3);
    CHECK(w.length() == 0);
    CHECK_FALSE(w.full());
    w.push(1, 10);
    w.push(2, 20);
    CHECK(w.length() == 2);
    w.push(3, 30);
    CHECK(w.full());
    w.push(4, 40);
    CHECK(w.length() == 3);
    CHECK(w.entries()[0].radar == 4);
    CHECK(w.entries()[1].radar == 3);
    CHECK(w.entries()[2].radar == 2);
    auto recent = w.recent(2);
    REQUIRE(recent.size() == 2);
    CHECK(recent[0].jammer == 40);
    CHECK(recent[1].jammer == 30);
    CHECK(w.recent(10).size() == 3);
    CHECK_THROWS_AS(HistoryWindow(0), ConfigError);
}

TEST_CASE("stream derivation separates roles and trials") {
    CHECK(derive_stream_seed(1, 0, StreamRole::Radar) !=
          derive_stream_seed(1, 0, StreamRole::Jammer));
    CHECK(derive_stream_seed(1, 0, StreamRole::Radar) !=
          derive_stream_seed(1, 1, StreamRole::Radar));
    CHECK(derive_stream_seed(1, 0, StreamRole::Radar) ==
          derive_stream_seed(1, 0, StreamRole::Radar));
}
