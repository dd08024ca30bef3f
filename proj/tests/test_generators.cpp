#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "spvar/generators.hpp"
#include "test_util.hpp"

using namespace spvar;
using namespace spvar::test;

TEST_CASE("named sets match their definitions") {
    CoefficientSet u2 = named_set("U_2");
    CHECK(u2.values == std::vector<int>{-2, -1, 0, 1, 2});
    CoefficientSet s28 = named_set("S_28");
    CHECK(s28.values == std::vector<int>{-28, -19, -13, -8, 8, 13, 19, 28});
    CHECK(named_set("{0}").values == std::vector<int>{0});
    CHECK_THROWS_AS(named_set("U_7_bogus"), std::invalid_argument);
}

TEST_CASE("S_28 magnitudes form a Sidon set: all pairwise sums distinct") {
    // the set is sign-symmetric, so the Sidon property lives in the magnitudes
    std::vector<int> values;
    for (int v : named_set("S_28").values)
        if (v > 0) values.push_back(v);
    REQUIRE(values.size() == 4);
    std::set<int> sums;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i; j < values.size(); ++j) {
            sums.insert(values[i] + values[j]);
            ++pairs;
        }
    CHECK(sums.size() == pairs);
}

TEST_CASE("zero exclusion empties the singleton zero set") {
    CoefficientSet zero = named_set("{0}");
    zero.zero_excluded = true;
    CHECK_THROWS_AS(zero.validate(), std::invalid_argument);
}

TEST_CASE("random_ising: values come from the declared sets, couplers never zero") {
    HardwareGraph g = chimera_graph(2, 2, 4);
    CoefficientSet couplers = named_set("U_2");
    CoefficientSet biases = named_set("U_2");
    IsingProblem p = random_ising(g, couplers, biases, 42);
    CHECK(p.num_variables() == g.vertices.size());
    CHECK(p.J().size() == g.edges.size());
    for (const auto& [v, h] : p.h()) {
        CHECK(h >= -2.0);
        CHECK(h <= 2.0);
        CHECK(h == static_cast<int>(h));
    }
    for (const auto& [key, j] : p.J()) {
        CHECK(j != 0.0);
        CHECK(std::abs(j) <= 2.0);
        CHECK(j == static_cast<int>(j));
    }
}

TEST_CASE("random_ising: zero bias set gives an h=0 family instance") {
    HardwareGraph g = chimera_graph(1, 2, 4);
    IsingProblem p = random_ising(g, named_set("U_5"), named_set("{0}"), 43);
    CHECK(p.all_biases_zero());
}

TEST_CASE("random_ising: deterministic under identical inputs") {
    HardwareGraph g = chimera_graph(2, 2, 4);
    IsingProblem a = random_ising(g, named_set("U_5"), named_set("U_5"), 44);
    IsingProblem b = random_ising(g, named_set("U_5"), named_set("U_5"), 44);
    CHECK(a == b);
    IsingProblem c = random_ising(g, named_set("U_5"), named_set("U_5"), 45);
    CHECK(a != c);
}

TEST_CASE("instance enumeration uses base seed + index") {
    ProblemSetSpec spec;
    spec.graph = chimera_graph(1, 1, 4);
    spec.couplers = named_set("U_5");
    spec.biases = named_set("U_5");
    spec.count = 3;
    spec.base_seed = 100;
    CHECK(instance(spec, 1) == random_ising(spec.graph, spec.couplers, spec.biases, 101));
    CHECK_THROWS_AS(instance(spec, 3), std::invalid_argument);
}

TEST_CASE("biasrange_series: one spec per n with U_5 couplers") {
    HardwareGraph g = chimera_graph(1, 1, 4);
    auto series = biasrange_series(g, 10, 5, 7);
    REQUIRE(series.size() == 10);
    CHECK(series[0].biases.values == std::vector<int>{-1, 0, 1});
    for (std::size_t k = 0; k < series.size(); ++k) {
        CHECK(series[k].couplers.name == "U_5");
        int n = static_cast<int>(k) + 1;
        // generated instances satisfy the set-membership bounds for every n
        for (int i = 0; i < series[k].count; ++i) {
            IsingProblem p = instance(series[k], i);
            for (const auto& [v, h] : p.h()) CHECK(std::abs(h) <= n);
            for (const auto& [key, j] : p.J()) {
                CHECK(j != 0.0);
                CHECK(std::abs(j) <= 5.0);
            }
        }
    }
    CHECK_THROWS_AS(biasrange_series(g, 0, 1, 1), std::invalid_argument);
}
