#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "spvar/json_io.hpp"
#include "spvar/samplers.hpp"
#include "test_util.hpp"

using namespace spvar;
using namespace spvar::test;

TEST_CASE("problem JSON round-trips losslessly") {
    IsingProblem p = random_instance(10, range_values(5, true), range_values(5), 1);
    nlohmann::json j = problem_to_json(p);
    CHECK(j.contains("variables"));
    CHECK(j.contains("h"));
    CHECK(j.contains("J"));
    CHECK(j.contains("offset"));
    CHECK(problem_from_json(j) == p);
}

TEST_CASE("problem JSON keeps zero biases and the offset") {
    IsingProblem p({0, 1}, {{0, 0.0}, {1, 0.0}}, {{{0, 1}, -1.0}}, 2.5);
    IsingProblem back = problem_from_json(problem_to_json(p));
    CHECK(back == p);
    CHECK(back.offset() == 2.5);
    CHECK(back.all_biases_zero());
}

TEST_CASE("sample JSON round-trips and carries the problem digest") {
    IsingProblem p = random_instance(8, range_values(3, true), range_values(3), 2);
    SamplerConfig c;
    c.reads = 12;
    c.sweeps = 30;
    c.seed = 3;
    SampleSet s = sample_sa(p, c);
    nlohmann::json j = sample_to_json(s, p);
    CHECK(j.at("problem_sha") == problem_sha(p));
    SampleSet back = sample_from_json(j);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(back.solutions[i].spins == s.solutions[i].spins);
        CHECK(back.solutions[i].energy == s.solutions[i].energy);
    }
}

TEST_CASE("assignment JSON preserves provenance") {
    FixAssignment a;
    a.set(0, 1, FixSource::Persistence);
    a.set(3, -1, FixSource::Correlation);
    a.set(7, 1, FixSource::Z2Prefix);
    FixAssignment back = assignment_from_json(assignment_to_json(a));
    CHECK(back.spins() == a.spins());
    CHECK(back.sources() == a.sources());
}

TEST_CASE("problem digest is stable and content-sensitive") {
    IsingProblem p = random_instance(6, range_values(2, true), range_values(2), 4);
    std::string digest = problem_sha(p);
    CHECK(digest.size() == 64);
    CHECK(digest == problem_sha(p));
    IsingProblem q = random_instance(6, range_values(2, true), range_values(2), 5);
    CHECK(problem_sha(q) != digest);
}

TEST_CASE("external-file sampler replays a stored sample") {
    IsingProblem p = random_instance(8, range_values(3, true), range_values(3), 6);
    SamplerConfig c;
    c.reads = 10;
    c.sweeps = 30;
    c.seed = 7;
    SampleSet s = sample_sa(p, c);
    std::string path =
        (std::filesystem::temp_directory_path() / "spvar_replay_test.json").string();
    write_json_file(path, sample_to_json(s, p));
    SamplerConfig replay;
    replay.kind = SamplerKind::ExternalFile;
    replay.external_path = path;
    SampleSet back = sample(p, replay);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(back.solutions[i].spins == s.solutions[i].spins);
    std::remove(path.c_str());
}

TEST_CASE("file I/O errors are reported") {
    CHECK_THROWS(read_json_file("/nonexistent/path/problem.json"));
}
