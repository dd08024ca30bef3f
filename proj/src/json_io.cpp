#include "spvar/json_io.hpp"

#include <fstream>
#include <sstream>

#include <openssl/sha.h>

namespace spvar {

using nlohmann::json;

json problem_to_json(const IsingProblem& problem) {
    json j;
    j["variables"] = problem.variables();
    json h = json::object();
    for (const auto& [v, bias] : problem.h()) h[std::to_string(v)] = bias;
    j["h"] = h;
    json couplers = json::array();
    for (const auto& [key, value] : problem.J())
        couplers.push_back(json::array({key.first, key.second, value}));
    j["J"] = couplers;
    j["offset"] = problem.offset();
    return j;
}

IsingProblem problem_from_json(const json& j) {
    std::vector<Var> variables = j.at("variables").get<std::vector<Var>>();
    std::map<Var, double> h;
    for (const auto& [key, value] : j.at("h").items()) h[std::stoi(key)] = value.get<double>();
    std::map<VarPair, double> couplers;
    for (const auto& entry : j.at("J")) {
        Var a = entry.at(0).get<Var>();
        Var b = entry.at(1).get<Var>();
        couplers[make_pair_key(a, b)] = entry.at(2).get<double>();
    }
    double offset = j.value("offset", 0.0);
    return IsingProblem(std::move(variables), std::move(h), std::move(couplers), offset);
}

std::string problem_sha(const IsingProblem& problem) {
    std::string canonical = problem_to_json(problem).dump();
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(canonical.data()), canonical.size(), digest);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * SHA256_DIGEST_LENGTH);
    for (unsigned char c : digest) {
        out.push_back(hex[c >> 4]);
        out.push_back(hex[c & 0xf]);
    }
    return out;
}

json sample_to_json(const SampleSet& samples, const IsingProblem& problem) {
    json j;
    j["problem_sha"] = problem_sha(problem);
    j["seed"] = samples.seed;
    j["reads"] = samples.reads;
    j["num_gauges"] = samples.num_gauges;
    json solutions = json::array();
    for (const auto& solution : samples.solutions) {
        json spins = json::object();
        for (const auto& [v, s] : solution.spins) spins[std::to_string(v)] = s;
        solutions.push_back({{"spins", spins}, {"energy", solution.energy}});
    }
    j["solutions"] = solutions;
    return j;
}

SampleSet sample_from_json(const json& j) {
    SampleSet out;
    out.seed = j.value("seed", std::uint64_t{0});
    out.reads = j.value("reads", 0);
    out.num_gauges = j.value("num_gauges", 1);
    for (const auto& entry : j.at("solutions")) {
        Solution solution;
        for (const auto& [key, value] : entry.at("spins").items())
            solution.spins[std::stoi(key)] = value.get<int>();
        solution.energy = entry.at("energy").get<double>();
        out.solutions.push_back(std::move(solution));
    }
    if (out.reads == 0) out.reads = static_cast<int>(out.solutions.size());
    out.sort_by_energy();
    return out;
}

json assignment_to_json(const FixAssignment& assignment) {
    json j = json::object();
    json spins = json::object();
    json sources = json::object();
    for (const auto& [v, s] : assignment.spins()) {
        spins[std::to_string(v)] = s;
        sources[std::to_string(v)] = to_string(assignment.source(v));
    }
    j["spins"] = spins;
    j["sources"] = sources;
    return j;
}

FixAssignment assignment_from_json(const json& j) {
    FixAssignment out;
    const auto& sources = j.at("sources");
    for (const auto& [key, value] : j.at("spins").items()) {
        out.set(std::stoi(key), value.get<int>(),
                fix_source_from_string(sources.at(key).get<std::string>()));
    }
    return out;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return json::parse(in);
}

}  // namespace spvar
