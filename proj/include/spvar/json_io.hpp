#ifndef SPVAR_JSON_IO_HPP
#define SPVAR_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "spvar/model.hpp"

namespace spvar {

// Problem JSON:
//   {"variables":[...], "h":{"<var>":num}, "J":[[i,j,num],...], "offset":num}
nlohmann::json problem_to_json(const IsingProblem& problem);
IsingProblem problem_from_json(const nlohmann::json& j);

// Sample JSON:
//   {"problem_sha":hex, "solutions":[{"spins":{"<var>":+-1},"energy":num},...]}
nlohmann::json sample_to_json(const SampleSet& samples, const IsingProblem& problem);
SampleSet sample_from_json(const nlohmann::json& j);

nlohmann::json assignment_to_json(const FixAssignment& assignment);
FixAssignment assignment_from_json(const nlohmann::json& j);

/// SHA-256 of the canonical problem JSON serialization, lowercase hex.
std::string problem_sha(const IsingProblem& problem);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace spvar

#endif
