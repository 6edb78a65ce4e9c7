#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plcomp/arithmetic.hpp"
#include "plcomp/gsm.hpp"
#include "plcomp/multihop.hpp"
#include "plcomp/s5.hpp"

namespace plcomp {

// One JSON object per line: {task, prompt, answer, skills, meta}.

std::string to_json_line(const ArithmeticRecord& rec);
std::string to_json_line(const StateTrackingRecord& rec);
std::string to_json_line(const QaRecord& rec, const RelationGraph& graph);
std::string to_json_line(const GsmProblem& prob);

/// Skill indices touched by a GSM problem (its leaf literals).
std::vector<std::size_t> gsm_skills(const GsmProblem& prob);

}  // namespace plcomp
