#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "plcomp/distributions.hpp"
#include "plcomp/rng.hpp"

namespace plcomp {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluates an alternating literal/operator expression over {+, -, *} with
/// '*' binding tighter and left-to-right evaluation within a level.
/// Throws ParseError on malformed input.
std::int64_t eval_arithmetic(std::string_view expression);

struct ArithmeticRecord {
  std::string expression;          // "23 + 15 * 7 - 42 * 3"
  std::vector<std::int64_t> operands;
  std::vector<char> operators;
  std::vector<std::size_t> skills;  // operand - operand_min
  std::int64_t answer = 0;
  std::string prompt;  // "User: Calculate <expr>.\nAssistant:\\boxed{"
  std::string label;   // " <answer>}"
};

struct ArithmeticOptions {
  std::size_t num_ops = 4;
  std::int64_t operand_min = 1;
  std::int64_t operand_max = 50;
};

std::string arithmetic_prompt(std::string_view expression);
std::string arithmetic_label(std::int64_t answer);

/// `dist` ranges over the operand values (skill i <-> operand_min + i).
std::vector<ArithmeticRecord> gen_arithmetic(const ArithmeticOptions& options,
                                             const SkillDistribution& dist, std::size_t n, Rng& rng);

}  // namespace plcomp
