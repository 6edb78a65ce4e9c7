#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plcomp/distributions.hpp"
#include "plcomp/rng.hpp"

namespace plcomp {

enum class GsmOp { Leaf, Add, Sub, Mul, Div };

char gsm_op_symbol(GsmOp op);

/// One variable of the dependency DAG. Operands always refer to earlier nodes.
struct GsmNode {
  GsmOp op = GsmOp::Leaf;
  std::int64_t literal = 0;  // leaves only
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  std::int64_t value = 0;
  std::string name;
};

struct GsmProblem {
  std::vector<GsmNode> nodes;
  std::optional<std::int64_t> modulus;
  std::size_t query = 0;
  std::size_t num_ops = 0;
  std::string place;
  std::string problem_text;
  std::string solution_text;
  std::int64_t answer = 0;
};

struct GsmOptions {
  std::size_t min_ops = 2;
  std::size_t max_ops = 8;
  std::optional<std::int64_t> modulus = 211;
  /// Non-modular arm: intermediate values must stay within [0, value_cap].
  std::int64_t value_cap = 1000;
  bool multi_hop_template = false;
  std::size_t max_attempts = 100000;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of leaf values the skill distribution must cover: the modulus when
/// set (values 0..p-1), otherwise max_leaf + 1 (values 0..max_leaf).
std::size_t gsm_skill_count(const GsmOptions& options, std::int64_t max_leaf = 200);

/// Evaluates the DAG in index order (already topological). Returns nullopt if
/// a constraint fails: division by zero, inexact or out-of-range values in the
/// non-modular arm.
std::optional<std::vector<std::int64_t>> evaluate_gsm_dag(const std::vector<GsmNode>& nodes,
                                                          std::optional<std::int64_t> modulus,
                                                          std::int64_t value_cap);

/// Leaf literals are drawn from `dist` (skill i <-> value i). Modular: a zero
/// divisor redraws the operation, so emitted leaves follow `dist` exactly.
/// Non-modular: a failing step is redrawn (up to 64 times, then the whole
/// problem), which skews leaves toward small values; throws GenerationError
/// when the attempt budget runs out. `realized_histogram`, if given,
/// accumulates the literal counts of accepted problems.
std::vector<GsmProblem> gen_gsm(const GsmOptions& options, const SkillDistribution& dist,
                                std::size_t n, Rng& rng,
                                std::vector<std::uint64_t>* realized_histogram = nullptr);

std::int64_t mod_inverse(std::int64_t a, std::int64_t p);

}  // namespace plcomp
