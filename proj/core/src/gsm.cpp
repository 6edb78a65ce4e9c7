#include "plcomp/gsm.hpp"

#include <algorithm>
#include <numeric>

#include "plcomp/names.hpp"

namespace plcomp {

namespace {

constexpr std::size_t kStepAttempts = 64;

std::int64_t mod(std::int64_t a, std::int64_t p) {
  const std::int64_t r = a % p;
  return r < 0 ? r + p : r;
}

// Value of one operation node, or nullopt when a constraint fails.
std::optional<std::int64_t> apply_op(GsmOp op, std::int64_t a, std::int64_t b,
                                     std::optional<std::int64_t> modulus, std::int64_t cap) {
  if (modulus) {
    const std::int64_t p = *modulus;
    switch (op) {
      case GsmOp::Add:
        return mod(a + b, p);
      case GsmOp::Sub:
        return mod(a - b, p);
      case GsmOp::Mul:
        return mod(a * b, p);
      case GsmOp::Div:
        if (mod(b, p) == 0) return std::nullopt;
        return mod(a * mod_inverse(b, p), p);
      case GsmOp::Leaf:
        break;
    }
    return std::nullopt;
  }
  std::int64_t v = 0;
  switch (op) {
    case GsmOp::Add:
      v = a + b;
      break;
    case GsmOp::Sub:
      v = a - b;
      break;
    case GsmOp::Mul:
      v = a * b;
      break;
    case GsmOp::Div:
      if (b == 0 || a % b != 0) return std::nullopt;
      v = a / b;
      break;
    case GsmOp::Leaf:
      return std::nullopt;
  }
  if (v < 0 || v > cap) return std::nullopt;
  return v;
}

std::string join_names(const std::vector<GsmNode>& nodes, std::size_t a, std::size_t b) {
  return nodes[a].name + " and " + nodes[b].name;
}

std::string op_sentence(const std::vector<GsmNode>& nodes, const GsmNode& n) {
  switch (n.op) {
    case GsmOp::Add:
      return "The number of " + n.name + " is the sum of " + join_names(nodes, n.lhs, n.rhs) + ".";
    case GsmOp::Sub:
      return "The number of " + n.name + " is the difference of " + join_names(nodes, n.lhs, n.rhs) + ".";
    case GsmOp::Mul:
      return "The number of " + n.name + " is the product of " + join_names(nodes, n.lhs, n.rhs) + ".";
    case GsmOp::Div:
      return "The number of " + n.name + " is the quotient of " + join_names(nodes, n.lhs, n.rhs) + ".";
    case GsmOp::Leaf:
      break;
  }
  return "There are " + std::to_string(n.literal) + " " + n.name + ".";
}

std::string calc_phrase(GsmOp op, const std::string& a, const std::string& b, std::int64_t v) {
  const std::string vs = std::to_string(v);
  switch (op) {
    case GsmOp::Add:
      return "Adding " + a + " and " + b + " gives " + vs;
    case GsmOp::Sub:
      return "Subtracting " + b + " from " + a + " gives " + vs;
    case GsmOp::Mul:
      return "Multiplying " + a + " by " + b + " gives " + vs;
    case GsmOp::Div:
      return "Splitting " + a + " evenly into " + b + " parts gives " + vs;
    case GsmOp::Leaf:
      break;
  }
  return vs;
}

struct SolutionStep {
  std::size_t node = 0;
  std::string text;
};

std::vector<std::size_t> ancestors_in_order(const std::vector<GsmNode>& nodes, std::size_t query) {
  std::vector<bool> need(nodes.size(), false);
  need[query] = true;
  for (std::size_t i = query + 1; i-- > 0;) {
    if (!need[i] || nodes[i].op == GsmOp::Leaf) continue;
    need[nodes[i].lhs] = true;
    need[nodes[i].rhs] = true;
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i <= query; ++i)
    if (need[i]) order.push_back(i);
  return order;
}

void render(GsmProblem& prob, Rng& rng, bool multi_hop) {
  const auto& nodes = prob.nodes;
  std::string text = "We are in " + prob.place + ".";
  if (prob.modulus) text += " All numbers are computed modulo " + std::to_string(*prob.modulus) + ".";
  for (const auto& n : nodes) text += " " + op_sentence(nodes, n);
  text += " What is the " + nodes[prob.query].name + "?";
  prob.problem_text = std::move(text);

  std::vector<SolutionStep> steps;
  for (std::size_t i : ancestors_in_order(nodes, prob.query)) {
    const auto& n = nodes[i];
    if (n.op == GsmOp::Leaf) {
      steps.push_back({i, "We know the " + n.name + " is " + std::to_string(n.value) + "."});
    } else {
      steps.push_back({i, calc_phrase(n.op, std::to_string(nodes[n.lhs].value),
                                       std::to_string(nodes[n.rhs].value), n.value) +
                              ", which is the " + n.name + "."});
    }
  }

  std::string sol;
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const auto& cur = nodes[steps[s].node];
    // Two chained operations may be written as one combined calculation.
    if (multi_hop && s + 1 < steps.size() && cur.op != GsmOp::Leaf) {
      const auto& nxt = nodes[steps[s + 1].node];
      if (nxt.op != GsmOp::Leaf && nxt.lhs == steps[s].node && rng.coin()) {
        const std::string inner = "(" + std::to_string(nodes[cur.lhs].value) + " " +
                                  gsm_op_symbol(cur.op) + " " +
                                  std::to_string(nodes[cur.rhs].value) + ")";
        if (!sol.empty()) sol += ' ';
        sol += "Computing " + inner + " " + gsm_op_symbol(nxt.op) + " " +
               std::to_string(nodes[nxt.rhs].value) + " gives " + std::to_string(nxt.value) +
               ", which is the " + nxt.name + ".";
        ++s;
        continue;
      }
    }
    if (!sol.empty()) sol += ' ';
    sol += steps[s].text;
  }
  sol += " Answer: #### " + std::to_string(prob.answer);
  prob.solution_text = std::move(sol);
}

}  // namespace

char gsm_op_symbol(GsmOp op) {
  switch (op) {
    case GsmOp::Add:
      return '+';
    case GsmOp::Sub:
      return '-';
    case GsmOp::Mul:
      return '*';
    case GsmOp::Div:
      return '/';
    case GsmOp::Leaf:
      break;
  }
  return '=';
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
  // Extended Euclid; p is prime and a != 0 mod p.
  std::int64_t t = 0, new_t = 1, r = p, new_r = mod(a, p);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw std::invalid_argument("mod_inverse: not invertible");
  return mod(t, p);
}

std::size_t gsm_skill_count(const GsmOptions& options, std::int64_t max_leaf) {
  return options.modulus ? static_cast<std::size_t>(*options.modulus)
                         : static_cast<std::size_t>(max_leaf + 1);
}

std::optional<std::vector<std::int64_t>> evaluate_gsm_dag(const std::vector<GsmNode>& nodes,
                                                          std::optional<std::int64_t> modulus,
                                                          std::int64_t value_cap) {
  std::vector<std::int64_t> v(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.op == GsmOp::Leaf) {
      v[i] = modulus ? mod(n.literal, *modulus) : n.literal;
      continue;
    }
    if (n.lhs >= i || n.rhs >= i) return std::nullopt;
    const auto r = apply_op(n.op, v[n.lhs], v[n.rhs], modulus, value_cap);
    if (!r) return std::nullopt;
    v[i] = *r;
  }
  return v;
}

std::vector<GsmProblem> gen_gsm(const GsmOptions& options, const SkillDistribution& dist,
                                std::size_t n, Rng& rng,
                                std::vector<std::uint64_t>* realized_histogram) {
  if (options.min_ops < 2 || options.max_ops > 8 || options.min_ops > options.max_ops)
    throw std::invalid_argument("gen_gsm: operation count must lie within 2..8");
  if (options.modulus) {
    const std::int64_t p = *options.modulus;
    if (p < 2) throw std::invalid_argument("gen_gsm: modulus must be prime");
    for (std::int64_t f = 2; f * f <= p; ++f)
      if (p % f == 0) throw std::invalid_argument("gen_gsm: modulus must be prime");
    if (dist.size() != static_cast<std::size_t>(p))
      throw std::invalid_argument("gen_gsm: distribution must cover 0..p-1");
  }
  const auto items = names::items();
  const auto places = names::places();
  if (realized_histogram) realized_histogram->resize(dist.size(), 0);

  static constexpr GsmOp kOps[4] = {GsmOp::Add, GsmOp::Sub, GsmOp::Mul, GsmOp::Div};
  std::vector<GsmProblem> out;
  out.reserve(n);
  std::size_t attempts = 0;
  while (out.size() < n) {
    if (++attempts > options.max_attempts * std::max<std::size_t>(n, 1))
      throw GenerationError("gen_gsm: rejection budget exhausted after " + std::to_string(attempts - 1) +
                            " attempts with " + std::to_string(out.size()) + " accepted problems");
    GsmProblem prob;
    prob.modulus = options.modulus;
    prob.num_ops = options.min_ops + rng.below(options.max_ops - options.min_ops + 1);
    prob.place = std::string(places[rng.below(places.size())]);

    auto& nodes = prob.nodes;
    std::vector<std::int64_t> values;
    auto add_leaf = [&] {
      GsmNode leaf;
      leaf.literal = static_cast<std::int64_t>(dist.sample(rng));
      leaf.value = leaf.literal;
      nodes.push_back(leaf);
      values.push_back(leaf.value);
      return nodes.size() - 1;
    };
    add_leaf();
    add_leaf();

    bool ok = true;
    for (std::size_t op_i = 0; op_i < prob.num_ops && ok; ++op_i) {
      bool placed = false;
      for (std::size_t attempt = 0; attempt < kStepAttempts && !placed; ++attempt) {
        const std::size_t mark = nodes.size();
        // Left operand: the latest variable keeps the chain layered.
        const std::size_t lhs = rng.below(4) != 0 ? mark - 1 : rng.below(mark);
        const std::size_t rhs = rng.below(2) == 0 ? add_leaf() : rng.below(mark);
        GsmOp op = kOps[rng.below(4)];
        auto v = apply_op(op, values[lhs], values[rhs], options.modulus, options.value_cap);
        if (!v && options.modulus) {
          // Only division by zero fails mod p. Redrawing the operation keeps the
          // leaf, so modular leaves stay exact draws from the distribution.
          op = kOps[rng.below(3)];
          v = apply_op(op, values[lhs], values[rhs], options.modulus, options.value_cap);
        }
        if (!v) {
          nodes.resize(mark);
          values.resize(mark);
          continue;
        }
        GsmNode node;
        node.op = op;
        node.lhs = lhs;
        node.rhs = rhs;
        node.value = *v;
        nodes.push_back(node);
        values.push_back(*v);
        placed = true;
      }
      ok = placed;
    }
    if (!ok || nodes.size() > items.size()) continue;

    // Distinct item names in random order.
    std::vector<std::size_t> pick(items.size());
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      std::swap(pick[i], pick[i + rng.below(pick.size() - i)]);
      nodes[i].name = std::string(items[pick[i]]);
    }
    prob.query = nodes.size() - 1;
    prob.answer = nodes[prob.query].value;
    render(prob, rng, options.multi_hop_template);
    if (realized_histogram)
      for (const auto& nd : nodes)
        if (nd.op == GsmOp::Leaf) ++(*realized_histogram)[static_cast<std::size_t>(nd.literal)];
    out.push_back(std::move(prob));
  }
  return out;
}

}  // namespace plcomp
