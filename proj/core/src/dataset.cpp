#include "plcomp/dataset.hpp"

#include "json.hpp"

namespace plcomp {

using nlohmann::ordered_json;

namespace {

std::string tokens_to_string(const std::vector<std::uint8_t>& toks) {
  std::string s;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) s += ' ';
    s += static_cast<char>('0' + toks[i]);
  }
  return s;
}

}  // namespace

std::string to_json_line(const ArithmeticRecord& rec) {
  ordered_json j;
  j["task"] = "arithmetic";
  j["prompt"] = rec.prompt;
  j["answer"] = std::to_string(rec.answer);
  j["skills"] = rec.skills;
  j["meta"] = {{"expression", rec.expression}, {"label", rec.label}, {"operands", rec.operands}};
  return j.dump();
}

std::string to_json_line(const StateTrackingRecord& rec) {
  ordered_json j;
  j["task"] = "s5_state_tracking";
  j["prompt"] = tokens_to_string(rec.input_tokens);
  j["answer"] = tokens_to_string(rec.target_tokens);
  j["skills"] = rec.skills;
  j["meta"] = {{"hops", rec.skills.size()}};
  return j.dump();
}

std::string to_json_line(const QaRecord& rec, const RelationGraph& graph) {
  ordered_json j;
  j["task"] = rec.is_fact ? "multihop_fact" : "multihop_qa";
  j["prompt"] = rec.prompt;
  j["answer"] = rec.answer_text;
  j["skills"] = rec.relations;
  ordered_json meta;
  meta["start"] = graph.entity_names.at(rec.start);
  meta["hops"] = rec.relations.size();
  meta["answer_index"] = rec.answer;
  if (!rec.facts.empty()) meta["facts"] = rec.facts;
  j["meta"] = std::move(meta);
  return j.dump();
}

std::vector<std::size_t> gsm_skills(const GsmProblem& prob) {
  std::vector<std::size_t> s;
  for (const auto& n : prob.nodes)
    if (n.op == GsmOp::Leaf) s.push_back(static_cast<std::size_t>(n.literal));
  return s;
}

std::string to_json_line(const GsmProblem& prob) {
  ordered_json j;
  j["task"] = "gsm";
  j["prompt"] = prob.problem_text;
  j["answer"] = std::to_string(prob.answer);
  j["skills"] = gsm_skills(prob);
  ordered_json nodes = ordered_json::array();
  for (const auto& n : prob.nodes) {
    ordered_json jn;
    jn["name"] = n.name;
    jn["op"] = std::string(1, gsm_op_symbol(n.op));
    if (n.op == GsmOp::Leaf) {
      jn["literal"] = n.literal;
    } else {
      jn["lhs"] = n.lhs;
      jn["rhs"] = n.rhs;
    }
    jn["value"] = n.value;
    nodes.push_back(std::move(jn));
  }
  ordered_json meta;
  meta["solution"] = prob.solution_text;
  meta["num_ops"] = prob.num_ops;
  meta["modulus"] = prob.modulus ? ordered_json(*prob.modulus) : ordered_json(nullptr);
  meta["query"] = prob.query;
  meta["nodes"] = std::move(nodes);
  j["meta"] = std::move(meta);
  return j.dump();
}

}  // namespace plcomp
