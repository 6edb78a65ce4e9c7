#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "plcomp/distributions.hpp"
#include "plcomp/rng.hpp"

namespace plcomp {

/// Every (entity, relation) pair has exactly one target entity.
struct RelationGraph {
  std::size_t num_entities = 0;
  std::size_t num_relations = 0;
  std::vector<std::size_t> targets;  // [entity * num_relations + relation]
  std::vector<std::string> entity_names;
  std::vector<std::string> relation_names;

  std::size_t target(std::size_t entity, std::size_t relation) const {
    return targets.at(entity * num_relations + relation);
  }
  std::size_t num_edges() const { return targets.size(); }
};

/// Uniform random targets; names come from the bundled lists.
/// Throws std::invalid_argument when the lists are too short.
RelationGraph gen_relation_graph(std::size_t num_entities, std::size_t num_relations, Rng& rng,
                                 bool allow_self_loops = true);

/// "The teacher of Bob is Carol."
std::string render_fact(const RelationGraph& g, std::size_t entity, std::size_t relation);

/// "Who is the instructor of the teacher of Bob?" for relations {teacher, instructor}
/// applied in that order.
std::string render_question(const RelationGraph& g, std::size_t start,
                            const std::vector<std::size_t>& relations);

struct QaRecord {
  bool is_fact = false;
  std::size_t start = 0;
  std::vector<std::size_t> relations;  // applied first to last
  std::size_t answer = 0;
  std::string prompt;       // "<question>\nAnswer:" or the fact sentence
  std::string answer_text;  // entity name
  std::vector<std::string> facts;  // supporting 1-hop facts, when requested
};

struct QaOptions {
  bool emit_supporting_facts = false;
  double fact_ratio = 0.0;  // probability that a record is a standalone 1-hop fact
};

/// `dist` ranges over the graph's relations. Throws std::invalid_argument for k = 0.
std::vector<QaRecord> gen_multihop_qa(const RelationGraph& graph, std::size_t k,
                                      const SkillDistribution& dist, std::size_t n, Rng& rng,
                                      const QaOptions& options = {});

}  // namespace plcomp
