#include "plcomp/multihop.hpp"

#include <stdexcept>

#include "plcomp/names.hpp"

namespace plcomp {

RelationGraph gen_relation_graph(std::size_t num_entities, std::size_t num_relations, Rng& rng,
                                 bool allow_self_loops) {
  if (num_entities < 2) throw std::invalid_argument("gen_relation_graph: need >= 2 entities");
  if (num_relations == 0) throw std::invalid_argument("gen_relation_graph: need >= 1 relation");
  const auto people = names::people();
  const auto rels = names::relations();
  if (num_entities > people.size())
    throw std::invalid_argument("gen_relation_graph: only " + std::to_string(people.size()) +
                                " bundled entity names");
  if (num_relations > rels.size())
    throw std::invalid_argument("gen_relation_graph: only " + std::to_string(rels.size()) +
                                " bundled relation names");
  RelationGraph g;
  g.num_entities = num_entities;
  g.num_relations = num_relations;
  g.targets.resize(num_entities * num_relations);
  for (std::size_t e = 0; e < num_entities; ++e)
    for (std::size_t r = 0; r < num_relations; ++r) {
      std::size_t t = 0;
      if (allow_self_loops) {
        t = rng.below(num_entities);
      } else {
        t = rng.below(num_entities - 1);
        if (t >= e) ++t;
      }
      g.targets[e * num_relations + r] = t;
    }
  for (std::size_t e = 0; e < num_entities; ++e) g.entity_names.emplace_back(people[e]);
  for (std::size_t r = 0; r < num_relations; ++r) g.relation_names.emplace_back(rels[r]);
  return g;
}

std::string render_fact(const RelationGraph& g, std::size_t entity, std::size_t relation) {
  return "The " + g.relation_names.at(relation) + " of " + g.entity_names.at(entity) + " is " +
         g.entity_names.at(g.target(entity, relation)) + ".";
}

std::string render_question(const RelationGraph& g, std::size_t start,
                            const std::vector<std::size_t>& relations) {
  std::string q = "Who is";
  for (auto it = relations.rbegin(); it != relations.rend(); ++it)
    q += " the " + g.relation_names.at(*it) + " of";
  q += " " + g.entity_names.at(start) + "?";
  return q;
}

std::vector<QaRecord> gen_multihop_qa(const RelationGraph& graph, std::size_t k,
                                      const SkillDistribution& dist, std::size_t n, Rng& rng,
                                      const QaOptions& options) {
  if (k == 0) throw std::invalid_argument("gen_multihop_qa: k must be >= 1");
  if (dist.size() != graph.num_relations)
    throw std::invalid_argument("gen_multihop_qa: distribution must range over relations");
  std::vector<QaRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    QaRecord rec;
    rec.start = rng.below(graph.num_entities);
    const bool fact = options.fact_ratio > 0.0 && rng.uniform01() < options.fact_ratio;
    const std::size_t hops = fact ? 1 : k;
    std::size_t cur = rec.start;
    for (std::size_t h = 0; h < hops; ++h) {
      const std::size_t r = dist.sample(rng);
      rec.relations.push_back(r);
      if (options.emit_supporting_facts && !fact) rec.facts.push_back(render_fact(graph, cur, r));
      cur = graph.target(cur, r);
    }
    rec.answer = cur;
    rec.answer_text = graph.entity_names[cur];
    rec.is_fact = fact;
    rec.prompt = fact ? render_fact(graph, rec.start, rec.relations.front())
                      : render_question(graph, rec.start, rec.relations) + "\nAnswer:";
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace plcomp
