#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "shiqv/labelset.hpp"
#include "shiqv/nlgen.hpp"
#include "shiqv/oracle.hpp"
#include "shiqv/reasoner.hpp"
#include "shiqv/refiner.hpp"
#include "shiqv/rule_check.hpp"

namespace shiqv {

using nlohmann::json;

inline json to_json(const LabelSet& ls) {
  json deferred = json::array();
  for (const Concept& d : ls.deferred) deferred.push_back(d.str());
  return {{"owner", ls.owner}, {"labels", ls.strings()}, {"deferred", deferred}};
}

inline json to_json(const TraceStep& s) {
  return {{"ruleset", s.ruleset}, {"rule", s.rule},           {"inputs", s.inputs},
          {"outputs", s.outputs}, {"pr_marked", s.pr_marked}, {"purged", s.purged}};
}

inline json to_json(const std::vector<TraceStep>& trace) {
  json out = json::array();
  for (const TraceStep& s : trace) out.push_back(to_json(s));
  return out;
}

inline json to_json(const Description& d) {
  return {{"subject", d.subject},
          {"class_phrases", d.class_phrases},
          {"restriction_phrases", d.restriction_phrases},
          {"sentence", d.sentence}};
}

inline json to_json(const Interpretation& I) {
  const Signature& sig = I.signature();
  json domain = json::array();
  for (int e = 0; e < I.size(); ++e) domain.push_back(e);
  json concepts = json::object();
  for (std::size_t c = 0; c < sig.concepts.size(); ++c) {
    json members = json::array();
    for (int e = 0; e < I.size(); ++e) {
      if (I.concept_ext[c] >> e & 1u) members.push_back(e);
    }
    concepts[sig.concepts[c]] = members;
  }
  json roles = json::object();
  for (std::size_t r = 0; r < sig.roles.size(); ++r) {
    json pairs = json::array();
    for (int x = 0; x < I.size(); ++x) {
      for (int y = 0; y < I.size(); ++y) {
        if (I.role_ext[r][x] >> y & 1u) pairs.push_back({x, y});
      }
    }
    roles[sig.roles[r]] = pairs;
  }
  json individuals = json::object();
  for (std::size_t i = 0; i < sig.individuals.size(); ++i) {
    if (I.individual_map[i] >= 0) individuals[sig.individuals[i]] = I.individual_map[i];
  }
  return {{"domain", domain}, {"concepts", concepts}, {"roles", roles}, {"individuals", individuals}};
}

inline json to_json(const RuleVerdict& v) {
  json out = {{"rule", std::string(rule_info(v.rule).name)},
              {"holds", v.holds},
              {"instances", v.instances},
              {"interpretations", v.interpretations}};
  if (v.counterexample) {
    const RuleInstance& inst = v.counterexample->instance;
    out["counterexample"] = {{"antecedents", detail::strs(inst.antecedents)},
                             {"consequents", detail::strs(inst.consequents)},
                             {"n", inst.n},
                             {"m", inst.m},
                             {"element", v.counterexample->element},
                             {"interpretation", to_json(v.counterexample->interpretation)}};
  }
  return out;
}

inline json to_json(const Derivation& d) {
  return {{"fact", d.fact.str()}, {"rule", d.rule}, {"premises", d.premises}};
}

// One JSON object per line.
inline std::string provenance_jsonl(const MaterializedOntology& m) {
  std::string out;
  for (const Derivation& d : m.provenance) out += to_json(d).dump() + "\n";
  return out;
}

}  // namespace shiqv
