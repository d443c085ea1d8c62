#pragma once

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "shiqv/shiqv.hpp"

namespace shiqv::testing {

inline std::string data_path(const std::string& name) { return std::string(SHIQV_DATA_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline const Ontology& acad() {
  static const Ontology o = parse_ontology(read_file(data_path("acad.onto")));
  return o;
}

inline std::set<std::string> label_strings(const LabelSet& ls) {
  auto v = ls.strings();
  return {v.begin(), v.end()};
}

inline std::vector<Concept> concepts(const std::vector<std::string>& prefix) {
  std::vector<Concept> out;
  for (const std::string& p : prefix) out.push_back(parse_concept(p));
  return out;
}

// Canonical strings of prefix forms, so golden rows may be written in any order.
inline std::set<std::string> canonical(const std::vector<std::string>& prefix) {
  std::set<std::string> out;
  for (const Concept& c : concepts(prefix)) out.insert(c.str());
  return out;
}

// Rows of the published node-label-set table, with enrolledIn spelling.
inline const std::map<std::string, std::vector<std::string>>& published_node_label_sets() {
  static const std::map<std::string, std::vector<std::string>> rows{
      {"tom",
       {"Student", "IITStudent", "IIT_MS_Student", "(some enrolledIn IITProgramme)",
        "(atmost 1 hasAdvisor TeachingStaff)", "(all hasAdvisor TeachingStaff)",
        "(some hasAdvisor Professor)"}},
      {"sam",
       {"Student", "IITStudent", "IITPhdStudent", "(some enrolledIn IITProgramme)",
        "(atleast 2 hasAdvisor TeachingStaff)", "(atmost 1 hasAdvisor Professor)",
        "(all hasAdvisor TeachingStaff)", "(some hasAdvisor Professor)"}},
      {"bob", {"Professor", "TeachingStaff"}},
      {"alice", {"AssistantProf", "TeachingStaff"}},
      {"roy", {"Professor", "TeachingStaff"}},
  };
  return rows;
}

// Rows of the published refined table; AssistantProfessor is the ontology's AssistantProf.
inline const std::map<std::string, std::vector<std::string>>& published_refined_label_sets() {
  static const std::map<std::string, std::vector<std::string>> rows{
      {"sam",
       {"Student", "(some enrolledIn IITProgramme)", "(exactly 1 hasAdvisor Professor)",
        "(nonvac hasAdvisor TeachingStaff)",
        "(atleast 1 hasAdvisor (and TeachingStaff (not Professor)))"}},
      {"tom", {"Student", "(some enrolledIn IITProgramme)", "(exactly 1 hasAdvisor Professor)"}},
      {"bob", {"Professor"}},
      {"alice", {"AssistantProf"}},
      {"roy", {"Professor"}},
  };
  return rows;
}

inline const std::vector<std::string>& published_iitphdstudent_description() {
  static const std::vector<std::string> row{
      "Student", "(some enrolledIn IITProgramme)", "(exactly 1 hasAdvisor Professor)",
      "(nonvac hasAdvisor TeachingStaff)",
      "(atleast 1 hasAdvisor (and TeachingStaff (not Professor)))"};
  return row;
}

inline Ontology tbox_of(const Ontology& o) {
  Ontology t;
  for (const Axiom& a : o.tbox) t.add(a);
  return t;
}

}  // namespace shiqv::testing
