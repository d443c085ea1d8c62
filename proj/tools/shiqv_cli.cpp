#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "shiqv/shiqv.hpp"

namespace {

using namespace shiqv;

enum Exit { kOk = 0, kInvalidInput = 1, kUnknownEntity = 2, kInconsistent = 3, kCounterexample = 4 };

struct RunConfig {
  std::string ontology_path;
  std::string format = "text";
  std::string lexicon_path;
  std::uint64_t seed = 0;
  int max_domain = 3;
  std::uint64_t samples = 1000;
  std::string individual;
  std::string concept_name;
  bool refined = false;
  bool traditional = false;
  std::string bad_rule;

  bool json() const { return format == "json"; }
};

Ontology load_ontology(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read ontology '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_ontology(ss.str());
}

// Raw label-set of the requested individual or concept.
LabelSet entity_label_set(const RunConfig& cfg, const Ontology& o, const TaxonomyClosure& tax) {
  if (!cfg.concept_name.empty()) return concept_label_set(cfg.concept_name, o);
  if (!o.individual_names.count(cfg.individual)) throw UnknownEntityError(cfg.individual);
  MaterializedOntology m = materialize(o, tax);
  return node_label_set(cfg.individual, m, tax);
}

void print_labels(const LabelSet& ls, const RunConfig& cfg) {
  if (cfg.json()) {
    std::cout << to_json(ls).dump(2) << "\n";
    return;
  }
  std::cout << ls.owner << "\n";
  for (const std::string& s : ls.strings()) std::cout << "  " << s << "\n";
  for (const Concept& d : ls.deferred) std::cout << "  " << d.str() << " (deferred)\n";
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out;
}

int cmd_labelset(const RunConfig& cfg) {
  Ontology o = load_ontology(cfg.ontology_path);
  TaxonomyClosure tax = classify(o);
  LabelSet ls = entity_label_set(cfg, o, tax);
  if (cfg.refined) ls = semantic_refine(std::move(ls), o, tax);
  print_labels(ls, cfg);
  return kOk;
}

int cmd_describe(const RunConfig& cfg) {
  Ontology o = load_ontology(cfg.ontology_path);
  Lexicon lex = cfg.lexicon_path.empty() ? Lexicon{} : load_lexicon(cfg.lexicon_path);
  TaxonomyClosure tax = classify(o);
  LabelSet ls = entity_label_set(cfg, o, tax);
  if (!cfg.traditional) ls = semantic_refine(std::move(ls), o, tax);
  Description d = render_description(ls.owner, ls, lex);
  if (cfg.json()) {
    std::cout << to_json(d).dump(2) << "\n";
  } else {
    std::cout << d.sentence << "\n";
  }
  return kOk;
}

int cmd_trace(const RunConfig& cfg) {
  Ontology o = load_ontology(cfg.ontology_path);
  TaxonomyClosure tax = classify(o);
  LabelSet ls = entity_label_set(cfg, o, tax);
  RefinementResult r = semantic_refine_traced(std::move(ls), o, tax);
  if (cfg.json()) {
    std::cout << to_json(r.trace).dump(2) << "\n";
    return kOk;
  }
  for (const TraceStep& s : r.trace) {
    std::cout << "[" << s.ruleset << "] " << s.rule << ":";
    if (s.rule == "purge") {
      std::cout << " pr {" << join(s.pr_marked) << "} purged {" << join(s.purged) << "}\n";
    } else {
      std::cout << " {" << join(s.inputs) << "} => {" << join(s.outputs) << "}";
      if (!s.pr_marked.empty()) std::cout << " pr {" << join(s.pr_marked) << "}";
      if (!s.purged.empty()) std::cout << " purged {" << join(s.purged) << "}";
      std::cout << "\n";
    }
  }
  std::cout << "result:";
  for (const std::string& l : r.labels.strings()) std::cout << " " << l;
  std::cout << "\n";
  return kOk;
}

int cmd_verify_rules(const RunConfig& cfg) {
  VerifyOptions opts;
  opts.max_domain = cfg.max_domain;
  opts.seed = cfg.seed;
  opts.random_samples = cfg.samples;
  opts.rule_options.disjunctive_7c = cfg.bad_rule == "7c-disjunction";
  nlohmann::json all = nlohmann::json::array();
  bool ok = true;
  for (const RefinementRule& rule : rule_table()) {
    RuleVerdict v = verify_rule(rule.id, opts);
    ok = ok && v.holds;
    if (cfg.json()) {
      all.push_back(to_json(v));
      continue;
    }
    std::cout << rule.name << " " << (v.holds ? "holds" : "FAILS") << " instances=" << v.instances
              << " interpretations=" << v.interpretations << "\n";
    if (v.counterexample) std::cout << to_json(v).dump() << "\n";
  }
  if (cfg.json()) std::cout << all.dump(2) << "\n";
  return ok ? kOk : kCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SHIQ label-set refinement and description generation"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--lexicon", cfg.lexicon_path, "Role and label lexicon file");
  app.add_option("--seed", cfg.seed, "Seed for random sampling");
  app.add_option("--max-domain", cfg.max_domain, "Largest exhaustively checked domain")
      ->check(CLI::Range(1, kMaxDomain));

  auto entity_options = [&](CLI::App* sub) {
    sub->add_option("ontology", cfg.ontology_path, "Ontology file")->required();
    auto* ind = sub->add_option("--individual", cfg.individual, "Individual name");
    auto* con = sub->add_option("--concept", cfg.concept_name, "Concept name");
    ind->excludes(con);
    sub->callback([sub, ind, con] {
      if (ind->count() + con->count() == 0) {
        throw CLI::ValidationError(sub->get_name(), "one of --individual or --concept is required");
      }
    });
  };

  auto* labelset = app.add_subcommand("labelset", "Print a node or concept label-set");
  entity_options(labelset);
  labelset->add_flag("--refined", cfg.refined, "Apply semantic refinement");

  auto* describe = app.add_subcommand("describe", "Print a natural-language description");
  entity_options(describe);
  describe->add_flag("--traditional", cfg.traditional, "Describe the unrefined label-set");
  describe->add_flag("--refined", cfg.refined, "Describe the refined label-set (default)");

  auto* trace = app.add_subcommand("trace", "Print the refinement trace");
  entity_options(trace);

  auto* verify = app.add_subcommand("verify-rules", "Check every refinement rule on finite models");
  verify->add_option("--samples", cfg.samples, "Random interpretations per rule instance");
  verify->add_option("--inject-bad-rule", cfg.bad_rule, "Test hook")
      ->check(CLI::IsMember({"7c-disjunction"}));
  for (CLI::App* sub : {labelset, describe, trace, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (labelset->parsed()) return cmd_labelset(cfg);
    if (describe->parsed()) return cmd_describe(cfg);
    if (trace->parsed()) return cmd_trace(cfg);
    return cmd_verify_rules(cfg);
  } catch (const UnknownEntityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnknownEntity;
  } catch (const InconsistentIndividualError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInconsistent;
  } catch (const UnsatisfiableConceptError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInconsistent;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}
