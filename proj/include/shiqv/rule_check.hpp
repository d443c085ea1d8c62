#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "shiqv/concept.hpp"
#include "shiqv/oracle.hpp"
#include "shiqv/refiner.hpp"

namespace shiqv {

/** @brief One concrete instance of a rule over the generic names U, V, R, S. */
struct RuleInstance {
  RuleId rule;
  unsigned n = 0;
  unsigned m = 0;
  std::vector<Concept> antecedents;
  std::vector<Concept> consequents;
  std::vector<Axiom> side_conditions;
};

struct RuleCounterexample {
  RuleInstance instance;
  Interpretation interpretation;
  int element;  // where the two conjunctions disagree
};

struct RuleVerdict {
  RuleId rule;
  bool holds = true;
  std::size_t instances = 0;
  std::uint64_t interpretations = 0;  // checked after the side-condition filter
  std::optional<RuleCounterexample> counterexample;
};

struct VerifyOptions {
  int max_domain = 3;
  std::uint64_t random_samples = 1000;
  int random_domain = 5;
  std::uint64_t seed = 0;
  RuleOptions rule_options;
  std::uint64_t budget = kDefaultEnumerationBudget;
  unsigned max_count = 3;  // largest n, m tried for counting rules
};

namespace detail {

inline Ontology side_condition_ontology(const std::vector<Axiom>& axioms) {
  Ontology o;
  for (const Axiom& a : axioms) o.add(a);
  return o;
}

}  // namespace detail

/**
 * @brief Instantiates a rule over generic names and runs the refiner's own
 * implementation to obtain the consequents.
 */
inline std::vector<RuleInstance> rule_instances(RuleId id, const VerifyOptions& opts = {}) {
  const Concept U = Concept::atomic("U");
  const Concept V = Concept::atomic("V");
  const Role R("R");
  const Role S("S");
  const Axiom u_sub_v = SubClass{U, V};
  const Axiom v_sub_u = SubClass{V, U};
  const Axiom r_sub_s = SubRole{R, S};
  const Axiom s_sub_r = SubRole{S, R};

  std::vector<RuleInstance> out;
  auto pairwise = [&](Concept u, Concept v, std::vector<Axiom> side, unsigned n = 0,
                      unsigned m = 0) {
    Ontology o = detail::side_condition_ontology(side);
    o.concept_names.insert({"U", "V"});
    o.role_names.insert({"R", "S"});
    TaxonomyClosure tax = classify(o);
    auto res = apply_rule(id, u, v, tax, opts.rule_options);
    if (!res) {
      throw std::logic_error(std::string("rule ") + std::string(rule_info(id).name) +
                             " did not fire on its own generic instance");
    }
    out.push_back({id, n, m, {u, v}, *res, side});
  };

  const unsigned top = opts.max_count;
  switch (id) {
    case RuleId::k1a: {
      Concept A = Concept::atomic("A");
      Concept def = Concept::conjunction({U, Concept::some(R, V)});
      std::vector<Axiom> side{EquivClass{A, def}};
      Ontology o = detail::side_condition_ontology(side);
      LabelSet ls("x", {A, U, Concept::some(R, V)});
      LabelSet refined = concept_refinement(ls, o);
      out.push_back({id, 0, 0, ls.labels(), refined.labels(), side});
      break;
    }
    case RuleId::k2a: pairwise(U, V, {u_sub_v}); break;
    case RuleId::k3a:
      pairwise(Concept::some(R, U), Concept::some(S, V), {u_sub_v, r_sub_s});
      break;
    case RuleId::k4a:
      pairwise(Concept::all(R, U), Concept::all(S, V), {u_sub_v, s_sub_r});
      break;
    case RuleId::k4b: pairwise(Concept::all(R, U), Concept::all(R, V), {v_sub_u}); break;
    case RuleId::k5a: pairwise(Concept::some(R, U), Concept::all(R, U), {}); break;
    case RuleId::k5b:
      pairwise(Concept::all(R, U), Concept::some(S, V), {u_sub_v, s_sub_r});
      break;
    case RuleId::k5c:
      pairwise(Concept::all(R, U), Concept::some(S, V), {v_sub_u, s_sub_r});
      break;
    case RuleId::k6a:
      for (unsigned n = 1; n <= top; ++n) {
        for (unsigned m = 1; m <= n; ++m) {
          pairwise(Concept::at_least(n, R, U), Concept::at_least(m, S, V), {u_sub_v, r_sub_s}, n, m);
        }
      }
      break;
    case RuleId::k6b:
      for (unsigned n = 1; n <= top; ++n) {
        pairwise(Concept::some(R, U), Concept::at_least(n, S, V), {v_sub_u, s_sub_r}, n);
      }
      break;
    case RuleId::k6c: pairwise(Concept::some(R, U), Concept::at_most(1, R, V), {u_sub_v}); break;
    case RuleId::k6d:
      for (unsigned n = 1; n <= top; ++n) {
        pairwise(Concept::at_least(n, R, U), Concept::at_most(n, S, V), {r_sub_s, u_sub_v}, n);
      }
      break;
    case RuleId::k7a:
      pairwise(Concept::some(R, U), Concept::exactly(1, S, V), {u_sub_v, r_sub_s});
      break;
    case RuleId::k7b:
      pairwise(Concept::non_vacuous(R, U), Concept::exactly(1, S, V), {u_sub_v, r_sub_s});
      break;
    case RuleId::k7c:
      for (unsigned n = 1; n <= top; ++n) {
        for (unsigned m = n; m <= top; ++m) {
          pairwise(Concept::at_least(m, R, V), Concept::exactly(n, R, U), {u_sub_v}, n, m);
        }
      }
      break;
  }
  return out;
}

namespace detail {

// Closes a random interpretation under the side conditions so that sampling
// stays inside the constrained space.
inline void repair(Interpretation& I, const std::vector<Axiom>& side) {
  const Signature& sig = I.signature();
  for (const Axiom& a : side) {
    if (auto* x = std::get_if<SubRole>(&a)) {
      int s = sig.role_index(x->sub.name);
      int t = sig.role_index(x->sup.name);
      for (int e = 0; e < I.size(); ++e) I.role_ext[t][e] |= I.role_ext[s][e];
    }
  }
  for (const Axiom& a : side) {
    if (auto* x = std::get_if<SubClass>(&a)) {
      int s = sig.concept_index(x->sub.name());
      int t = sig.concept_index(x->sup.name());
      I.concept_ext[t] |= I.concept_ext[s];
    }
  }
  for (const Axiom& a : side) {
    if (auto* x = std::get_if<EquivClass>(&a)) {
      I.concept_ext[sig.concept_index(x->lhs.name())] = eval_concept(x->rhs, I);
    }
  }
}

}  // namespace detail

/**
 * @brief Checks that a rule's antecedents and consequents agree on every
 * interpretation satisfying its side conditions.
 *
 * Domains 1..max_domain are enumerated exhaustively, then random_samples
 * seeded interpretations of size random_domain are drawn.
 */
inline RuleVerdict verify_rule(RuleId id, const VerifyOptions& opts = {}) {
  RuleVerdict verdict{id};
  auto instances = rule_instances(id, opts);
  verdict.instances = instances.size();
  for (const RuleInstance& inst : instances) {
    std::vector<Concept> names = inst.antecedents;
    names.insert(names.end(), inst.consequents.begin(), inst.consequents.end());
    auto sig = std::make_shared<Signature>(Signature::of(inst.side_conditions, names));
    CompiledConcept lhs(expand_derived(Concept::conjunction(inst.antecedents)), *sig);
    CompiledConcept rhs(expand_derived(Concept::conjunction(inst.consequents)), *sig);

    std::vector<std::pair<CompiledConcept, CompiledConcept>> inclusions;
    std::vector<Axiom> others;
    for (const Axiom& a : inst.side_conditions) {
      if (auto* x = std::get_if<SubClass>(&a)) {
        inclusions.emplace_back(CompiledConcept(x->sub, *sig), CompiledConcept(x->sup, *sig));
      } else {
        others.push_back(a);
      }
    }

    auto check = [&](const Interpretation& I) {
      for (const auto& [sub, sup] : inclusions) {
        if (sub.eval(I) & ~sup.eval(I)) return true;
      }
      for (const Axiom& a : others) {
        if (!check_axiom(a, I)) return true;
      }
      ++verdict.interpretations;
      ElementSet diff = lhs.eval(I) ^ rhs.eval(I);
      if (diff == 0) return true;
      verdict.holds = false;
      verdict.counterexample = RuleCounterexample{inst, I, std::countr_zero(diff)};
      return false;
    };

    for (int d = 1; d <= opts.max_domain; ++d) {
      auto stream = InterpretationStream::exhaustive(sig, d, opts.budget);
      while (stream.next()) {
        if (!check(stream.current())) return verdict;
      }
    }
    if (opts.random_samples > 0) {
      auto stream = InterpretationStream::random(sig, opts.random_domain, opts.random_samples,
                                                 opts.seed);
      while (stream.next()) {
        detail::repair(stream.current(), inst.side_conditions);
        if (!check(stream.current())) return verdict;
      }
    }
  }
  return verdict;
}

}  // namespace shiqv
