#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "shiqv/concept.hpp"
#include "shiqv/labelset.hpp"
#include "shiqv/ontology.hpp"
#include "shiqv/reasoner.hpp"

namespace shiqv {

enum class RuleId { k1a, k2a, k3a, k4a, k4b, k5a, k5b, k5c, k6a, k6b, k6c, k6d, k7a, k7b, k7c };

struct RefinementRule {
  RuleId id;
  int ruleset;
  std::string_view name;
  std::string_view antecedents;
  std::string_view condition;
  std::string_view consequents;
};

inline const std::array<RefinementRule, 15>& rule_table() {
  static const std::array<RefinementRule, 15> table = {{
      {RuleId::k1a, 1, "1a", "A, conjuncts of A's definition", "A EQUIV definition", "conjuncts"},
      {RuleId::k2a, 2, "2a", "U, V", "U ⊑ V", "U"},
      {RuleId::k3a, 3, "3a", "∃R.U, ∃S.V", "U ⊑ V, R ⊑ S", "∃R.U"},
      {RuleId::k4a, 4, "4a", "∀R.U, ∀S.V", "U ⊑ V, S ⊑ R", "∀R.U, ∀S.U"},
      {RuleId::k4b, 4, "4b", "∀R.U, ∀R.V", "V ⊑ U", "∀R.V"},
      {RuleId::k5a, 5, "5a", "∃R.U, ∀R.U", "", "∍R.U"},
      {RuleId::k5b, 5, "5b", "∀R.U, ∃S.V", "U ⊑ V, S ⊑ R", "∍R.U, ∍S.U"},
      {RuleId::k5c, 5, "5c", "∀R.U, ∃S.V", "V ⊑ U, S ⊑ R", "∍R.U, ∃S.V"},
      {RuleId::k6a, 6, "6a", "≥nR.U, ≥mS.V", "U ⊑ V, R ⊑ S, n ≥ m", "≥nR.U"},
      {RuleId::k6b, 6, "6b", "∃R.U, ≥nS.V", "V ⊑ U, S ⊑ R, n ≥ 1", "≥nS.V"},
      {RuleId::k6c, 6, "6c", "∃R.U, ≤1R.V", "U ⊑ V", "∃₌₁R.U, ∃₌₁R.V"},
      {RuleId::k6d, 6, "6d", "≥nR.U, ≤nS.V", "R ⊑ S, U ⊑ V", "∃₌ₙR.U, ∃₌ₙS.V"},
      {RuleId::k7a, 7, "7a", "∃R.U, ∃₌₁S.V", "U ⊑ V, R ⊑ S", "∃₌₁R.U, ∃₌₁S.V"},
      {RuleId::k7b, 7, "7b", "∍R.U, ∃₌₁S.V", "U ⊑ V, R ⊑ S", "∃₌₁R.U, ∃₌₁S.V, ∍R.U"},
      {RuleId::k7c, 7, "7c", "≥mR.V, ∃₌ₙR.U", "U ⊑ V, m ≥ n", "∃₌ₙR.U, ≥(m−n)R.(V ⊓ ¬U)"},
  }};
  return table;
}

inline const RefinementRule& rule_info(RuleId id) {
  return rule_table()[static_cast<std::size_t>(id)];
}

inline std::optional<RuleId> rule_from_name(std::string_view name) {
  for (const RefinementRule& r : rule_table()) {
    if (r.name == name) return r.id;
  }
  return std::nullopt;
}

// Test hook: the 7c variant with V ⊔ ¬U must be caught by the oracle.
struct RuleOptions {
  bool disjunctive_7c = false;
};

/**
 * @brief Applies one pairwise rule to the ordered pair (u, v).
 *
 * Returns the deduplicated consequents, or nullopt when the shapes or side
 * conditions do not match. Restrictions over inverse roles never match.
 * Rule 1a is not pairwise; see concept_refinement.
 */
inline std::optional<std::vector<Concept>> apply_rule(RuleId rule, const Concept& u,
                                                      const Concept& v,
                                                      const TaxonomyClosure& tax,
                                                      RuleOptions opts = {}) {
  using K = ConceptKind;
  if (u == v) return std::nullopt;
  auto shape = [](const Concept& c, K k) { return c.is(k) && !c.role().inverted; };
  auto sub = [&](const Concept& a, const Concept& b) { return is_subsumed(a, b, tax); };
  auto rsub = [&](const Role& a, const Role& b) { return tax.role_subsumed(a, b); };
  std::vector<Concept> out;
  switch (rule) {
    case RuleId::k1a:
      return std::nullopt;
    case RuleId::k2a:
      if (!u.is_atomic() || !v.is_atomic() || !sub(u, v)) return std::nullopt;
      if (sub(v, u) && v.name() < u.name()) return std::nullopt;
      out = {u};
      break;
    case RuleId::k3a:
      if (!shape(u, K::kSome) || !shape(v, K::kSome)) return std::nullopt;
      if (!sub(u.filler(), v.filler()) || !rsub(u.role(), v.role())) return std::nullopt;
      out = {u};
      break;
    case RuleId::k4a:
      if (!shape(u, K::kAll) || !shape(v, K::kAll)) return std::nullopt;
      if (!sub(u.filler(), v.filler()) || !rsub(v.role(), u.role())) return std::nullopt;
      out = {u, Concept::all(v.role(), u.filler())};
      break;
    case RuleId::k4b:
      if (!shape(u, K::kAll) || !shape(v, K::kAll) || u.role() != v.role()) return std::nullopt;
      if (!sub(v.filler(), u.filler())) return std::nullopt;
      out = {v};
      break;
    case RuleId::k5a:
      if (!shape(u, K::kSome) || !shape(v, K::kAll) || u.role() != v.role()) return std::nullopt;
      if (!(u.filler() == v.filler())) return std::nullopt;
      out = {Concept::non_vacuous(u.role(), u.filler())};
      break;
    case RuleId::k5b:
      if (!shape(u, K::kAll) || !shape(v, K::kSome)) return std::nullopt;
      if (!sub(u.filler(), v.filler()) || !rsub(v.role(), u.role())) return std::nullopt;
      out = {Concept::non_vacuous(u.role(), u.filler()), Concept::non_vacuous(v.role(), u.filler())};
      break;
    case RuleId::k5c:
      if (!shape(u, K::kAll) || !shape(v, K::kSome)) return std::nullopt;
      if (!sub(v.filler(), u.filler()) || !rsub(v.role(), u.role())) return std::nullopt;
      out = {Concept::non_vacuous(u.role(), u.filler()), v};
      break;
    case RuleId::k6a:
      if (!shape(u, K::kAtLeast) || !shape(v, K::kAtLeast)) return std::nullopt;
      if (!sub(u.filler(), v.filler()) || !rsub(u.role(), v.role())) return std::nullopt;
      if (u.number() < v.number()) return std::nullopt;
      out = {u};
      break;
    case RuleId::k6b:
      if (!shape(u, K::kSome) || !shape(v, K::kAtLeast)) return std::nullopt;
      if (!sub(v.filler(), u.filler()) || !rsub(v.role(), u.role())) return std::nullopt;
      out = {v};
      break;
    case RuleId::k6c:
      if (!shape(u, K::kSome) || !shape(v, K::kAtMost) || u.role() != v.role()) return std::nullopt;
      if (v.number() != 1 || !sub(u.filler(), v.filler())) return std::nullopt;
      out = {Concept::exactly(1, u.role(), u.filler()), Concept::exactly(1, v.role(), v.filler())};
      break;
    case RuleId::k6d:
      if (!shape(u, K::kAtLeast) || !shape(v, K::kAtMost)) return std::nullopt;
      if (u.number() != v.number()) return std::nullopt;
      if (!rsub(u.role(), v.role()) || !sub(u.filler(), v.filler())) return std::nullopt;
      out = {Concept::exactly(u.number(), u.role(), u.filler()),
             Concept::exactly(v.number(), v.role(), v.filler())};
      break;
    case RuleId::k7a:
    case RuleId::k7b: {
      K first = rule == RuleId::k7a ? K::kSome : K::kNonVacuous;
      if (!shape(u, first) || !shape(v, K::kExactly) || v.number() != 1) return std::nullopt;
      if (!sub(u.filler(), v.filler()) || !rsub(u.role(), v.role())) return std::nullopt;
      out = {Concept::exactly(1, u.role(), u.filler()), v};
      if (rule == RuleId::k7b) out.push_back(u);
      break;
    }
    case RuleId::k7c: {
      if (!shape(u, K::kAtLeast) || !shape(v, K::kExactly) || u.role() != v.role()) return std::nullopt;
      unsigned m = u.number();
      unsigned n = v.number();
      if (m < n || !sub(v.filler(), u.filler())) return std::nullopt;
      out = {v};
      if (m > n) {
        Concept rest = opts.disjunctive_7c
                           ? Concept::disjunction({u.filler(), Concept::negation(v.filler())})
                           : Concept::conjunction({u.filler(), Concept::negation(v.filler())});
        out.push_back(Concept::at_least(m - n, u.role(), rest));
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct TraceStep {
  int ruleset = 0;
  std::string rule;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> pr_marked;
  std::vector<std::string> purged;
};

namespace detail {

inline std::vector<std::string> strs(const std::vector<Concept>& cs) {
  std::vector<std::string> out;
  for (const Concept& c : cs) out.push_back(c.str());
  return out;
}

// Conjunct c of a definition is accounted for by ls.
inline bool definition_conjunct_present(const Concept& c, const LabelSet& ls) {
  if (c.is(ConceptKind::kTop)) return true;
  if (!c.is(ConceptKind::kOr)) return ls.contains(c);
  for (const Concept& d : ls.deferred) {
    if (d == c) return true;
  }
  for (const Concept& op : c.operands()) {
    if (ls.contains(op)) return true;
  }
  return false;
}

}  // namespace detail

/**
 * @brief Rule 1a: drops defined names whose definition conjuncts are all in ls.
 *
 * Names are removed one at a time. A name that is itself a conjunct of
 * another removable definition waits, so definitions never vouch for each
 * other after both are gone. Ties go to the smallest name.
 */
inline LabelSet concept_refinement(LabelSet ls, const Ontology& o,
                                   std::vector<TraceStep>* trace = nullptr) {
  std::map<std::string, std::vector<Concept>> defs;
  for (const Axiom& ax : o.tbox) {
    auto* e = std::get_if<EquivClass>(&ax);
    if (!e || !e->lhs.is_atomic()) continue;
    auto& conj = defs[e->lhs.name()];
    for (const Concept& c : to_cnf_top(e->rhs)) conj.push_back(c);
  }
  while (true) {
    std::vector<Concept> removable;
    for (const Concept& label : ls.labels()) {
      if (!label.is_atomic()) continue;
      auto it = defs.find(label.name());
      if (it == defs.end()) continue;
      bool ok = true;
      for (const Concept& c : it->second) {
        if (c == label || !detail::definition_conjunct_present(c, ls)) {
          ok = false;
          break;
        }
      }
      if (ok) removable.push_back(label);
    }
    if (removable.empty()) break;
    const Concept* chosen = nullptr;
    for (const Concept& a : removable) {
      bool blocked = false;
      for (const Concept& b : removable) {
        if (a == b) continue;
        const auto& conj = defs[b.name()];
        if (std::find(conj.begin(), conj.end(), a) != conj.end()) blocked = true;
      }
      if (!blocked) {
        chosen = &a;
        break;
      }
    }
    if (!chosen) chosen = &removable.front();
    Concept gone = *chosen;
    ls.erase(gone);
    if (trace) trace->push_back({1, "1a", {gone.str()}, {}, {}, {gone.str()}});
  }
  return ls;
}

// Rule 2a alone: keeps the most specific atomic labels.
inline LabelSet superclass_refinement(LabelSet ls, const TaxonomyClosure& tax) {
  std::vector<Concept> drop;
  for (const Concept& v : ls.labels()) {
    for (const Concept& u : ls.labels()) {
      if (apply_rule(RuleId::k2a, u, v, tax)) {
        drop.push_back(v);
        break;
      }
    }
  }
  for (const Concept& c : drop) ls.erase(c);
  return ls;
}

namespace detail {

// Highest rule set whose antecedents can consume a label of this form.
inline int last_consuming_ruleset(ConceptKind k) {
  switch (k) {
    case ConceptKind::kAtomic: return 2;
    case ConceptKind::kAll: return 5;
    case ConceptKind::kAtMost: return 6;
    case ConceptKind::kSome:
    case ConceptKind::kAtLeast:
    case ConceptKind::kNonVacuous:
    case ConceptKind::kExactly: return 7;
    default: return 0;
  }
}

inline bool effective_firing(const Concept& u, const Concept& v, const std::vector<Concept>& out,
                             const LabelSet& ls) {
  bool u_kept = std::find(out.begin(), out.end(), u) != out.end();
  bool v_kept = std::find(out.begin(), out.end(), v) != out.end();
  if (!u_kept || !v_kept) return true;
  for (const Concept& c : out) {
    if (!ls.contains(c)) return true;
  }
  return false;
}

}  // namespace detail

struct RefinementResult {
  LabelSet labels;
  std::vector<TraceStep> trace;
  std::size_t firings = 0;
};

/**
 * @brief Semantic refinement of a label-set (rule sets 1 to 7).
 *
 * Pairs are scanned in canonical order and each rule set runs until no new
 * firing occurs. Labels consumed by a firing are marked PR at the end of the
 * set unless the firing reproduced them; PR labels take no further part and
 * are purged once no later set can consume their form. Deferred D-clauses are
 * carried through untouched.
 */
inline RefinementResult semantic_refine_traced(LabelSet ls, const Ontology& o,
                                               const TaxonomyClosure& tax,
                                               RuleOptions opts = {}) {
  RefinementResult res;
  ls.unmark_all();
  const std::size_t budget = 15 * std::max<std::size_t>(ls.size(), 1) * std::max<std::size_t>(ls.size(), 1);
  ls = concept_refinement(std::move(ls), o, &res.trace);

  for (int rs = 2; rs <= 7; ++rs) {
    std::set<std::string> reduced;
    std::set<std::tuple<RuleId, std::string, std::string>> tried;
    bool fired = true;
    while (fired) {
      fired = false;
      const std::vector<Concept> snapshot = ls.labels();
      for (const Concept& u : snapshot) {
        for (const Concept& v : snapshot) {
          if (u == v || ls.is_pr(u) || ls.is_pr(v)) continue;
          for (const RefinementRule& rule : rule_table()) {
            if (rule.ruleset != rs) continue;
            if (!tried.insert({rule.id, u.str(), v.str()}).second) continue;
            auto out = apply_rule(rule.id, u, v, tax, opts);
            if (!out || !detail::effective_firing(u, v, *out, ls)) continue;
            if (++res.firings > budget) {
              throw std::logic_error("refinement exceeded the firing bound");
            }
            for (const Concept& c : *out) ls.insert(c);
            reduced.insert(u.str());
            reduced.insert(v.str());
            for (const Concept& c : *out) reduced.erase(c.str());
            std::vector<std::string> consumed;
            for (const Concept* a : {&u, &v}) {
              if (std::find(out->begin(), out->end(), *a) == out->end()) consumed.push_back(a->str());
            }
            res.trace.push_back({rs, std::string(rule.name), {u.str(), v.str()},
                                 detail::strs(*out), consumed, {}});
            fired = true;
          }
        }
      }
    }
    TraceStep summary{rs, "purge", {}, {}, {}, {}};
    for (const Concept& c : ls.labels()) {
      if (reduced.count(c.str())) {
        ls.mark_pr(c);
        summary.pr_marked.push_back(c.str());
      }
    }
    for (const Concept& c : ls.pr_labels()) {
      if (rs == 7 || detail::last_consuming_ruleset(c.kind()) <= rs) {
        summary.purged.push_back(c.str());
        ls.erase(c);
      }
    }
    if (!summary.pr_marked.empty() || !summary.purged.empty()) res.trace.push_back(summary);
  }
  res.labels = std::move(ls);
  return res;
}

inline LabelSet semantic_refine(LabelSet ls, const Ontology& o, const TaxonomyClosure& tax) {
  return semantic_refine_traced(std::move(ls), o, tax).labels;
}

// True when no pairwise rule would change ls.
inline bool is_fixed_point(const LabelSet& ls, const TaxonomyClosure& tax) {
  for (const Concept& u : ls.labels()) {
    for (const Concept& v : ls.labels()) {
      if (u == v) continue;
      for (const RefinementRule& rule : rule_table()) {
        auto out = apply_rule(rule.id, u, v, tax);
        if (out && detail::effective_firing(u, v, *out, ls)) return false;
      }
    }
  }
  return true;
}

}  // namespace shiqv
