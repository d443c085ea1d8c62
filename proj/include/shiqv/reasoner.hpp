#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "shiqv/concept.hpp"
#include "shiqv/ontology.hpp"
#include "shiqv/parser.hpp"

namespace shiqv {

inline const std::string kTopName = "TOP";
inline const std::string kBottomName = "BOT";

/**
 * @brief Told subsumption closure over concept names and roles.
 *
 * Both relations are reflexive and transitive. Names the closure has never
 * seen are still related to themselves, to TOP and from BOT.
 */
struct TaxonomyClosure {
  std::map<std::string, std::set<std::string>> concept_supers;
  std::map<Role, std::set<Role>> role_supers;

  bool concept_subsumed(const std::string& sub, const std::string& sup) const {
    if (sub == sup || sup == kTopName || sub == kBottomName) return true;
    auto it = concept_supers.find(sub);
    return it != concept_supers.end() && (it->second.count(sup) || it->second.count(kBottomName));
  }

  bool role_subsumed(const Role& sub, const Role& sup) const {
    if (sub == sup) return true;
    auto it = role_supers.find(sub);
    return it != role_supers.end() && it->second.count(sup);
  }

  std::set<std::string> supers_of(const std::string& name) const {
    std::set<std::string> out{name, kTopName};
    auto it = concept_supers.find(name);
    if (it != concept_supers.end()) out.insert(it->second.begin(), it->second.end());
    return out;
  }

  std::set<Role> role_supers_of(const Role& r) const {
    std::set<Role> out{r};
    auto it = role_supers.find(r);
    if (it != role_supers.end()) out.insert(it->second.begin(), it->second.end());
    return out;
  }
};

namespace detail {

template <typename T>
std::map<T, std::set<T>> transitive_closure(const std::map<T, std::set<T>>& edges,
                                            const std::set<T>& nodes) {
  std::map<T, std::set<T>> out;
  for (const T& start : nodes) {
    std::set<T>& seen = out[start];
    std::vector<T> stack{start};
    while (!stack.empty()) {
      T cur = stack.back();
      stack.pop_back();
      if (!seen.insert(cur).second) continue;
      auto it = edges.find(cur);
      if (it == edges.end()) continue;
      for (const T& n : it->second) stack.push_back(n);
    }
  }
  return out;
}

}  // namespace detail

inline TaxonomyClosure classify(const Ontology& o) {
  std::map<std::string, std::set<std::string>> edges;
  std::set<std::string> names = o.concept_names;
  names.insert(kTopName);
  names.insert(kBottomName);
  auto add_conjunct_edges = [&](const std::string& a, const Concept& rhs) {
    for (const Concept& c : to_cnf_top(rhs)) {
      if (c.is_atomic()) edges[a].insert(c.name());
      if (c.is(ConceptKind::kBottom)) edges[a].insert(kBottomName);
    }
  };
  for (const Axiom& ax : o.tbox) {
    if (auto* s = std::get_if<SubClass>(&ax)) {
      if (s->sub.is_atomic()) add_conjunct_edges(s->sub.name(), s->sup);
    } else if (auto* e = std::get_if<EquivClass>(&ax)) {
      if (!e->lhs.is_atomic()) continue;
      add_conjunct_edges(e->lhs.name(), e->rhs);
      if (e->rhs.is_atomic()) edges[e->rhs.name()].insert(e->lhs.name());
    }
  }
  for (const std::string& n : names) edges[n].insert(kTopName);
  for (const std::string& n : names) edges[kBottomName].insert(n);

  std::map<Role, std::set<Role>> role_edges;
  std::set<Role> roles;
  for (const std::string& r : o.role_names) {
    roles.insert(Role(r));
    roles.insert(Role(r, true));
  }
  for (const Axiom& ax : o.tbox) {
    if (auto* s = std::get_if<SubRole>(&ax)) {
      role_edges[s->sub].insert(s->sup);
      role_edges[s->sub.inverse()].insert(s->sup.inverse());
    }
  }

  TaxonomyClosure tax;
  tax.concept_supers = detail::transitive_closure(edges, names);
  tax.role_supers = detail::transitive_closure(role_edges, roles);
  return tax;
}

/**
 * @brief Sound structural subsumption test under told axioms.
 *
 * Never answers true unless c ⊑ d is entailed; incomplete by construction.
 */
inline bool is_subsumed(const Concept& c, const Concept& d, const TaxonomyClosure& tax) {
  if (c == d) return true;
  if (d.is(ConceptKind::kTop) || c.is(ConceptKind::kBottom)) return true;
  const bool derived = c.is(ConceptKind::kNonVacuous) || c.is(ConceptKind::kExactly) ||
                       d.is(ConceptKind::kNonVacuous) || d.is(ConceptKind::kExactly);
  if (derived) return is_subsumed(expand_derived(c), expand_derived(d), tax);

  if (c.is_atomic() && d.is_atomic()) return tax.concept_subsumed(c.name(), d.name());
  if (c.is_atomic() && d.is(ConceptKind::kBottom)) return tax.concept_subsumed(c.name(), kBottomName);

  if (d.is(ConceptKind::kAnd)) {
    for (const Concept& op : d.operands()) {
      if (!is_subsumed(c, op, tax)) return false;
    }
    return true;
  }
  if (c.is(ConceptKind::kOr)) {
    for (const Concept& op : c.operands()) {
      if (!is_subsumed(op, d, tax)) return false;
    }
    return true;
  }
  if (c.is(ConceptKind::kAnd)) {
    for (const Concept& op : c.operands()) {
      if (is_subsumed(op, d, tax)) return true;
    }
  }
  if (d.is(ConceptKind::kOr)) {
    for (const Concept& op : d.operands()) {
      if (is_subsumed(c, op, tax)) return true;
    }
    return false;
  }
  if (c.is(ConceptKind::kNot) && d.is(ConceptKind::kNot)) {
    return is_subsumed(d.inner(), c.inner(), tax);
  }

  auto exists_like = [](const Concept& x) -> unsigned {
    if (x.is(ConceptKind::kSome)) return 1;
    if (x.is(ConceptKind::kAtLeast)) return x.number();
    return 0;
  };
  unsigned nc = exists_like(c);
  unsigned nd = exists_like(d);
  if (nc && nd) {
    return nc >= nd && tax.role_subsumed(c.role(), d.role()) && is_subsumed(c.filler(), d.filler(), tax);
  }
  if (c.is(ConceptKind::kAll) && d.is(ConceptKind::kAll)) {
    return tax.role_subsumed(d.role(), c.role()) && is_subsumed(c.filler(), d.filler(), tax);
  }
  if (c.is(ConceptKind::kAtMost) && d.is(ConceptKind::kAtMost)) {
    return c.number() <= d.number() && tax.role_subsumed(d.role(), c.role()) &&
           is_subsumed(d.filler(), c.filler(), tax);
  }
  return false;
}

struct Fact {
  std::string predicate;
  std::string subject;
  std::string object;  // empty for concept facts

  bool is_role() const { return !object.empty(); }
  std::string str() const {
    return is_role() ? predicate + "(" + subject + "," + object + ")" : predicate + "(" + subject + ")";
  }
  friend auto operator<=>(const Fact&, const Fact&) = default;
  friend bool operator==(const Fact&, const Fact&) = default;
};

struct Derivation {
  Fact fact;
  std::string rule;
  std::vector<std::string> premises;
};

struct Inconsistency {
  std::string individual;
  std::string axiom;  // native rendering of the violated axiom
};

/** @brief An ontology together with its forward-chained ABox facts. */
struct MaterializedOntology {
  Ontology base;
  std::map<std::string, std::set<std::string>> types;
  std::set<std::tuple<std::string, std::string, std::string>> edges;  // role, subject, object
  std::map<std::string, std::vector<Concept>> asserted_complex;
  std::vector<Derivation> provenance;
  std::vector<Inconsistency> inconsistencies;

  bool has_type(const std::string& x, const std::string& a) const {
    if (a == kTopName) return true;
    auto it = types.find(x);
    return it != types.end() && it->second.count(a);
  }

  bool has_edge(const std::string& r, const std::string& x, const std::string& y) const {
    return edges.count({r, x, y}) > 0;
  }

  std::vector<std::string> successors(const std::string& x, const Role& r) const {
    std::vector<std::string> out;
    for (const auto& [role, s, o] : edges) {
      if (role != r.name) continue;
      if (!r.inverted && s == x) out.push_back(o);
      if (r.inverted && o == x) out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool inconsistent(const std::string& x) const {
    for (const Inconsistency& i : inconsistencies) {
      if (i.individual == x) return true;
    }
    return false;
  }

  bool distinct(const std::string& a, const std::string& b) const {
    for (const Axiom& ax : base.abox) {
      if (auto* q = std::get_if<Inequality>(&ax)) {
        if ((q->a == a && q->b == b) || (q->a == b && q->b == a)) return true;
      }
    }
    return false;
  }

  std::set<Fact> facts() const {
    std::set<Fact> out;
    for (const auto& [x, names] : types) {
      for (const std::string& n : names) out.insert({n, x, ""});
    }
    for (const auto& [r, s, o] : edges) out.insert({r, s, o});
    return out;
  }
};

/**
 * @brief Top-level conjuncts of the told class axioms of every type of x,
 * plus those of complex concepts asserted for x. Order follows the TBox.
 */
inline std::vector<Concept> told_conjuncts(const std::string& x, const MaterializedOntology& m) {
  std::vector<Concept> out;
  auto it = m.types.find(x);
  if (it != m.types.end()) {
    for (const Axiom& ax : m.base.tbox) {
      const Concept* lhs = nullptr;
      const Concept* rhs = nullptr;
      if (auto* s = std::get_if<SubClass>(&ax)) {
        lhs = &s->sub;
        rhs = &s->sup;
      } else if (auto* e = std::get_if<EquivClass>(&ax)) {
        lhs = &e->lhs;
        rhs = &e->rhs;
      }
      if (!lhs || !lhs->is_atomic() || !it->second.count(lhs->name())) continue;
      for (const Concept& c : to_cnf_top(*rhs)) out.push_back(c);
    }
  }
  auto ac = m.asserted_complex.find(x);
  if (ac != m.asserted_complex.end()) {
    for (const Concept& c : ac->second) {
      for (const Concept& k : to_cnf_top(c)) out.push_back(k);
    }
  }
  return out;
}

// Told conjuncts with derived constructors expanded into their primitive parts.
inline std::vector<Concept> told_primitive_conjuncts(const std::string& x,
                                                     const MaterializedOntology& m) {
  std::vector<Concept> out;
  for (const Concept& c : told_conjuncts(x, m)) {
    for (const Concept& k : to_cnf_top(expand_derived(c))) out.push_back(k);
  }
  return out;
}

inline bool holds_restriction(const std::string& x, const Concept& r, const MaterializedOntology& m,
                       const TaxonomyClosure& tax);

/**
 * @brief Sound membership test of x in c over materialized facts.
 *
 * Negation is granted only through a disjointness definition or a told
 * negative conjunct, never by absence of a fact.
 */
inline bool holds_member(const std::string& x, const Concept& c, const MaterializedOntology& m,
                         const TaxonomyClosure& tax) {
  switch (c.kind()) {
    case ConceptKind::kTop: return true;
    case ConceptKind::kBottom: return false;
    case ConceptKind::kAtomic: return m.has_type(x, c.name());
    case ConceptKind::kAnd:
      for (const Concept& op : c.operands()) {
        if (!holds_member(x, op, m, tax)) return false;
      }
      return true;
    case ConceptKind::kOr:
      for (const Concept& op : c.operands()) {
        if (holds_member(x, op, m, tax)) return true;
      }
      return false;
    case ConceptKind::kNot: {
      const Concept& inner = c.inner();
      if (inner.is(ConceptKind::kNot)) return holds_member(x, inner.inner(), m, tax);
      for (const Concept& t : told_primitive_conjuncts(x, m)) {
        if (t.is(ConceptKind::kNot) && is_subsumed(inner, t.inner(), tax)) return true;
      }
      for (const Axiom& ax : m.base.tbox) {
        auto* e = std::get_if<EquivClass>(&ax);
        if (!e || !e->lhs.is(ConceptKind::kBottom)) continue;
        auto parts = to_cnf_top(e->rhs);
        for (std::size_t i = 0; i < parts.size(); ++i) {
          if (!is_subsumed(inner, parts[i], tax)) continue;
          bool rest = true;
          for (std::size_t j = 0; j < parts.size() && rest; ++j) {
            if (j != i) rest = holds_member(x, parts[j], m, tax);
          }
          if (rest) return true;
        }
      }
      return false;
    }
    default:
      return holds_restriction(x, c, m, tax);
  }
}

namespace detail {

// True when `candidates` contains n elements that are pairwise asserted distinct.
inline bool has_distinct_subset(const std::vector<std::string>& candidates, unsigned n,
                                const MaterializedOntology& m) {
  if (n == 0) return true;
  if (candidates.size() < n) return false;
  std::vector<std::string> chosen;
  std::function<bool(std::size_t)> pick = [&](std::size_t from) {
    if (chosen.size() == n) return true;
    for (std::size_t i = from; i < candidates.size(); ++i) {
      bool ok = true;
      for (const std::string& c : chosen) ok = ok && m.distinct(c, candidates[i]);
      if (!ok) continue;
      chosen.push_back(candidates[i]);
      if (pick(i + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  return pick(0);
}

}  // namespace detail

/**
 * @brief Sound check that the restriction r holds for individual x.
 *
 * ∃ and ≥ may be witnessed by known successors; ∀ and ≤ only by a told
 * conjunct of one of x's classes.
 */
inline bool holds_restriction(const std::string& x, const Concept& r, const MaterializedOntology& m,
                              const TaxonomyClosure& tax) {
  Concept e = expand_derived(r);
  if (e.is(ConceptKind::kAnd) || e.is(ConceptKind::kOr) || !e.is_restriction()) {
    return holds_member(x, e, m, tax);
  }
  for (const Concept& t : told_primitive_conjuncts(x, m)) {
    if (is_subsumed(t, e, tax)) return true;
  }
  if (e.is(ConceptKind::kSome) || e.is(ConceptKind::kAtLeast)) {
    std::vector<std::string> witnesses;
    for (const std::string& b : m.successors(x, e.role())) {
      if (holds_member(b, e.filler(), m, tax)) witnesses.push_back(b);
    }
    unsigned n = e.is(ConceptKind::kSome) ? 1 : e.number();
    return detail::has_distinct_subset(witnesses, n, m);
  }
  return false;
}

namespace detail {

class Materializer {
 public:
  Materializer(const Ontology& o, const TaxonomyClosure& tax) : tax_(tax) { m_.base = o; }

  MaterializedOntology run() {
    for (const Axiom& ax : m_.base.abox) {
      if (auto* c = std::get_if<ConceptAssertion>(&ax)) {
        m_.types[c->individual];
        if (c->expr.is_atomic()) {
          add_type(c->individual, c->expr.name(), "assertion", {render_axiom(ax)});
        } else if (!c->expr.is(ConceptKind::kTop)) {
          m_.asserted_complex[c->individual].push_back(c->expr);
          for (const Concept& k : to_cnf_top(c->expr)) {
            if (k.is_atomic()) add_type(c->individual, k.name(), "assertion", {render_axiom(ax)});
          }
        }
      } else if (auto* r = std::get_if<RoleAssertion>(&ax)) {
        m_.types[r->subject];
        m_.types[r->object];
        add_edge(r->role, r->subject, r->object, "assertion", {render_axiom(ax)});
      } else if (auto* q = std::get_if<Inequality>(&ax)) {
        m_.types[q->a];
        m_.types[q->b];
      }
    }
    for (const std::string& t : m_.base.transitive_roles()) transitive_.insert(t);
    for (const Axiom& ax : m_.base.tbox) {
      if (auto* e = std::get_if<EquivClass>(&ax)) definitions_.push_back(e);
    }
    changed_ = true;
    while (changed_) {
      changed_ = false;
      subsumption_step();
      role_step();
      definition_step();
      universal_step();
      at_most_one_step();
    }
    return std::move(m_);
  }

 private:
  std::vector<std::string> individuals() const {
    std::vector<std::string> out;
    for (const auto& [x, _] : m_.types) out.push_back(x);
    return out;
  }

  void add_type(const std::string& x, const std::string& a, const std::string& rule,
                std::vector<std::string> premises) {
    if (a == kTopName) return;
    if (a == kBottomName) {
      flag(x, premises.empty() ? rule : premises.back());
      return;
    }
    if (!m_.types[x].insert(a).second) return;
    m_.provenance.push_back({Fact{a, x, ""}, rule, std::move(premises)});
    changed_ = true;
  }

  void add_edge(const std::string& r, const std::string& x, const std::string& y,
                const std::string& rule, std::vector<std::string> premises) {
    if (!m_.edges.insert({r, x, y}).second) return;
    m_.types[x];
    m_.types[y];
    m_.provenance.push_back({Fact{r, x, y}, rule, std::move(premises)});
    changed_ = true;
  }

  void flag(const std::string& x, const std::string& axiom) {
    for (const Inconsistency& i : m_.inconsistencies) {
      if (i.individual == x && i.axiom == axiom) return;
    }
    m_.inconsistencies.push_back({x, axiom});
  }

  void subsumption_step() {
    for (const std::string& x : individuals()) {
      std::set<std::string> current = m_.types[x];
      for (const std::string& a : current) {
        auto it = tax_.concept_supers.find(a);
        if (it == tax_.concept_supers.end()) continue;
        for (const std::string& b : it->second) {
          if (b == a) continue;
          if (b == kBottomName) {
            flag(x, a + " SUBCLASSOF BOT");
            continue;
          }
          add_type(x, b, "subsumption", {Fact{a, x, ""}.str(), a + " SUBCLASSOF* " + b});
        }
      }
    }
  }

  void role_step() {
    auto snapshot = m_.edges;
    for (const auto& [r, s, o] : snapshot) {
      for (const Role& sup : tax_.role_supers_of(Role(r))) {
        if (sup == Role(r)) continue;
        std::string premise = Fact{r, s, o}.str();
        std::string why = r + " SUBROLE* " + sup.str();
        if (sup.inverted) {
          add_edge(sup.name, o, s, "role-hierarchy", {premise, why});
        } else {
          add_edge(sup.name, s, o, "role-hierarchy", {premise, why});
        }
      }
    }
    for (const std::string& t : transitive_) {
      bool grew = true;
      while (grew) {
        grew = false;
        auto current = m_.edges;
        for (const auto& [r1, a, b] : current) {
          if (r1 != t) continue;
          for (const auto& [r2, b2, c] : current) {
            if (r2 != t || b2 != b) continue;
            std::size_t before = m_.edges.size();
            add_edge(t, a, c, "transitivity",
                     {Fact{t, a, b}.str(), Fact{t, b, c}.str(), "TRANSITIVE " + t});
            grew = grew || m_.edges.size() != before;
          }
        }
      }
    }
  }

  void definition_step() {
    for (const std::string& x : individuals()) {
      for (const EquivClass* e : definitions_) {
        if (e->lhs.is_atomic() && m_.has_type(x, e->lhs.name())) continue;
        bool all = true;
        for (const Concept& c : to_cnf_top(e->rhs)) {
          if (!holds_member(x, c, m_, tax_)) {
            all = false;
            break;
          }
        }
        if (!all) continue;
        std::string axiom = render_axiom(*e);
        if (e->lhs.is(ConceptKind::kBottom)) {
          flag(x, axiom);
        } else if (e->lhs.is_atomic()) {
          add_type(x, e->lhs.name(), "definition", {axiom});
        }
      }
    }
  }

  // ∀R.C told for x and R'(x,b) with R' ⊑ R give C(b).
  void universal_step() {
    for (const std::string& x : individuals()) {
      for (const Concept& t : told_primitive_conjuncts(x, m_)) {
        if (!t.is(ConceptKind::kAll)) continue;
        for (const std::string& b : m_.successors(x, t.role())) {
          for (const Concept& k : to_cnf_top(t.filler())) {
            if (k.is_atomic() || k.is(ConceptKind::kBottom)) {
              add_type(b, k.is_atomic() ? k.name() : kBottomName, "universal",
                       {Fact{t.role().str(), x, b}.str(), "told " + t.str() + " for " + x});
            }
          }
        }
      }
    }
  }

  // ≤1R.D and ∃R'.C (R' ⊑ R, C ⊑ D) told for x: the C-witness is the only
  // R-successor in D, so any known such successor is in C.
  void at_most_one_step() {
    for (const std::string& x : individuals()) {
      auto told = told_primitive_conjuncts(x, m_);
      for (const Concept& limit : told) {
        if (!limit.is(ConceptKind::kAtMost) || limit.number() != 1) continue;
        for (const Concept& w : told) {
          if (!w.is(ConceptKind::kSome) && !w.is(ConceptKind::kAtLeast)) continue;
          if (!tax_.role_subsumed(w.role(), limit.role())) continue;
          if (!is_subsumed(w.filler(), limit.filler(), tax_)) continue;
          for (const std::string& b : m_.successors(x, limit.role())) {
            if (!holds_member(b, limit.filler(), m_, tax_)) continue;
            for (const Concept& k : to_cnf_top(w.filler())) {
              if (!k.is_atomic()) continue;
              add_type(b, k.name(), "at-most-one",
                       {Fact{limit.role().str(), x, b}.str(), "told " + limit.str() + " for " + x,
                        "told " + w.str() + " for " + x});
            }
          }
        }
      }
    }
  }

  const TaxonomyClosure& tax_;
  MaterializedOntology m_;
  std::set<std::string> transitive_;
  std::vector<const EquivClass*> definitions_;
  bool changed_ = false;
};

}  // namespace detail

/**
 * @brief Forward-chains the ABox to a fixpoint.
 *
 * Rules: told subsumption, definition completion, role hierarchy (including
 * inverses), transitivity, ∀-propagation along known edges, and the ≤1 merge
 * of a told ∃-witness with a known successor. ⊥ derivations are recorded in
 * `inconsistencies`.
 */
inline MaterializedOntology materialize(const Ontology& o, const TaxonomyClosure& tax) {
  return detail::Materializer(o, tax).run();
}

}  // namespace shiqv
