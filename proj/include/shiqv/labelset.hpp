#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "shiqv/concept.hpp"
#include "shiqv/ontology.hpp"
#include "shiqv/reasoner.hpp"

namespace shiqv {

class UnknownEntityError : public std::runtime_error {
 public:
  explicit UnknownEntityError(const std::string& name)
      : std::runtime_error("unknown entity '" + name + "'") {}
};

class InconsistentIndividualError : public std::runtime_error {
 public:
  InconsistentIndividualError(const std::string& individual, const std::string& axiom)
      : std::runtime_error("individual '" + individual + "' is inconsistent: " + axiom) {}
};

class UnsatisfiableConceptError : public std::runtime_error {
 public:
  explicit UnsatisfiableConceptError(const std::string& name)
      : std::runtime_error("concept '" + name + "' is unsatisfiable") {}
};

/**
 * @brief Set of first-level labels of an individual or concept.
 *
 * Labels are kept sorted by canonical serialization and never contain TOP or
 * a top-level disjunction. PR marks are bookkeeping for refinement.
 */
class LabelSet {
 public:
  std::string owner;
  std::vector<Concept> deferred;  // D-clauses awaiting re-injection

  LabelSet() = default;
  explicit LabelSet(std::string o) : owner(std::move(o)) {}
  LabelSet(std::string o, const std::vector<Concept>& labels) : owner(std::move(o)) {
    for (const Concept& c : labels) insert(c);
  }

  bool insert(const Concept& c) {
    if (c.is(ConceptKind::kTop)) return false;
    if (c.is(ConceptKind::kOr)) throw std::invalid_argument("label with top-level disjunction: " + c.str());
    auto it = std::lower_bound(labels_.begin(), labels_.end(), c);
    if (it != labels_.end() && *it == c) return false;
    labels_.insert(it, c);
    return true;
  }

  bool erase(const Concept& c) {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), c);
    if (it == labels_.end() || !(*it == c)) return false;
    labels_.erase(it);
    pr_.erase(c.str());
    return true;
  }

  bool contains(const Concept& c) const {
    return std::binary_search(labels_.begin(), labels_.end(), c);
  }

  void add_deferred(const Concept& d) {
    if (std::find(deferred.begin(), deferred.end(), d) == deferred.end()) deferred.push_back(d);
  }

  const std::vector<Concept>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  bool is_pr(const Concept& c) const { return pr_.count(c.str()) > 0; }
  void mark_pr(const Concept& c) {
    if (contains(c)) pr_.insert(c.str());
  }
  void unmark_all() { pr_.clear(); }
  std::vector<Concept> pr_labels() const {
    std::vector<Concept> out;
    for (const Concept& c : labels_) {
      if (is_pr(c)) out.push_back(c);
    }
    return out;
  }

  // Conjunction of labels and deferred D-clauses.
  Concept conjunction() const {
    std::vector<Concept> all = labels_;
    all.insert(all.end(), deferred.begin(), deferred.end());
    return Concept::conjunction(std::move(all));
  }

  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (const Concept& c : labels_) out.push_back(c.str());
    return out;
  }

  friend bool operator==(const LabelSet& a, const LabelSet& b) {
    return a.labels_ == b.labels_ && a.deferred == b.deferred;
  }

 private:
  std::vector<Concept> labels_;
  std::set<std::string> pr_;
};

struct EdgeLabelSet {
  std::string subject;
  std::string object;
  std::set<std::string> roles;
};

inline std::set<std::string> seed_concepts(const std::string& x, const MaterializedOntology& m) {
  std::set<std::string> out;
  auto it = m.types.find(x);
  if (it == m.types.end()) return out;
  for (const std::string& a : it->second) {
    if (a != kTopName && a != kBottomName) out.insert(a);
  }
  return out;
}

// Operands of the D-clause d that provably hold for x.
inline std::vector<Concept> handle_d_clause(const std::string& x, const Concept& d,
                                            const MaterializedOntology& m,
                                            const TaxonomyClosure& tax) {
  std::vector<Concept> out;
  std::vector<Concept> ops;
  if (d.is(ConceptKind::kOr)) {
    ops.assign(d.operands().begin(), d.operands().end());
  } else {
    ops.push_back(d);
  }
  for (const Concept& e : ops) {
    bool holds = e.is_restriction() ? holds_restriction(x, e, m, tax) : holds_member(x, e, m, tax);
    if (holds) out.push_back(e);
  }
  return out;
}

namespace detail {

inline bool is_label_form(const Concept& c) {
  return c.is_atomic() || c.is_restriction();
}

}  // namespace detail

/**
 * @brief Node-label-set of individual x: seed concepts plus the first-level
 * restrictions of their told axioms, with D-clauses resolved or deferred.
 */
inline LabelSet node_label_set(const std::string& x, const MaterializedOntology& m,
                               const TaxonomyClosure& tax) {
  for (const Inconsistency& i : m.inconsistencies) {
    if (i.individual == x) throw InconsistentIndividualError(x, i.axiom);
  }
  LabelSet ls(x);
  for (const std::string& a : seed_concepts(x, m)) ls.insert(Concept::atomic(a));
  for (const Concept& c : told_conjuncts(x, m)) {
    if (c.is(ConceptKind::kOr)) {
      auto held = handle_d_clause(x, c, m, tax);
      for (const Concept& e : held) {
        if (detail::is_label_form(e)) ls.insert(e);
      }
      if (held.empty()) ls.add_deferred(c);
    } else if (c.is_restriction()) {
      ls.insert(c);
    }
  }
  return ls;
}

inline EdgeLabelSet edge_label_set(const std::string& x, const std::string& y,
                                   const MaterializedOntology& m) {
  EdgeLabelSet out{x, y, {}};
  for (const auto& [r, s, o] : m.edges) {
    if (s == x && o == y) out.roles.insert(r);
  }
  return out;
}

// Individual names cannot contain ':', so this never collides.
inline std::string fresh_individual_name(const std::string& concept_name) {
  return "fresh:" + concept_name;
}

/**
 * @brief Label-set of a concept, computed through a fresh member individual.
 *
 * The concept name itself is removed from the result.
 */
inline LabelSet concept_label_set(const std::string& a, const Ontology& o) {
  if (!o.concept_names.count(a)) throw UnknownEntityError(a);
  Ontology clone = o;
  std::string fresh = fresh_individual_name(a);
  clone.add(ConceptAssertion{Concept::atomic(a), fresh});
  TaxonomyClosure tax = classify(clone);
  if (tax.concept_subsumed(a, kBottomName)) throw UnsatisfiableConceptError(a);
  MaterializedOntology m = materialize(clone, tax);
  if (m.inconsistent(fresh)) throw UnsatisfiableConceptError(a);
  LabelSet ls = node_label_set(fresh, m, tax);
  ls.erase(Concept::atomic(a));
  ls.owner = a;
  return ls;
}

}  // namespace shiqv
