#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "shiqv/concept.hpp"

namespace shiqv {

struct SubClass {
  Concept sub, sup;
  friend bool operator==(const SubClass&, const SubClass&) = default;
};

// lhs is an atomic name, or BOT for disjointness.
struct EquivClass {
  Concept lhs, rhs;
  friend bool operator==(const EquivClass&, const EquivClass&) = default;
};

struct SubRole {
  Role sub, sup;
  friend bool operator==(const SubRole&, const SubRole&) = default;
};

struct Transitive {
  std::string role;
  friend bool operator==(const Transitive&, const Transitive&) = default;
};

struct ConceptAssertion {
  Concept expr;
  std::string individual;
  friend bool operator==(const ConceptAssertion&, const ConceptAssertion&) = default;
};

struct RoleAssertion {
  std::string role, subject, object;
  friend bool operator==(const RoleAssertion&, const RoleAssertion&) = default;
};

struct Inequality {
  std::string a, b;
  friend bool operator==(const Inequality&, const Inequality&) = default;
};

using Axiom = std::variant<SubClass, EquivClass, SubRole, Transitive, ConceptAssertion,
                           RoleAssertion, Inequality>;

inline bool is_tbox_axiom(const Axiom& a) {
  return std::holds_alternative<SubClass>(a) || std::holds_alternative<EquivClass>(a) ||
         std::holds_alternative<SubRole>(a) || std::holds_alternative<Transitive>(a);
}

// Canonical prefix form of an axiom, used for comparisons and diagnostics.
inline std::string axiom_key(const Axiom& a) {
  struct V {
    std::string operator()(const SubClass& x) const {
      return "(subclass " + x.sub.str() + " " + x.sup.str() + ")";
    }
    std::string operator()(const EquivClass& x) const {
      return "(equiv " + x.lhs.str() + " " + x.rhs.str() + ")";
    }
    std::string operator()(const SubRole& x) const {
      return "(subrole " + x.sub.str() + " " + x.sup.str() + ")";
    }
    std::string operator()(const Transitive& x) const { return "(transitive " + x.role + ")"; }
    std::string operator()(const ConceptAssertion& x) const {
      return "(instance " + x.individual + " " + x.expr.str() + ")";
    }
    std::string operator()(const RoleAssertion& x) const {
      return "(related " + x.role + " " + x.subject + " " + x.object + ")";
    }
    std::string operator()(const Inequality& x) const {
      return "(different " + x.a + " " + x.b + ")";
    }
  };
  return std::visit(V{}, a);
}

inline void collect_names(const Concept& c, std::set<std::string>& concepts,
                          std::set<std::string>& roles) {
  if (c.is_atomic()) concepts.insert(c.name());
  if (c.is_restriction()) roles.insert(c.role().name);
  for (const Concept& op : c.operands()) collect_names(op, concepts, roles);
}

/** @brief A SHIQ knowledge base: TBox, ABox and the names they use. */
struct Ontology {
  std::vector<Axiom> tbox;
  std::vector<Axiom> abox;
  std::set<std::string> concept_names;
  std::set<std::string> role_names;
  std::set<std::string> individual_names;

  void add(Axiom a) {
    register_names(a);
    (is_tbox_axiom(a) ? tbox : abox).push_back(std::move(a));
  }

  std::vector<Axiom> axioms() const {
    std::vector<Axiom> all = tbox;
    all.insert(all.end(), abox.begin(), abox.end());
    return all;
  }

  std::set<std::string> transitive_roles() const {
    std::set<std::string> out;
    for (const Axiom& a : tbox) {
      if (auto* t = std::get_if<Transitive>(&a)) out.insert(t->role);
    }
    return out;
  }

  void register_names(const Axiom& a) {
    if (auto* x = std::get_if<SubClass>(&a)) {
      collect_names(x->sub, concept_names, role_names);
      collect_names(x->sup, concept_names, role_names);
    } else if (auto* x = std::get_if<EquivClass>(&a)) {
      collect_names(x->lhs, concept_names, role_names);
      collect_names(x->rhs, concept_names, role_names);
    } else if (auto* x = std::get_if<SubRole>(&a)) {
      role_names.insert(x->sub.name);
      role_names.insert(x->sup.name);
    } else if (auto* x = std::get_if<Transitive>(&a)) {
      role_names.insert(x->role);
    } else if (auto* x = std::get_if<ConceptAssertion>(&a)) {
      collect_names(x->expr, concept_names, role_names);
      individual_names.insert(x->individual);
    } else if (auto* x = std::get_if<RoleAssertion>(&a)) {
      role_names.insert(x->role);
      individual_names.insert(x->subject);
      individual_names.insert(x->object);
    } else if (auto* x = std::get_if<Inequality>(&a)) {
      individual_names.insert(x->a);
      individual_names.insert(x->b);
    }
  }
};

}  // namespace shiqv
