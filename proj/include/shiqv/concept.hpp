#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>
#include <algorithm>

namespace shiqv {

// An atomic role name, optionally inverted.
struct Role {
  std::string name;
  bool inverted = false;

  Role() = default;
  Role(std::string n, bool inv = false) : name(std::move(n)), inverted(inv) {}
  Role(const char* n) : name(n) {}

  Role inverse() const { return Role(name, !inverted); }

  // Canonical form: `r` or `(inv r)`.
  std::string str() const { return inverted ? "(inv " + name + ")" : name; }

  friend bool operator==(const Role&, const Role&) = default;
  friend auto operator<=>(const Role&, const Role&) = default;
};

enum class ConceptKind : std::uint8_t {
  kAtomic,
  kTop,
  kBottom,
  kNot,
  kAnd,
  kOr,
  kSome,
  kAll,
  kAtLeast,
  kAtMost,
  kNonVacuous,  // ∃R.C ⊓ ∀R.C
  kExactly,     // ≥nR.C ⊓ ≤nR.C
};

/**
 * @brief Immutable SHIQ concept expression.
 *
 * Values share structure and carry their canonical prefix serialization,
 * which is also the ordering and equality key. Conjunctions and disjunctions
 * are flattened and their operands sorted at construction.
 */
class Concept {
 public:
  Concept();  // TOP

  static Concept atomic(std::string name);
  static Concept top();
  static Concept bottom();
  static Concept negation(Concept inner);
  static Concept conjunction(std::vector<Concept> operands);
  static Concept disjunction(std::vector<Concept> operands);
  static Concept some(Role r, Concept filler);
  static Concept all(Role r, Concept filler);
  static Concept at_least(unsigned n, Role r, Concept filler);
  static Concept at_most(unsigned m, Role r, Concept filler);
  static Concept non_vacuous(Role r, Concept filler);
  static Concept exactly(unsigned n, Role r, Concept filler);

  ConceptKind kind() const;
  const std::string& name() const;
  const Role& role() const;
  unsigned number() const;
  const Concept& filler() const;
  const Concept& inner() const;
  std::span<const Concept> operands() const;
  const std::string& str() const;

  bool is_atomic() const { return kind() == ConceptKind::kAtomic; }
  bool is(ConceptKind k) const { return kind() == k; }
  bool is_restriction() const;

  friend bool operator==(const Concept& a, const Concept& b) {
    return a.node_ == b.node_ || a.str() == b.str();
  }
  friend std::strong_ordering operator<=>(const Concept& a, const Concept& b) {
    return a.str().compare(b.str()) <=> 0;
  }

 private:
  struct Node;
  explicit Concept(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Concept make(ConceptKind kind, std::string name, Role role, unsigned n,
                      std::vector<Concept> ops);
  static Concept nary(ConceptKind kind, std::vector<Concept> operands);

  std::shared_ptr<const Node> node_;
};

struct Concept::Node {
  ConceptKind kind;
  std::string name;
  Role role;
  unsigned n = 0;
  std::vector<Concept> ops;
  std::string canonical;
};

namespace detail {

inline const char* kind_keyword(ConceptKind k) {
  switch (k) {
    case ConceptKind::kNot: return "not";
    case ConceptKind::kAnd: return "and";
    case ConceptKind::kOr: return "or";
    case ConceptKind::kSome: return "some";
    case ConceptKind::kAll: return "all";
    case ConceptKind::kAtLeast: return "atleast";
    case ConceptKind::kAtMost: return "atmost";
    case ConceptKind::kNonVacuous: return "nonvac";
    case ConceptKind::kExactly: return "exactly";
    default: return "";
  }
}

}  // namespace detail

inline Concept Concept::make(ConceptKind kind, std::string name, Role role, unsigned n,
                             std::vector<Concept> ops) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->name = std::move(name);
  node->role = std::move(role);
  node->n = n;
  node->ops = std::move(ops);
  std::string& s = node->canonical;
  switch (kind) {
    case ConceptKind::kAtomic: s = node->name; break;
    case ConceptKind::kTop: s = "TOP"; break;
    case ConceptKind::kBottom: s = "BOT"; break;
    case ConceptKind::kNot:
    case ConceptKind::kAnd:
    case ConceptKind::kOr:
      s = std::string("(") + detail::kind_keyword(kind);
      for (const Concept& c : node->ops) s += " " + c.str();
      s += ")";
      break;
    case ConceptKind::kSome:
    case ConceptKind::kAll:
    case ConceptKind::kNonVacuous:
      s = std::string("(") + detail::kind_keyword(kind) + " " + node->role.str() + " " +
          node->ops[0].str() + ")";
      break;
    case ConceptKind::kAtLeast:
    case ConceptKind::kAtMost:
    case ConceptKind::kExactly:
      s = std::string("(") + detail::kind_keyword(kind) + " " + std::to_string(n) + " " +
          node->role.str() + " " + node->ops[0].str() + ")";
      break;
  }
  return Concept(std::move(node));
}

inline Concept Concept::top() {
  static const Concept t = make(ConceptKind::kTop, "", Role(), 0, {});
  return t;
}

inline Concept Concept::bottom() {
  static const Concept b = make(ConceptKind::kBottom, "", Role(), 0, {});
  return b;
}

inline Concept::Concept() : Concept(top()) {}

inline Concept Concept::atomic(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty concept name");
  if (name == "TOP") return top();
  if (name == "BOT") return bottom();
  return make(ConceptKind::kAtomic, std::move(name), Role(), 0, {});
}

inline Concept Concept::negation(Concept inner) {
  return make(ConceptKind::kNot, "", Role(), 0, {std::move(inner)});
}

inline Concept Concept::nary(ConceptKind kind, std::vector<Concept> operands) {
  std::vector<Concept> flat;
  for (Concept& c : operands) {
    if (c.kind() == kind) {
      for (const Concept& inner : c.operands()) flat.push_back(inner);
    } else {
      flat.push_back(std::move(c));
    }
  }
  if (flat.empty()) return kind == ConceptKind::kAnd ? top() : bottom();
  if (flat.size() == 1) return flat.front();
  std::sort(flat.begin(), flat.end());
  return make(kind, "", Role(), 0, std::move(flat));
}

inline Concept Concept::conjunction(std::vector<Concept> operands) {
  return nary(ConceptKind::kAnd, std::move(operands));
}

inline Concept Concept::disjunction(std::vector<Concept> operands) {
  return nary(ConceptKind::kOr, std::move(operands));
}

inline Concept Concept::some(Role r, Concept filler) {
  return make(ConceptKind::kSome, "", std::move(r), 0, {std::move(filler)});
}

inline Concept Concept::all(Role r, Concept filler) {
  return make(ConceptKind::kAll, "", std::move(r), 0, {std::move(filler)});
}

inline Concept Concept::at_least(unsigned n, Role r, Concept filler) {
  if (n == 0) throw std::invalid_argument("at-least restriction needs n >= 1");
  return make(ConceptKind::kAtLeast, "", std::move(r), n, {std::move(filler)});
}

inline Concept Concept::at_most(unsigned m, Role r, Concept filler) {
  return make(ConceptKind::kAtMost, "", std::move(r), m, {std::move(filler)});
}

inline Concept Concept::non_vacuous(Role r, Concept filler) {
  return make(ConceptKind::kNonVacuous, "", std::move(r), 0, {std::move(filler)});
}

inline Concept Concept::exactly(unsigned n, Role r, Concept filler) {
  if (n == 0) throw std::invalid_argument("exactly restriction needs n >= 1");
  return make(ConceptKind::kExactly, "", std::move(r), n, {std::move(filler)});
}

inline ConceptKind Concept::kind() const { return node_->kind; }
inline const std::string& Concept::name() const { return node_->name; }
inline const Role& Concept::role() const { return node_->role; }
inline unsigned Concept::number() const { return node_->n; }
inline const Concept& Concept::filler() const { return node_->ops.at(0); }
inline const Concept& Concept::inner() const { return node_->ops.at(0); }
inline std::span<const Concept> Concept::operands() const { return node_->ops; }
inline const std::string& Concept::str() const { return node_->canonical; }

inline bool Concept::is_restriction() const {
  switch (kind()) {
    case ConceptKind::kSome:
    case ConceptKind::kAll:
    case ConceptKind::kAtLeast:
    case ConceptKind::kAtMost:
    case ConceptKind::kNonVacuous:
    case ConceptKind::kExactly:
      return true;
    default:
      return false;
  }
}

inline bool structural_eq(const Concept& a, const Concept& b) { return a == b; }

// Rewrites ∍R.C and ∃₌ₙR.C into their primitive definitions, recursively.
inline Concept expand_derived(const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::kAtomic:
    case ConceptKind::kTop:
    case ConceptKind::kBottom:
      return c;
    case ConceptKind::kNot:
      return Concept::negation(expand_derived(c.inner()));
    case ConceptKind::kAnd:
    case ConceptKind::kOr: {
      std::vector<Concept> ops;
      for (const Concept& o : c.operands()) ops.push_back(expand_derived(o));
      return c.kind() == ConceptKind::kAnd ? Concept::conjunction(std::move(ops))
                                           : Concept::disjunction(std::move(ops));
    }
    case ConceptKind::kSome: return Concept::some(c.role(), expand_derived(c.filler()));
    case ConceptKind::kAll: return Concept::all(c.role(), expand_derived(c.filler()));
    case ConceptKind::kAtLeast:
      return Concept::at_least(c.number(), c.role(), expand_derived(c.filler()));
    case ConceptKind::kAtMost:
      return Concept::at_most(c.number(), c.role(), expand_derived(c.filler()));
    case ConceptKind::kNonVacuous: {
      Concept f = expand_derived(c.filler());
      return Concept::conjunction({Concept::some(c.role(), f), Concept::all(c.role(), f)});
    }
    case ConceptKind::kExactly: {
      Concept f = expand_derived(c.filler());
      return Concept::conjunction(
          {Concept::at_least(c.number(), c.role(), f), Concept::at_most(c.number(), c.role(), f)});
    }
  }
  return c;
}

namespace detail {

using Clause = std::vector<Concept>;

inline std::vector<Clause> cnf_clauses(const Concept& e) {
  switch (e.kind()) {
    case ConceptKind::kTop:
      return {};
    case ConceptKind::kBottom:
      return {Clause{}};
    case ConceptKind::kAnd: {
      std::vector<Clause> out;
      for (const Concept& op : e.operands()) {
        auto part = cnf_clauses(op);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
    case ConceptKind::kOr: {
      std::vector<Clause> acc{Clause{}};
      for (const Concept& op : e.operands()) {
        auto part = cnf_clauses(op);
        std::vector<Clause> next;
        for (const Clause& a : acc) {
          for (const Clause& b : part) {
            Clause merged = a;
            merged.insert(merged.end(), b.begin(), b.end());
            next.push_back(std::move(merged));
          }
        }
        acc = std::move(next);
      }
      return acc;
    }
    default:
      return {Clause{e}};
  }
}

}  // namespace detail

/**
 * @brief Top-level conjuncts of `e` in conjunctive normal form.
 *
 * Only the propositional skeleton is normalized; fillers are left as written.
 * An empty result denotes TOP. Each element is either a non-disjunctive
 * concept or a disjunction (a D-clause).
 */
inline std::vector<Concept> to_cnf_top(const Concept& e) {
  std::vector<Concept> out;
  for (auto& clause : detail::cnf_clauses(e)) {
    out.push_back(Concept::disjunction(std::move(clause)));
  }
  return out;
}

}  // namespace shiqv
