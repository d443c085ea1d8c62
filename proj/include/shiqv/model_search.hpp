#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "shiqv/concept.hpp"
#include "shiqv/ontology.hpp"
#include "shiqv/oracle.hpp"

namespace shiqv {

struct SearchLimits {
  std::uint64_t node_budget = 20'000'000;
};

struct EntailmentVerdict {
  bool countermodel_found = false;
  std::optional<Interpretation> countermodel;
  int max_domain = 0;
  std::size_t support_axioms = 0;  // axioms the final refutation needed
  std::uint64_t search_nodes = 0;
};

namespace detail {

enum class Tri : std::int8_t { kFalse = 0, kTrue = 1, kUnknown = 2 };

inline Tri tri_not(Tri t) {
  return t == Tri::kUnknown ? t : (t == Tri::kTrue ? Tri::kFalse : Tri::kTrue);
}

/**
 * @brief Backtracking search for a finite model over ground atoms.
 *
 * Atoms are concept memberships A(e) and edges R(e,f) for a fixed domain size
 * and a fixed mapping of individuals. Constraints are evaluated in Kleene
 * logic; propagation probes each unassigned atom of an undecided constraint
 * and forces the value whose opposite falsifies it.
 */
class GroundSearch {
 public:
  GroundSearch(std::shared_ptr<const Signature> sig, int d, std::vector<int> mapping,
               std::uint64_t node_budget)
      : sig_(std::move(sig)), d_(d), mapping_(std::move(mapping)), budget_(node_budget) {
    nc_ = static_cast<int>(sig_->concepts.size());
    nr_ = static_cast<int>(sig_->roles.size());
    val_.assign(static_cast<std::size_t>(nc_ * d_ + nr_ * d_ * d_), kUnset);
    watches_.resize(val_.size());
  }

  int element_of(const std::string& individual) const {
    int i = sig_->individual_index(individual);
    return i < 0 ? -1 : mapping_[i];
  }

  void add_axiom(const Axiom& ax) {
    if (auto* x = std::get_if<SubClass>(&ax)) {
      int node = compile(expand_derived(Concept::disjunction({Concept::negation(x->sub), x->sup})));
      for (int e = 0; e < d_; ++e) add({Kind::kAt, node, -1, e});
    } else if (auto* x = std::get_if<EquivClass>(&ax)) {
      int a = compile(expand_derived(x->lhs));
      int b = compile(expand_derived(x->rhs));
      for (int e = 0; e < d_; ++e) add({Kind::kIff, a, b, e});
    } else if (auto* x = std::get_if<SubRole>(&ax)) {
      for (int e = 0; e < d_; ++e) {
        for (int f = 0; f < d_; ++f) {
          int p = edge_var(x->sub, e, f);
          int q = edge_var(x->sup, e, f);
          if (p < 0) continue;
          Constraint c{Kind::kImp, -1, -1, -1};
          c.atoms = {p, q};
          add(std::move(c));
        }
      }
    } else if (auto* x = std::get_if<Transitive>(&ax)) {
      Role r(x->role);
      if (sig_->role_index(r.name) < 0) return;
      for (int e = 0; e < d_; ++e) {
        for (int f = 0; f < d_; ++f) {
          for (int g = 0; g < d_; ++g) {
            Constraint c{Kind::kTrans, -1, -1, -1};
            c.atoms = {edge_var(r, e, f), edge_var(r, f, g), edge_var(r, e, g)};
            add(std::move(c));
          }
        }
      }
    } else if (auto* x = std::get_if<ConceptAssertion>(&ax)) {
      add({Kind::kAt, compile(expand_derived(x->expr)), -1, element_of(x->individual)});
    } else if (auto* x = std::get_if<RoleAssertion>(&ax)) {
      add_unit(edge_var(Role(x->role), element_of(x->subject), element_of(x->object)), true);
    }
  }

  // Requires the goal axiom to be false.
  void add_negated_goal(const Axiom& goal, bool focus_first_element) {
    auto some_element = [&](const Concept& c) {
      int node = compile(expand_derived(c));
      if (focus_first_element) {
        add({Kind::kAt, node, -1, 0});
      } else {
        add({Kind::kExists, node, -1, -1});
      }
    };
    if (auto* x = std::get_if<ConceptAssertion>(&goal)) {
      add({Kind::kAt, compile(expand_derived(Concept::negation(x->expr))), -1,
           element_of(x->individual)});
    } else if (auto* x = std::get_if<RoleAssertion>(&goal)) {
      add_unit(edge_var(Role(x->role), element_of(x->subject), element_of(x->object)), false);
    } else if (auto* x = std::get_if<SubClass>(&goal)) {
      some_element(Concept::conjunction({x->sub, Concept::negation(x->sup)}));
    } else if (auto* x = std::get_if<EquivClass>(&goal)) {
      some_element(Concept::disjunction(
          {Concept::conjunction({x->lhs, Concept::negation(x->rhs)}),
           Concept::conjunction({x->rhs, Concept::negation(x->lhs)})}));
    } else if (auto* x = std::get_if<SubRole>(&goal)) {
      Constraint c{Kind::kWitness, -1, -1, -1};
      for (int e = 0; e < d_; ++e) {
        for (int f = 0; f < d_; ++f) {
          c.atoms.push_back(edge_var(x->sub, e, f));
          c.atoms.push_back(edge_var(x->sup, e, f));
        }
      }
      add(std::move(c));
    } else if (std::holds_alternative<Transitive>(goal)) {
      throw std::invalid_argument("transitivity goals are not supported");
    }
  }

  std::optional<Interpretation> solve() {
    if (conflict_) return std::nullopt;
    for (std::size_t c = 0; c < cons_.size(); ++c) queue_.push_back(static_cast<int>(c));
    in_queue_.assign(cons_.size(), true);
    sat_.assign(cons_.size(), false);
    if (!dfs()) return std::nullopt;
    Interpretation I(sig_, d_);
    for (int c = 0; c < nc_; ++c) {
      for (int e = 0; e < d_; ++e) {
        if (val_[cvar(c, e)] == 1) I.concept_ext[c] |= ElementSet{1} << e;
      }
    }
    for (int r = 0; r < nr_; ++r) {
      for (int e = 0; e < d_; ++e) {
        for (int f = 0; f < d_; ++f) {
          if (val_[rvar(r, e, f)] == 1) I.role_ext[r][e] |= ElementSet{1} << f;
        }
      }
    }
    I.individual_map = mapping_;
    return I;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  static constexpr std::int8_t kUnset = -1;

  enum class Kind { kAt, kIff, kExists, kImp, kTrans, kWitness };

  struct Constraint {
    Kind kind;
    int a;
    int b;
    int e;
    std::vector<int> atoms;  // ground atoms, explicit for kImp/kTrans/kWitness
  };

  struct Node {
    ConceptKind kind;
    int index = -1;
    bool inverted = false;
    unsigned n = 0;
    std::vector<int> kids;
  };

  int cvar(int c, int e) const { return c * d_ + e; }
  int rvar(int r, int e, int f) const { return nc_ * d_ + r * d_ * d_ + e * d_ + f; }

  int edge_var(const Role& r, int e, int f) const {
    int i = sig_->role_index(r.name);
    if (i < 0 || e < 0 || f < 0) return -1;
    return r.inverted ? rvar(i, f, e) : rvar(i, e, f);
  }

  int compile(const Concept& c) {
    Node node;
    node.kind = c.kind();
    if (c.is_atomic()) node.index = sig_->concept_index(c.name());
    if (c.is_restriction()) {
      node.index = sig_->role_index(c.role().name);
      node.inverted = c.role().inverted;
      node.n = c.number();
    }
    for (const Concept& op : c.operands()) node.kids.push_back(compile(op));
    nodes_pool_.push_back(std::move(node));
    return static_cast<int>(nodes_pool_.size()) - 1;
  }

  void add_unit(int var, bool value) {
    if (var < 0) {
      if (value) conflict_ = true;
      return;
    }
    std::int8_t v = value ? 1 : 0;
    if (val_[var] != kUnset && val_[var] != v) conflict_ = true;
    val_[var] = v;
  }

  void add(Constraint c) {
    if (c.kind == Kind::kAt || c.kind == Kind::kIff || c.kind == Kind::kExists) {
      if (c.kind != Kind::kExists && c.e < 0) {
        conflict_ = true;
        return;
      }
      std::set<int> atoms;
      if (c.kind == Kind::kExists) {
        for (int e = 0; e < d_; ++e) collect(c.a, e, atoms);
      } else {
        collect(c.a, c.e, atoms);
        if (c.b >= 0) collect(c.b, c.e, atoms);
      }
      c.atoms.assign(atoms.begin(), atoms.end());
    } else {
      for (int v : c.atoms) {
        if (v < 0 && c.kind == Kind::kTrans) return;
      }
      if (c.kind == Kind::kImp && c.atoms[1] < 0) {
        add_unit(c.atoms[0], false);
        return;
      }
    }
    int id = static_cast<int>(cons_.size());
    std::set<int> uniq(c.atoms.begin(), c.atoms.end());
    for (int v : uniq) {
      if (v >= 0) watches_[v].push_back(id);
    }
    cons_.push_back(std::move(c));
  }

  void collect(int id, int e, std::set<int>& out) const {
    const Node& n = nodes_pool_[id];
    switch (n.kind) {
      case ConceptKind::kAtomic:
        if (n.index >= 0) out.insert(cvar(n.index, e));
        return;
      case ConceptKind::kTop:
      case ConceptKind::kBottom:
        return;
      case ConceptKind::kNot:
      case ConceptKind::kAnd:
      case ConceptKind::kOr:
        for (int k : n.kids) collect(k, e, out);
        return;
      default:
        if (n.index < 0) return;
        for (int f = 0; f < d_; ++f) {
          out.insert(node_edge(n, e, f));
          collect(n.kids[0], f, out);
        }
    }
  }

  int node_edge(const Node& n, int e, int f) const {
    return n.inverted ? rvar(n.index, f, e) : rvar(n.index, e, f);
  }

  Tri atom(int var) const {
    std::int8_t v = val_[var];
    return v == kUnset ? Tri::kUnknown : (v ? Tri::kTrue : Tri::kFalse);
  }

  Tri ev(int id, int e) const {
    const Node& n = nodes_pool_[id];
    switch (n.kind) {
      case ConceptKind::kAtomic: return n.index < 0 ? Tri::kFalse : atom(cvar(n.index, e));
      case ConceptKind::kTop: return Tri::kTrue;
      case ConceptKind::kBottom: return Tri::kFalse;
      case ConceptKind::kNot: return tri_not(ev(n.kids[0], e));
      case ConceptKind::kAnd: {
        Tri r = Tri::kTrue;
        for (int k : n.kids) {
          Tri t = ev(k, e);
          if (t == Tri::kFalse) return t;
          if (t == Tri::kUnknown) r = t;
        }
        return r;
      }
      case ConceptKind::kOr: {
        Tri r = Tri::kFalse;
        for (int k : n.kids) {
          Tri t = ev(k, e);
          if (t == Tri::kTrue) return t;
          if (t == Tri::kUnknown) r = t;
        }
        return r;
      }
      default: break;
    }
    if (n.index < 0) {
      bool vacuous = n.kind == ConceptKind::kAll || n.kind == ConceptKind::kAtMost;
      return vacuous ? Tri::kTrue : Tri::kFalse;
    }
    int sure = 0;
    int maybe = 0;
    bool broken = false;
    bool shaky = false;
    for (int f = 0; f < d_; ++f) {
      Tri edge = atom(node_edge(n, e, f));
      if (edge == Tri::kFalse) continue;
      Tri fill = ev(n.kids[0], f);
      if (n.kind == ConceptKind::kAll) {
        if (fill == Tri::kTrue) continue;
        if (edge == Tri::kTrue && fill == Tri::kFalse) broken = true;
        else shaky = true;
        continue;
      }
      if (fill == Tri::kFalse) continue;
      ++maybe;
      if (edge == Tri::kTrue && fill == Tri::kTrue) ++sure;
    }
    const int k = static_cast<int>(n.n);
    switch (n.kind) {
      case ConceptKind::kAll:
        return broken ? Tri::kFalse : (shaky ? Tri::kUnknown : Tri::kTrue);
      case ConceptKind::kSome:
        return sure >= 1 ? Tri::kTrue : (maybe == 0 ? Tri::kFalse : Tri::kUnknown);
      case ConceptKind::kAtLeast:
        return sure >= k ? Tri::kTrue : (maybe < k ? Tri::kFalse : Tri::kUnknown);
      case ConceptKind::kAtMost:
        return maybe <= k ? Tri::kTrue : (sure > k ? Tri::kFalse : Tri::kUnknown);
      default:
        throw std::logic_error("derived constructor reached the model search");
    }
  }

  Tri eval(const Constraint& c) const {
    switch (c.kind) {
      case Kind::kAt: return ev(c.a, c.e);
      case Kind::kIff: {
        Tri x = ev(c.a, c.e);
        if (x == Tri::kUnknown) return x;
        Tri y = ev(c.b, c.e);
        if (y == Tri::kUnknown) return y;
        return x == y ? Tri::kTrue : Tri::kFalse;
      }
      case Kind::kExists: {
        Tri r = Tri::kFalse;
        for (int e = 0; e < d_; ++e) {
          Tri t = ev(c.a, e);
          if (t == Tri::kTrue) return t;
          if (t == Tri::kUnknown) r = t;
        }
        return r;
      }
      case Kind::kImp: {
        Tri p = atom(c.atoms[0]);
        Tri q = atom(c.atoms[1]);
        if (p == Tri::kFalse || q == Tri::kTrue) return Tri::kTrue;
        if (p == Tri::kTrue && q == Tri::kFalse) return Tri::kFalse;
        return Tri::kUnknown;
      }
      case Kind::kTrans: {
        Tri ab = atom(c.atoms[0]);
        Tri bc = atom(c.atoms[1]);
        Tri ac = atom(c.atoms[2]);
        if (ab == Tri::kFalse || bc == Tri::kFalse || ac == Tri::kTrue) return Tri::kTrue;
        if (ab == Tri::kTrue && bc == Tri::kTrue && ac == Tri::kFalse) return Tri::kFalse;
        return Tri::kUnknown;
      }
      case Kind::kWitness: {
        Tri r = Tri::kFalse;
        for (std::size_t i = 0; i + 1 < c.atoms.size(); i += 2) {
          if (c.atoms[i] < 0) continue;
          Tri p = atom(c.atoms[i]);
          Tri q = c.atoms[i + 1] < 0 ? Tri::kFalse : atom(c.atoms[i + 1]);
          if (p == Tri::kTrue && q == Tri::kFalse) return Tri::kTrue;
          if (p != Tri::kFalse && q != Tri::kTrue) r = Tri::kUnknown;
        }
        return r;
      }
    }
    return Tri::kUnknown;
  }

  void assign(int var, std::int8_t v) {
    val_[var] = v;
    trail_.push_back(var);
    for (int c : watches_[var]) {
      if (!sat_[c] && !in_queue_[c]) {
        in_queue_[c] = true;
        queue_.push_back(c);
      }
    }
  }

  void clear_queue() {
    for (int c : queue_) in_queue_[c] = false;
    queue_.clear();
  }

  bool propagate() {
    while (!queue_.empty()) {
      int c = queue_.back();
      queue_.pop_back();
      in_queue_[c] = false;
      if (sat_[c]) continue;
      const Constraint& con = cons_[c];
      Tri t = eval(con);
      if (t == Tri::kFalse) {
        clear_queue();
        return false;
      }
      if (t == Tri::kTrue) {
        sat_[c] = true;
        sat_trail_.push_back(c);
        continue;
      }
      for (int var : con.atoms) {
        if (var < 0 || val_[var] != kUnset) continue;
        val_[var] = 0;
        bool zero_fails = eval(con) == Tri::kFalse;
        val_[var] = 1;
        bool one_fails = eval(con) == Tri::kFalse;
        val_[var] = kUnset;
        if (zero_fails && one_fails) {
          clear_queue();
          return false;
        }
        if (zero_fails || one_fails) {
          assign(var, zero_fails ? 1 : 0);
          if (!in_queue_[c]) {
            in_queue_[c] = true;
            queue_.push_back(c);
          }
          break;
        }
      }
    }
    return true;
  }

  void undo(std::size_t trail_mark, std::size_t sat_mark) {
    while (trail_.size() > trail_mark) {
      val_[trail_.back()] = kUnset;
      trail_.pop_back();
    }
    while (sat_trail_.size() > sat_mark) {
      sat_[sat_trail_.back()] = false;
      sat_trail_.pop_back();
    }
  }

  bool dfs() {
    if (++nodes_ > budget_) throw BudgetExceeded("model search exceeded its node budget");
    if (!propagate()) return false;
    int best = -1;
    std::size_t best_free = SIZE_MAX;
    for (std::size_t c = 0; c < cons_.size(); ++c) {
      if (sat_[c]) continue;
      std::size_t free = 0;
      for (int v : cons_[c].atoms) {
        if (v >= 0 && val_[v] == kUnset) ++free;
      }
      if (free < best_free) {
        best_free = free;
        best = static_cast<int>(c);
      }
    }
    if (best < 0) return true;
    int var = -1;
    for (int v : cons_[best].atoms) {
      if (v >= 0 && val_[v] == kUnset) {
        var = v;
        break;
      }
    }
    if (var < 0) return false;
    for (std::int8_t value : {std::int8_t{1}, std::int8_t{0}}) {
      std::size_t tm = trail_.size();
      std::size_t sm = sat_trail_.size();
      assign(var, value);
      if (dfs()) return true;
      undo(tm, sm);
      clear_queue();
    }
    return false;
  }

  std::shared_ptr<const Signature> sig_;
  int d_;
  int nc_ = 0;
  int nr_ = 0;
  std::vector<int> mapping_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool conflict_ = false;
  std::vector<std::int8_t> val_;
  std::vector<std::vector<int>> watches_;
  std::vector<Node> nodes_pool_;
  std::vector<Constraint> cons_;
  std::vector<int> trail_;
  std::vector<int> sat_trail_;
  std::vector<int> queue_;
  std::vector<bool> in_queue_;
  std::vector<bool> sat_;
};

// Calls fn for every mapping of n individuals onto {0..d-1} up to renaming
// of elements (restricted growth strings). Stops early when fn returns true.
inline bool for_each_mapping(int n, int d, const std::function<bool(const std::vector<int>&)>& fn) {
  std::vector<int> m(n, 0);
  std::function<bool(int, int)> rec = [&](int i, int used) {
    if (i == n) return fn(m);
    for (int v = 0; v <= std::min(used, d - 1); ++v) {
      m[i] = v;
      if (rec(i + 1, std::max(used, v + 1))) return true;
    }
    return false;
  };
  return rec(0, 0);
}

struct ModelQuery {
  std::vector<Axiom> axioms;
  Axiom goal;
  int max_domain;
  std::uint64_t node_budget;
};

inline std::optional<Interpretation> find_countermodel(const ModelQuery& q, std::uint64_t& nodes) {
  auto sig = std::make_shared<Signature>(Signature::of(q.axioms));
  {
    Signature g = Signature::of({q.goal});
    auto merge = [](std::vector<std::string>& into, const std::vector<std::string>& from) {
      for (const std::string& s : from) {
        if (std::find(into.begin(), into.end(), s) == into.end()) into.push_back(s);
      }
    };
    merge(sig->concepts, g.concepts);
    merge(sig->roles, g.roles);
    merge(sig->individuals, g.individuals);
  }
  std::vector<std::pair<int, int>> distinct;
  for (const Axiom& a : q.axioms) {
    if (auto* x = std::get_if<Inequality>(&a)) {
      distinct.push_back({sig->individual_index(x->a), sig->individual_index(x->b)});
    }
  }
  std::optional<std::pair<int, int>> same;
  if (auto* x = std::get_if<Inequality>(&q.goal)) {
    same = {sig->individual_index(x->a), sig->individual_index(x->b)};
  }
  const bool focus = sig->individuals.empty();
  std::optional<Interpretation> found;
  const int n = static_cast<int>(sig->individuals.size());
  for (int d = 1; d <= q.max_domain && !found; ++d) {
    for_each_mapping(n, d, [&](const std::vector<int>& mapping) {
      for (auto [a, b] : distinct) {
        if (mapping[a] == mapping[b]) return false;
      }
      if (same && mapping[same->first] != mapping[same->second]) return false;
      GroundSearch s(sig, d, mapping, q.node_budget - std::min(nodes, q.node_budget));
      for (const Axiom& a : q.axioms) s.add_axiom(a);
      s.add_negated_goal(q.goal, focus);
      try {
        found = s.solve();
      } catch (const BudgetExceeded&) {
        nodes += s.nodes();
        throw;
      }
      nodes += s.nodes();
      return found.has_value();
    });
  }
  return found;
}

}  // namespace detail

/**
 * @brief Searches for a model of o with at most max_domain elements in which
 * goal is false.
 *
 * Axioms are added lazily: a candidate countermodel of a subset is checked
 * against every axiom and the violated ones join the subset. The answer is
 * exact for the bound; absence of a countermodel is bounded evidence only.
 */
inline EntailmentVerdict bounded_entailment(const Ontology& o, const Axiom& goal, int max_domain,
                                            SearchLimits limits = {}) {
  EntailmentVerdict out;
  out.max_domain = max_domain;
  const std::vector<Axiom> all = o.axioms();
  std::vector<bool> used(all.size(), false);
  while (true) {
    detail::ModelQuery q{{}, goal, max_domain, limits.node_budget};
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (used[i]) q.axioms.push_back(all[i]);
    }
    auto model = detail::find_countermodel(q, out.search_nodes);
    if (!model) {
      out.support_axioms = q.axioms.size();
      return out;
    }
    bool grew = false;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!used[i] && !check_axiom(all[i], *model)) {
        used[i] = true;
        grew = true;
      }
    }
    if (!grew) {
      out.countermodel_found = true;
      out.countermodel = std::move(model);
      out.support_axioms = q.axioms.size();
      return out;
    }
  }
}

// Bounded check of a ≡ b with respect to the TBox of o.
inline EntailmentVerdict bounded_equivalence(const Ontology& o, const Concept& a, const Concept& b,
                                             int max_domain, SearchLimits limits = {}) {
  Ontology t;
  for (const Axiom& ax : o.tbox) t.add(ax);
  return bounded_entailment(t, EquivClass{a, b}, max_domain, limits);
}

}  // namespace shiqv
