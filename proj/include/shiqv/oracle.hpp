#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shiqv/concept.hpp"
#include "shiqv/ontology.hpp"

namespace shiqv {

// Bitset over domain elements 0..31.
using ElementSet = std::uint32_t;

inline constexpr int kMaxDomain = 16;

inline ElementSet full_set(int d) { return d >= 32 ? ~ElementSet{0} : (ElementSet{1} << d) - 1; }

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Signature {
  std::vector<std::string> concepts;
  std::vector<std::string> roles;
  std::vector<std::string> individuals;

  static int index_of(const std::vector<std::string>& v, std::string_view name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
  int concept_index(std::string_view n) const { return index_of(concepts, n); }
  int role_index(std::string_view n) const { return index_of(roles, n); }
  int individual_index(std::string_view n) const { return index_of(individuals, n); }

  static Signature of(const std::vector<Axiom>& axioms, const std::vector<Concept>& extra = {}) {
    Ontology o;
    for (const Axiom& a : axioms) o.register_names(a);
    for (const Concept& c : extra) collect_names(c, o.concept_names, o.role_names);
    return {{o.concept_names.begin(), o.concept_names.end()},
            {o.role_names.begin(), o.role_names.end()},
            {o.individual_names.begin(), o.individual_names.end()}};
  }
};

/**
 * @brief A finite interpretation over the domain {0, ..., size-1}.
 *
 * Extensions are indexed by the signature; names outside it are empty.
 * Individuals mapped to -1 are uninterpreted.
 */
class Interpretation {
  std::shared_ptr<const Signature> sig_;
  int size_;

 public:
  Interpretation(std::shared_ptr<const Signature> sig, int size)
      : sig_(std::move(sig)),
        size_(size),
        concept_ext(sig_->concepts.size(), 0),
        role_ext(sig_->roles.size(), std::vector<ElementSet>(size, 0)),
        individual_map(sig_->individuals.size(), -1) {
    if (size < 1 || size > kMaxDomain) throw std::invalid_argument("unsupported domain size");
  }

  int size() const { return size_; }
  ElementSet domain() const { return full_set(size_); }
  const Signature& signature() const { return *sig_; }
  const std::shared_ptr<const Signature>& signature_ptr() const { return sig_; }

  ElementSet concept_set(std::string_view name) const {
    int i = sig_->concept_index(name);
    return i < 0 ? 0 : concept_ext[i];
  }

  // R-successors of x; for an inverted role, R-predecessors.
  ElementSet successors(const Role& r, int x) const {
    int i = sig_->role_index(r.name);
    if (i < 0) return 0;
    return r.inverted ? predecessors(i, x) : role_ext[i][x];
  }

  ElementSet predecessors(int role, int x) const {
    ElementSet out = 0;
    for (int y = 0; y < size_; ++y) {
      if (role_ext[role][y] >> x & 1u) out |= ElementSet{1} << y;
    }
    return out;
  }

  bool has_edge(std::string_view role, int x, int y) const {
    int i = sig_->role_index(role);
    return i >= 0 && (role_ext[i][x] >> y & 1u);
  }

  std::optional<int> individual(std::string_view name) const {
    int i = sig_->individual_index(name);
    if (i < 0 || individual_map[i] < 0) return std::nullopt;
    return individual_map[i];
  }

  std::vector<ElementSet> concept_ext;
  std::vector<std::vector<ElementSet>> role_ext;  // [role][x] = successor set
  std::vector<int> individual_map;
};

/**
 * @brief A concept compiled against a signature for repeated evaluation.
 */
class CompiledConcept {
 public:
  CompiledConcept(const Concept& c, const Signature& sig) { root_ = compile(c, sig); }

  ElementSet eval(const Interpretation& I) const { return eval_node(root_, I); }

 private:
  struct Node {
    ConceptKind kind;
    int index = -1;  // concept or role index
    bool inverted = false;
    unsigned n = 0;
    std::vector<int> kids;
  };

  int compile(const Concept& c, const Signature& sig) {
    Node node;
    node.kind = c.kind();
    if (c.is_atomic()) node.index = sig.concept_index(c.name());
    if (c.is_restriction()) {
      node.index = sig.role_index(c.role().name);
      node.inverted = c.role().inverted;
      node.n = c.number();
    }
    for (const Concept& op : c.operands()) node.kids.push_back(compile(op, sig));
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  ElementSet succ(const Node& node, const Interpretation& I, int x) const {
    if (node.index < 0) return 0;
    return node.inverted ? I.predecessors(node.index, x) : I.role_ext[node.index][x];
  }

  ElementSet eval_node(int id, const Interpretation& I) const {
    const Node& node = nodes_[id];
    const ElementSet all = I.domain();
    switch (node.kind) {
      case ConceptKind::kAtomic: return node.index < 0 ? 0 : I.concept_ext[node.index];
      case ConceptKind::kTop: return all;
      case ConceptKind::kBottom: return 0;
      case ConceptKind::kNot: return all & ~eval_node(node.kids[0], I);
      case ConceptKind::kAnd: {
        ElementSet s = all;
        for (int k : node.kids) s &= eval_node(k, I);
        return s;
      }
      case ConceptKind::kOr: {
        ElementSet s = 0;
        for (int k : node.kids) s |= eval_node(k, I);
        return s;
      }
      default: break;
    }
    const ElementSet f = eval_node(node.kids[0], I);
    ElementSet out = 0;
    for (int x = 0; x < I.size(); ++x) {
      const ElementSet s = succ(node, I, x);
      const int hits = std::popcount(s & f);
      bool in = false;
      switch (node.kind) {
        case ConceptKind::kSome: in = hits >= 1; break;
        case ConceptKind::kAll: in = (s & ~f) == 0; break;
        case ConceptKind::kAtLeast: in = hits >= static_cast<int>(node.n); break;
        case ConceptKind::kAtMost: in = hits <= static_cast<int>(node.n); break;
        case ConceptKind::kNonVacuous: in = hits >= 1 && (s & ~f) == 0; break;
        case ConceptKind::kExactly: in = hits == static_cast<int>(node.n); break;
        default: break;
      }
      if (in) out |= ElementSet{1} << x;
    }
    return out;
  }

  std::vector<Node> nodes_;
  int root_ = 0;
};

inline ElementSet eval_concept(const Concept& c, const Interpretation& I) {
  return CompiledConcept(c, I.signature()).eval(I);
}

inline bool check_axiom(const Axiom& a, const Interpretation& I) {
  if (auto* x = std::get_if<SubClass>(&a)) {
    return (eval_concept(x->sub, I) & ~eval_concept(x->sup, I)) == 0;
  }
  if (auto* x = std::get_if<EquivClass>(&a)) {
    return eval_concept(x->lhs, I) == eval_concept(x->rhs, I);
  }
  if (auto* x = std::get_if<SubRole>(&a)) {
    for (int e = 0; e < I.size(); ++e) {
      if (I.successors(x->sub, e) & ~I.successors(x->sup, e)) return false;
    }
    return true;
  }
  if (auto* x = std::get_if<Transitive>(&a)) {
    Role r(x->role);
    for (int e = 0; e < I.size(); ++e) {
      ElementSet reach = 0;
      ElementSet s = I.successors(r, e);
      for (int f = 0; f < I.size(); ++f) {
        if (s >> f & 1u) reach |= I.successors(r, f);
      }
      if (reach & ~s) return false;
    }
    return true;
  }
  if (auto* x = std::get_if<ConceptAssertion>(&a)) {
    auto e = I.individual(x->individual);
    return e && (eval_concept(x->expr, I) >> *e & 1u);
  }
  if (auto* x = std::get_if<RoleAssertion>(&a)) {
    auto s = I.individual(x->subject);
    auto o = I.individual(x->object);
    return s && o && I.has_edge(x->role, *s, *o);
  }
  const auto& q = std::get<Inequality>(a);
  auto e1 = I.individual(q.a);
  auto e2 = I.individual(q.b);
  return e1 && e2 && *e1 != *e2;
}

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 26;

// 2^(|C|·d) · 2^(|R|·d²) · d^|ind|, saturating at UINT64_MAX.
inline std::uint64_t interpretation_count(const Signature& sig, int d) {
  long double bits = static_cast<long double>(sig.concepts.size()) * d +
                     static_cast<long double>(sig.roles.size()) * d * d;
  if (bits >= 64) return UINT64_MAX;
  std::uint64_t total = std::uint64_t{1} << static_cast<int>(bits);
  for (std::size_t i = 0; i < sig.individuals.size(); ++i) {
    if (total > UINT64_MAX / static_cast<std::uint64_t>(d)) return UINT64_MAX;
    total *= static_cast<std::uint64_t>(d);
  }
  return total;
}

/**
 * @brief Stream of interpretations over a signature and domain size.
 *
 * Exhaustive mode visits every interpretation exactly once in odometer order
 * (concept extensions fastest). Random mode draws a fixed number of seeded
 * samples.
 */
class InterpretationStream {
 public:
  static InterpretationStream exhaustive(std::shared_ptr<const Signature> sig, int d,
                                         std::uint64_t budget = kDefaultEnumerationBudget) {
    std::uint64_t total = interpretation_count(*sig, d);
    if (total > budget) {
      throw BudgetExceeded("exhaustive enumeration of " + std::to_string(total) +
                           " interpretations exceeds the budget");
    }
    InterpretationStream s(std::move(sig), d);
    s.total_ = total;
    return s;
  }

  static InterpretationStream random(std::shared_ptr<const Signature> sig, int d,
                                     std::uint64_t samples, std::uint64_t seed) {
    InterpretationStream s(std::move(sig), d);
    s.random_ = true;
    s.total_ = samples;
    s.rng_.seed(seed);
    return s;
  }

  // Advances to the next interpretation; false when the stream is exhausted.
  bool next() {
    if (produced_ >= total_) return false;
    if (random_) {
      sample();
    } else if (produced_ > 0) {
      increment();
    }
    ++produced_;
    return true;
  }

  const Interpretation& current() const { return cur_; }
  Interpretation& current() { return cur_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t produced() const { return produced_; }

 private:
  InterpretationStream(std::shared_ptr<const Signature> sig, int d) : cur_(std::move(sig), d) {
    for (int& v : cur_.individual_map) v = 0;
  }

  void increment() {
    const int d = cur_.size();
    const ElementSet limit = full_set(d);
    for (ElementSet& c : cur_.concept_ext) {
      if (c < limit) {
        ++c;
        return;
      }
      c = 0;
    }
    for (auto& rows : cur_.role_ext) {
      for (ElementSet& row : rows) {
        if (row < limit) {
          ++row;
          return;
        }
        row = 0;
      }
    }
    for (int& v : cur_.individual_map) {
      if (v + 1 < d) {
        ++v;
        return;
      }
      v = 0;
    }
  }

  void sample() {
    const int d = cur_.size();
    std::uniform_int_distribution<ElementSet> bits(0, full_set(d));
    std::uniform_int_distribution<int> elem(0, d - 1);
    for (ElementSet& c : cur_.concept_ext) c = bits(rng_);
    for (auto& rows : cur_.role_ext) {
      for (ElementSet& row : rows) row = bits(rng_);
    }
    for (int& v : cur_.individual_map) v = elem(rng_);
  }

  Interpretation cur_;
  bool random_ = false;
  std::uint64_t total_ = 0;
  std::uint64_t produced_ = 0;
  std::mt19937_64 rng_;
};

}  // namespace shiqv
