#pragma once

// Seeded generator of small random ontologies.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "shiqv/concept.hpp"
#include "shiqv/ontology.hpp"

namespace shiqv::testing {

struct SynthOptions {
  int concepts = 6;
  int roles = 3;
  int individuals = 6;
  int max_depth = 2;
  // Also emit transitive roles, inverses, GCIs, derived constructors and
  // complex assertions. The last role is made transitive and kept out of
  // number restrictions.
  bool all_axiom_kinds = false;
};

class OntologySynth {
 public:
  OntologySynth(std::uint64_t seed, SynthOptions opts) : rng_(seed), opts_(opts) {}

  Ontology generate() {
    Ontology o;
    const int nc = opts_.concepts;
    std::vector<bool> defined(nc, false);
    // Definitions only mention lower-numbered concepts, so they are acyclic.
    for (int k = 1; k < nc; ++k) {
      if (coin(0.5)) {
        o.add(EquivClass{atom(k), definition(k)});
        defined[k] = true;
      } else if (coin(0.5)) {
        o.add(SubClass{atom(k), coin(0.6) ? atom(pick(k)) : expression(k, opts_.max_depth)});
      }
    }
    if (nc >= 3 && coin(0.5)) {
      int a = pick(nc);
      int b = pick(nc);
      if (a != b) o.add(EquivClass{Concept::bottom(), Concept::conjunction({atom(a), atom(b)})});
    }
    // With all_axiom_kinds the last role is transitive and must stay out of r0's subroles.
    if (opts_.roles >= (opts_.all_axiom_kinds ? 3 : 2) && coin(0.5)) {
      o.add(SubRole{role_name(1), role_name(0)});
    }
    if (opts_.all_axiom_kinds) {
      o.add(Transitive{role_name(opts_.roles - 1)});
      if (opts_.roles >= 2 && coin(0.5)) {
        o.add(SubRole{Role(role_name(0)), Role(role_name(opts_.roles - 1), true)});
      }
      if (coin(0.5)) o.add(SubClass{expression(nc, 1), atom(pick(nc))});
    }

    for (int i = 0; i < opts_.individuals; ++i) {
      int n = 1 + pick(2);
      for (int j = 0; j < n; ++j) o.add(ConceptAssertion{atom(pick(nc)), ind(i)});
      if (opts_.all_axiom_kinds && coin(0.3)) o.add(ConceptAssertion{expression(nc, 1), ind(i)});
    }
    int edges = pick(opts_.individuals + 1);
    for (int e = 0; e < edges; ++e) {
      o.add(RoleAssertion{role_name(pick(opts_.roles)), ind(pick(opts_.individuals)),
                          ind(pick(opts_.individuals))});
    }
    if (opts_.individuals >= 2 && coin(0.5)) o.add(Inequality{ind(0), ind(1)});
    return o;
  }

 private:
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  static std::string cname(int i) { return "C" + std::to_string(i); }
  static std::string role_name(int i) { return "r" + std::to_string(i); }
  static std::string ind(int i) { return "i" + std::to_string(i); }
  static Concept atom(int i) { return Concept::atomic(cname(i)); }

  Role any_role(bool counting) {
    int limit = opts_.roles;
    if (opts_.all_axiom_kinds && counting) limit = opts_.roles - 1;
    if (limit <= 0) return Role(role_name(0));
    // Skewed towards r0 so that restrictions share roles and rules can fire.
    Role r(role_name(coin(0.6) ? 0 : pick(limit)));
    if (opts_.all_axiom_kinds && coin(0.2)) r = r.inverse();
    return r;
  }

  // Conjunctive definition over concepts below k, with occasional D-clauses.
  Concept definition(int k) {
    std::vector<Concept> ops{atom(pick(k))};
    int extra = 1 + pick(3);
    for (int i = 0; i < extra; ++i) {
      if (coin(0.15) && k >= 2) {
        ops.push_back(Concept::disjunction({atom(pick(k)), restriction(k, 0)}));
      } else {
        ops.push_back(restriction(k, opts_.max_depth - 1));
      }
    }
    return Concept::conjunction(std::move(ops));
  }

  // Fillers favour the first few concepts, which tend to be related by subsumption.
  Concept filler(int k, int depth) {
    if (depth <= 0 || coin(0.6)) return atom(pick(std::min(k, 3)));
    switch (pick(4)) {
      case 0: return Concept::negation(atom(pick(k)));
      case 1: return Concept::conjunction({atom(pick(k)), filler(k, depth - 1)});
      case 2: return Concept::disjunction({atom(pick(k)), atom(pick(k))});
      default: return restriction(k, depth - 1);
    }
  }

  Concept restriction(int k, int depth) {
    int kinds = opts_.all_axiom_kinds ? 6 : 4;
    int kind = pick(kinds);
    Concept f = filler(k, depth);
    unsigned n = 1 + static_cast<unsigned>(pick(3));
    switch (kind) {
      case 0: return Concept::some(any_role(false), f);
      case 1: return Concept::all(any_role(false), f);
      case 2: return Concept::at_least(n, any_role(true), f);
      case 3: return Concept::at_most(n - 1 + static_cast<unsigned>(pick(2)), any_role(true), f);
      case 4: return Concept::non_vacuous(any_role(false), f);
      default: return Concept::exactly(n, any_role(true), f);
    }
  }

  Concept expression(int k, int depth) {
    if (depth <= 0) return atom(pick(k));
    switch (pick(5)) {
      case 0: return Concept::negation(expression(k, depth - 1));
      case 1: return Concept::conjunction({expression(k, depth - 1), expression(k, depth - 1)});
      case 2: return Concept::disjunction({expression(k, depth - 1), expression(k, depth - 1)});
      default: return restriction(k, depth - 1);
    }
  }

  std::mt19937_64 rng_;
  SynthOptions opts_;
};

inline Ontology synth_ontology(std::uint64_t seed, SynthOptions opts = {}) {
  return OntologySynth(seed, opts).generate();
}

}  // namespace shiqv::testing

namespace shiqv::testing {

// Random concept over the given names, covering every constructor.
inline Concept random_concept(std::mt19937_64& rng, const std::vector<std::string>& names,
                              const std::vector<std::string>& roles, int depth) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto atom = [&] { return Concept::atomic(names[pick(names.size())]); };
  if (depth <= 0) {
    switch (pick(8)) {
      case 0: return Concept::top();
      case 1: return Concept::bottom();
      default: return atom();
    }
  }
  Role r(roles[pick(roles.size())], pick(5) == 0);
  unsigned n = 1 + static_cast<unsigned>(pick(2));
  auto sub = [&] { return random_concept(rng, names, roles, depth - 1); };
  switch (pick(12)) {
    case 0: return atom();
    case 1: return Concept::negation(sub());
    case 2: return Concept::conjunction({sub(), sub()});
    case 3: return Concept::disjunction({sub(), sub()});
    case 4: return Concept::some(r, sub());
    case 5: return Concept::all(r, sub());
    case 6: return Concept::at_least(n, r, sub());
    case 7: return Concept::at_most(n - 1, r, sub());
    case 8: return Concept::non_vacuous(r, sub());
    case 9: return Concept::exactly(n, r, sub());
    case 10: return Concept::conjunction({sub(), Concept::disjunction({sub(), sub()})});
    default: return atom();
  }
}

}  // namespace shiqv::testing
