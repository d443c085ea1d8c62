#include <random>

#include <gtest/gtest.h>

#include "shiqv/shiqv.hpp"
#include "support/fixtures.hpp"
#include "support/synth.hpp"

namespace shiqv {
namespace {

using testing::canonical;
using testing::label_strings;

const Concept kProf = Concept::atomic("Professor");
const Concept kStaff = Concept::atomic("TeachingStaff");
const Role kAdv("hasAdvisor");

std::set<std::string> applied(RuleId id, const Concept& u, const Concept& v,
                              const TaxonomyClosure& tax, RuleOptions opts = {}) {
  auto out = apply_rule(id, u, v, tax, opts);
  if (!out) return {"<no match>"};
  std::set<std::string> s;
  for (const Concept& c : *out) s.insert(c.str());
  return s;
}

class AcadRules : public ::testing::Test {
 protected:
  const Ontology& o = testing::acad();
  TaxonomyClosure tax = classify(o);
  MaterializedOntology m = materialize(o, tax);
};

TEST_F(AcadRules, RuleTableShape) {
  ASSERT_EQ(rule_table().size(), 15u);
  for (std::size_t i = 0; i < rule_table().size(); ++i) {
    EXPECT_EQ(static_cast<std::size_t>(rule_table()[i].id), i);
    EXPECT_EQ(rule_from_name(rule_table()[i].name), rule_table()[i].id);
  }
  EXPECT_FALSE(rule_from_name("8a"));
}

TEST_F(AcadRules, PairwiseExamples) {
  EXPECT_EQ(applied(RuleId::k2a, kProf, kStaff, tax), canonical({"Professor"}));
  EXPECT_EQ(applied(RuleId::k2a, kStaff, kProf, tax), (std::set<std::string>{"<no match>"}));
  EXPECT_EQ(applied(RuleId::k3a, Concept::some(kAdv, kProf), Concept::some(kAdv, kStaff), tax),
            canonical({"(some hasAdvisor Professor)"}));
  EXPECT_EQ(applied(RuleId::k4b, Concept::all(kAdv, kStaff), Concept::all(kAdv, kProf), tax),
            canonical({"(all hasAdvisor Professor)"}));
  EXPECT_EQ(applied(RuleId::k5a, Concept::some(kAdv, kStaff), Concept::all(kAdv, kStaff), tax),
            canonical({"(nonvac hasAdvisor TeachingStaff)"}));
  EXPECT_EQ(applied(RuleId::k5c, Concept::all(kAdv, kStaff), Concept::some(kAdv, kProf), tax),
            canonical({"(nonvac hasAdvisor TeachingStaff)", "(some hasAdvisor Professor)"}));
  EXPECT_EQ(applied(RuleId::k6c, Concept::some(kAdv, kProf), Concept::at_most(1, kAdv, kStaff), tax),
            canonical({"(exactly 1 hasAdvisor Professor)", "(exactly 1 hasAdvisor TeachingStaff)"}));
  EXPECT_EQ(applied(RuleId::k6a, Concept::at_least(3, kAdv, kProf), Concept::at_least(2, kAdv, kStaff), tax),
            canonical({"(atleast 3 hasAdvisor Professor)"}));
  EXPECT_EQ(applied(RuleId::k6a, Concept::at_least(1, kAdv, kProf), Concept::at_least(2, kAdv, kStaff), tax),
            (std::set<std::string>{"<no match>"}));
  EXPECT_EQ(applied(RuleId::k7c, Concept::at_least(2, kAdv, kStaff), Concept::exactly(1, kAdv, kProf), tax),
            canonical({"(exactly 1 hasAdvisor Professor)",
                       "(atleast 1 hasAdvisor (and TeachingStaff (not Professor)))"}));
  EXPECT_EQ(applied(RuleId::k7c, Concept::at_least(1, kAdv, kStaff), Concept::exactly(1, kAdv, kProf), tax),
            canonical({"(exactly 1 hasAdvisor Professor)"}));
}

TEST_F(AcadRules, InverseRolesNeverMatch) {
  Role inv = kAdv.inverse();
  EXPECT_FALSE(apply_rule(RuleId::k5a, Concept::some(inv, kStaff), Concept::all(inv, kStaff), tax));
  EXPECT_FALSE(apply_rule(RuleId::k3a, Concept::some(inv, kProf), Concept::some(inv, kStaff), tax));
}

TEST_F(AcadRules, DisjunctiveSevenCHook) {
  RuleOptions bad;
  bad.disjunctive_7c = true;
  EXPECT_EQ(applied(RuleId::k7c, Concept::at_least(2, kAdv, kStaff), Concept::exactly(1, kAdv, kProf), tax, bad),
            canonical({"(exactly 1 hasAdvisor Professor)",
                       "(atleast 1 hasAdvisor (or TeachingStaff (not Professor)))"}));
}

TEST_F(AcadRules, SamTrace) {
  RefinementResult r = semantic_refine_traced(node_label_set("sam", m, tax), o, tax);
  std::vector<std::string> rules;
  for (const TraceStep& s : r.trace) {
    if (s.rule != "purge") rules.push_back(s.rule);
  }
  EXPECT_EQ(rules, (std::vector<std::string>{"1a", "1a", "5c", "6c", "7c"}));
  EXPECT_EQ(r.firings, 3u);
  EXPECT_EQ(label_strings(r.labels), canonical(testing::published_refined_label_sets().at("sam")));
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i - 1].ruleset, r.trace[i].ruleset);
}

TEST_F(AcadRules, ConceptRefinementReplacesDefinedNames) {
  LabelSet ls = concept_refinement(node_label_set("tom", m, tax), o);
  EXPECT_FALSE(ls.contains(Concept::atomic("IITStudent")));
  EXPECT_FALSE(ls.contains(Concept::atomic("IIT_MS_Student")));
  EXPECT_TRUE(ls.contains(Concept::atomic("Student")));
}

TEST_F(AcadRules, SuperclassRefinementDropsSubsumers) {
  LabelSet ls("bob", {kProf, kStaff});
  EXPECT_EQ(label_strings(superclass_refinement(ls, tax)), canonical({"Professor"}));
}

TEST_F(AcadRules, FixedPointAfterRefinement) {
  for (const std::string& x : o.individual_names) {
    LabelSet r = semantic_refine(node_label_set(x, m, tax), o, tax);
    EXPECT_TRUE(is_fixed_point(r, tax)) << x;
  }
}

// Random label-sets over synthetic TBoxes: meaning, idempotence, bound.
class RefinerProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RefinerProperties, PreservesMeaningAndIsIdempotent) {
  testing::SynthOptions opts;
  opts.concepts = 4;
  opts.roles = 2;
  opts.individuals = 0;
  Ontology o = testing::synth_ontology(GetParam(), opts);
  Ontology tbox = testing::tbox_of(o);
  TaxonomyClosure tax = classify(o);
  std::mt19937_64 rng(GetParam());
  std::vector<std::string> names{"C0", "C1", "C2", "C3"};
  for (int trial = 0; trial < 6; ++trial) {
    LabelSet ls("x");
    int n = 2 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
      Concept c = testing::random_concept(rng, names, {"r0", "r1"}, 1);
      if (c.is_atomic() || c.is_restriction()) ls.insert(c);
    }
    RefinementResult r = semantic_refine_traced(ls, o, tax);
    EXPECT_LE(r.firings, 15 * std::max<std::size_t>(ls.size(), 1) * std::max<std::size_t>(ls.size(), 1));
    EXPECT_EQ(semantic_refine(r.labels, o, tax), r.labels);
    EXPECT_TRUE(is_fixed_point(r.labels, tax));
    auto v = bounded_equivalence(tbox, ls.conjunction(), r.labels.conjunction(), 3);
    EXPECT_FALSE(v.countermodel_found) << "seed " << GetParam() << ": " << ls.conjunction().str()
                                       << " vs " << r.labels.conjunction().str();
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RefinerProperties, ::testing::Range<std::uint64_t>(0, 12));

TEST(RuleVerification, SevenCHoldsAndDisjunctiveVariantFails) {
  VerifyOptions opts;
  opts.random_samples = 200;
  EXPECT_TRUE(verify_rule(RuleId::k7c, opts).holds);
  opts.rule_options.disjunctive_7c = true;
  RuleVerdict bad = verify_rule(RuleId::k7c, opts);
  ASSERT_FALSE(bad.holds);
  ASSERT_TRUE(bad.counterexample);
  const RuleCounterexample& cx = *bad.counterexample;
  const Interpretation& I = cx.interpretation;
  bool lhs = eval_concept(Concept::conjunction(cx.instance.antecedents), I) >> cx.element & 1u;
  bool rhs = eval_concept(Concept::conjunction(cx.instance.consequents), I) >> cx.element & 1u;
  EXPECT_NE(lhs, rhs);
}

}  // namespace
}  // namespace shiqv
