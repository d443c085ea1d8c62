#include <random>

#include <gtest/gtest.h>

#include "shiqv/shiqv.hpp"
#include "support/fixtures.hpp"
#include "support/synth.hpp"

namespace shiqv {
namespace {

std::vector<std::string> keys(const Ontology& o) {
  std::vector<std::string> out;
  for (const Axiom& a : o.axioms()) out.push_back(axiom_key(a));
  return out;
}

TEST(Parser, AcademicOntologyShape) {
  const Ontology& o = testing::acad();
  EXPECT_EQ(o.tbox.size(), 7u);
  EXPECT_EQ(o.abox.size(), 7u);
  EXPECT_TRUE(o.concept_names.count("IITPhdStudent"));
  EXPECT_EQ(o.role_names, (std::set<std::string>{"enrolledIn", "hasAdvisor"}));
  EXPECT_EQ(o.individual_names, (std::set<std::string>{"alice", "bob", "roy", "sam", "tom"}));
}

TEST(Parser, DefinitionBecomesEquivalence) {
  Ontology o = parse_ontology("A EQUIV B AND SOME r.C AND ATMOST 1 r.D\n");
  ASSERT_EQ(o.tbox.size(), 1u);
  const auto& eq = std::get<EquivClass>(o.tbox[0]);
  EXPECT_EQ(eq.lhs.str(), "A");
  EXPECT_EQ(eq.rhs.str(), "(and (atmost 1 r D) (some r C) B)");
}

TEST(Parser, Precedence) {
  EXPECT_EQ(parse_expression("A AND B OR C").str(), "(or (and A B) C)");
  EXPECT_EQ(parse_expression("A AND (B OR C)").str(), "(and (or B C) A)");
  EXPECT_EQ(parse_expression("NOT A AND B").str(), "(and (not A) B)");
  EXPECT_EQ(parse_expression("SOME r.A AND B").str(), "(and (some r A) B)");
  EXPECT_EQ(parse_expression("SOME r.(A AND B)").str(), "(some r (and A B))");
  EXPECT_EQ(parse_expression("ALL INV(r).TOP").str(), "(all (inv r) TOP)");
  EXPECT_EQ(parse_expression("EXACTLY 2 r.NONVAC s.A").str(), "(exactly 2 r (nonvac s A))");
}

TEST(Parser, StatementForms) {
  Ontology o = parse_ontology(
      "# comment\n"
      "\n"
      "A SUBCLASSOF B\n"
      "DISJOINT A C\n"
      "SUBROLE r s\n"
      "TRANSITIVE t\n"
      "INVERSE r q\n"
      "A(x)\n"
      "r(x, y)\n"
      "x != y\n"
      "(SOME r.A)(y)\n");
  EXPECT_EQ(keys(o),
            (std::vector<std::string>{"(subclass A B)", "(equiv BOT (and A C))", "(subrole r s)",
                                      "(transitive t)", "(subrole r (inv q))", "(subrole (inv q) r)",
                                      "(instance x A)", "(related r x y)", "(different x y)",
                                      "(instance y (some r A))"}));
}

TEST(Parser, ErrorsCarryLineAndColumn) {
  try {
    parse_ontology("A SUBCLASSOF B\nA SUBCLASSOF SOME r C\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 21);
    EXPECT_EQ(e.message(), "expected '.', found 'C'");
  }
  try {
    parse_ontology("A SUBCLASSOF ATLEAST 0 r.B\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 22);
  }
  EXPECT_THROW(parse_ontology("SOME r.A EQUIV B\n"), ParseError);
  EXPECT_THROW(parse_ontology("A SUBCLASSOF\n"), ParseError);
  EXPECT_THROW(parse_ontology("A SUBCLASSOF B C\n"), ParseError);
  EXPECT_THROW(parse_ontology("A SUBCLASSOF B @\n"), ParseError);
  EXPECT_THROW(parse_ontology("r(x, y\n"), ParseError);
}

class NonSimpleFixture : public ::testing::TestWithParam<std::string> {};

TEST_P(NonSimpleFixture, Rejected) {
  std::string text = testing::read_file(std::string(SHIQV_FIXTURE_DIR) + "/" + GetParam());
  try {
    parse_ontology(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.message(), kNonSimpleRoleMessage);
    EXPECT_GT(e.line(), 0);
  }
}

INSTANTIATE_TEST_SUITE_P(Fixtures, NonSimpleFixture,
                         ::testing::Values("nonsimple_direct.onto", "nonsimple_superrole.onto",
                                           "nonsimple_inverse.onto",
                                           "nonsimple_declared_inverse.onto"));

TEST(Parser, SimpleRolesAccepted) {
  EXPECT_NO_THROW(parse_ontology("TRANSITIVE t\nSUBROLE r t\nA SUBCLASSOF ATMOST 1 r.B\n"));
  EXPECT_NO_THROW(parse_ontology("TRANSITIVE t\nA SUBCLASSOF ALL t.B AND SOME t.C\n"));
}

TEST(Parser, ValidateOntologyCatchesProgrammaticAxioms) {
  Ontology o;
  o.add(Transitive{"t"});
  o.add(SubClass{Concept::atomic("A"), Concept::at_least(2, "t", Concept::top())});
  try {
    validate_ontology(o);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.message(), kNonSimpleRoleMessage);
  }
}

TEST(PrefixParser, ExamplesAndErrors) {
  EXPECT_EQ(parse_concept("(and B A)").str(), "(and A B)");
  EXPECT_EQ(parse_concept("(atleast 1 hasAdvisor (and TeachingStaff (not Professor)))").str(),
            "(atleast 1 hasAdvisor (and (not Professor) TeachingStaff))");
  EXPECT_THROW(parse_concept("(some r)"), ParseError);
  EXPECT_THROW(parse_concept("(frob A)"), ParseError);
  EXPECT_THROW(parse_concept("(and A B"), ParseError);
}

TEST(PrefixParser, RoundTripsRandomConcepts) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    Concept c = testing::random_concept(rng, {"A", "B", "C"}, {"r", "s"}, 4);
    EXPECT_EQ(parse_concept(serialize_expr(c)), c) << c.str();
    EXPECT_EQ(parse_expression(render_expression(c)), c) << render_expression(c);
  }
}

TEST(Parser, RenderedOntologyRoundTrips) {
  testing::SynthOptions opts;
  opts.all_axiom_kinds = true;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Ontology o = testing::synth_ontology(seed, opts);
    Ontology back = parse_ontology(render_ontology(o));
    EXPECT_EQ(keys(back), keys(o)) << "seed " << seed;
  }
  const Ontology& a = testing::acad();
  EXPECT_EQ(keys(parse_ontology(render_ontology(a))), keys(a));
}

}  // namespace
}  // namespace shiqv
