#include <random>

#include <gtest/gtest.h>

#include "shiqv/shiqv.hpp"
#include "support/fixtures.hpp"
#include "support/synth.hpp"

namespace shiqv {
namespace {

const Concept kProf = Concept::atomic("Professor");
const Concept kStaff = Concept::atomic("TeachingStaff");
const Role kAdv("hasAdvisor");

Lexicon acad_lexicon() { return load_lexicon(testing::data_path("acad.lex")); }

TEST(TokenizeRole, Heuristics) {
  EXPECT_EQ(tokenize_role("hasAdvisor"), (RoleLexEntry{"hasAdvisor", "has", "advisor"}));
  EXPECT_EQ(tokenize_role("isPetOf"), (RoleLexEntry{"isPetOf", "related to", "pet"}));
  EXPECT_EQ(tokenize_role("enrolledIn"), (RoleLexEntry{"enrolledIn", "enrolled in", ""}));
  EXPECT_EQ(tokenize_role("friendOf"), (RoleLexEntry{"friendOf", "related to", "friend of"}));
  EXPECT_EQ(tokenize_role("teaches_course"), (RoleLexEntry{"teaches_course", "teaches", "course"}));
  EXPECT_EQ(tokenize_role("supervisesStudent", std::nullopt, {"supervises"}),
            (RoleLexEntry{"supervisesStudent", "supervises", "student"}));
  RoleLexEntry over{"hasAdvisor", "is guided by", ""};
  EXPECT_EQ(tokenize_role("hasAdvisor", over), over);
}

TEST(DisplayName, SplitsCamelCaseAndKeepsAcronyms) {
  EXPECT_EQ(display_name("TeachingStaff"), "teaching staff");
  EXPECT_EQ(display_name("IITProgramme"), "IIT programme");
  EXPECT_EQ(display_name("IIT_MS_Student"), "IIT MS student");
  EXPECT_EQ(display_name("Professor"), "professor");
  Lexicon lex;
  lex.labels["AssistantProf"] = "assistant professor";
  EXPECT_EQ(display_name("AssistantProf", lex), "assistant professor");
}

TEST(RenderRestriction, Templates) {
  Lexicon lex = acad_lexicon();
  EXPECT_EQ(render_restriction(Concept::some(kAdv, kProf), lex), "has at least 1 professor as advisor");
  EXPECT_EQ(render_restriction(Concept::all(kAdv, kStaff), lex), "has only teaching staff as advisor");
  EXPECT_EQ(render_restriction(Concept::at_least(2, kAdv, kStaff), lex),
            "has at least 2 teaching staff as advisor");
  EXPECT_EQ(render_restriction(Concept::at_most(1, kAdv, kProf), lex), "has at most 1 professor as advisor");
  EXPECT_EQ(render_restriction(Concept::non_vacuous(kAdv, kStaff), lex),
            "has at least one teaching staff and only teaching staff as advisor");
  EXPECT_EQ(render_restriction(Concept::exactly(1, kAdv, kProf), lex), "has exactly one professor as advisor");
  EXPECT_EQ(render_restriction(Concept::exactly(3, kAdv, kProf), lex), "has exactly 3 professor as advisor");
  EXPECT_EQ(render_restriction(Concept::at_least(1, kAdv, Concept::conjunction({kStaff, Concept::negation(kProf)})), lex),
            "has at least 1 teaching staff and not professor as advisor");
  EXPECT_EQ(render_restriction(Concept::some("enrolledIn", Concept::atomic("IITProgramme")), lex),
            "enrolled in at least 1 IIT programme");
  EXPECT_EQ(render_restriction(Concept::some(kAdv, Concept::top()), lex), "has at least 1 thing as advisor");
  EXPECT_EQ(render_restriction(Concept::some(Role("enrolledIn", true), kProf), lex),
            "is enrolled in by at least 1 professor");
  EXPECT_EQ(render_restriction(Concept::some(kAdv.inverse(), kProf), lex), "is advisor of at least 1 professor");
}

TEST(RenderRestriction, NestedFillers) {
  Concept nested = Concept::some(kAdv, Concept::conjunction({kProf, Concept::all("teaches", Concept::atomic("Course"))}));
  EXPECT_EQ(render_restriction(nested), "has at least 1 professor and something that teaches only course as advisor");
  EXPECT_EQ(render_filler(Concept::disjunction({Concept::negation(kProf), kStaff})), "teaching staff or not professor");
}

TEST(RenderDescription, Examples) {
  Lexicon lex = acad_lexicon();
  LabelSet bob("bob", {kProf});
  EXPECT_EQ(render_description("bob", bob, lex).sentence, "bob: is a professor");
  LabelSet tom("tom", testing::concepts(testing::published_refined_label_sets().at("tom")));
  Description d = render_description("tom", tom, lex);
  EXPECT_EQ(d.class_phrases, (std::vector<std::string>{"a student"}));
  EXPECT_EQ(d.sentence,
            "tom: is a student, enrolled in at least 1 IIT programme, and has exactly one professor as advisor");
  EXPECT_EQ(render_description("x", LabelSet("x"), lex).sentence, "x:");
}

TEST(RenderDescription, DeferredClausesJoinWithOr) {
  LabelSet ls("x", {Concept::atomic("Student")});
  ls.add_deferred(Concept::disjunction({Concept::atomic("Employee"), Concept::some("hasAdvisor", kProf)}));
  Description d = render_description("x", ls);
  EXPECT_EQ(d.class_phrases,
            (std::vector<std::string>{"a student", "an employee or something that has at least 1 professor as advisor"}));
}

TEST(RenderDescription, Articles) {
  EXPECT_EQ(render_description("x", LabelSet("x", {Concept::atomic("Apple")})).sentence, "x: is an apple");
  EXPECT_EQ(render_description("x", LabelSet("x", {Concept::atomic("IITStudent")})).sentence, "x: is an IIT student");
  EXPECT_EQ(render_description("x", LabelSet("x", {Concept::atomic("MSStudent")})).sentence, "x: is an MS student");
  EXPECT_EQ(render_description("x", LabelSet("x", {Concept::atomic("UNStaff")})).sentence, "x: is a UN staff");
  EXPECT_EQ(render_description("x", LabelSet("x", {Concept::atomic("BSCStaff")})).sentence, "x: is a BSC staff");
}

// One phrase per label and per deferred clause, no placeholders, stable output.
TEST(RenderDescription, Properties) {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 300; ++i) {
    LabelSet ls("x");
    int n = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < n; ++k) {
      Concept c = testing::random_concept(rng, {"Alpha", "BetaGamma", "IOTA"}, {"hasPart", "isPartOf"}, 2);
      if (c.is(ConceptKind::kOr)) {
        ls.add_deferred(c);
      } else if (c.is_atomic() || c.is_restriction()) {
        ls.insert(c);
      }
    }
    Description d = render_description("x", ls);
    EXPECT_EQ(d.class_phrases.size() + d.restriction_phrases.size(), ls.size() + ls.deferred.size());
    EXPECT_EQ(d.sentence.find('<'), std::string::npos);
    EXPECT_EQ(d.sentence.find('>'), std::string::npos);
    EXPECT_EQ(render_description("x", ls).sentence, d.sentence);
  }
}

TEST(Lexicon, Parsing) {
  Lexicon lex = parse_lexicon(
      "# comment\n"
      "hasAdvisor = has | advisor\n"
      "enrolledIn = enrolled in |   # verb phrase only\n"
      "partOf = | part\n"
      "AssistantProf = assistant professor\n"
      "verb: Supervises\n");
  EXPECT_EQ(lex.roles.at("enrolledIn"), (RoleLexEntry{"enrolledIn", "enrolled in", ""}));
  EXPECT_EQ(lex.roles.at("partOf"), (RoleLexEntry{"partOf", "related to", "part"}));
  EXPECT_EQ(lex.labels.at("AssistantProf"), "assistant professor");
  EXPECT_TRUE(lex.verbs.count("supervises"));
  EXPECT_EQ(lookup_role("supervisesThesis", lex), (RoleLexEntry{"supervisesThesis", "supervises", "thesis"}));
  EXPECT_THROW(parse_lexicon("hasAdvisor has advisor\n"), LexiconError);
  EXPECT_THROW(parse_lexicon(" = x | y\n"), LexiconError);
  EXPECT_THROW(parse_lexicon("verb:\n"), LexiconError);
  EXPECT_THROW(load_lexicon("/nonexistent/file.lex"), std::runtime_error);
}

// Golden outputs of the full pipeline, pinned after a verified run.
class Golden : public ::testing::Test {
 protected:
  const Ontology& o = testing::acad();
  TaxonomyClosure tax = classify(o);
  MaterializedOntology m = materialize(o, tax);
  Lexicon lex = acad_lexicon();

  std::string refined(const std::string& x) {
    return render_description(x, semantic_refine(node_label_set(x, m, tax), o, tax), lex).sentence;
  }
  std::string traditional(const std::string& x) {
    return render_description(x, node_label_set(x, m, tax), lex).sentence;
  }
};

TEST_F(Golden, Individuals) {
  EXPECT_EQ(refined("bob"), "bob: is a professor");
  EXPECT_EQ(refined("alice"), "alice: is an assistant prof");
  EXPECT_EQ(refined("roy"), "roy: is a teaching staff");
  EXPECT_EQ(refined("sam"),
            "sam: is a student, enrolled in at least 1 IIT programme, has at least 1 teaching staff and not "
            "professor as advisor, has exactly one professor as advisor, and has at least one teaching staff "
            "and only teaching staff as advisor");
  EXPECT_EQ(refined("tom"),
            "tom: is a student, enrolled in at least 1 IIT programme, has exactly one professor as advisor, "
            "has exactly one teaching staff as advisor, and has at least one teaching staff and only teaching "
            "staff as advisor");
  EXPECT_EQ(traditional("tom"),
            "tom: is an IIT student, an IIT MS student, a student, enrolled in at least 1 IIT programme, has "
            "only teaching staff as advisor, has at most 1 teaching staff as advisor, and has at least 1 "
            "professor as advisor");
}

TEST_F(Golden, ConceptDescription) {
  LabelSet ls = semantic_refine(concept_label_set("IITPhdStudent", o), o, tax);
  std::string s = render_description("IITPhdStudent", ls, lex).sentence;
  EXPECT_NE(s.find("exactly one professor as advisor"), std::string::npos) << s;
  EXPECT_NE(s.find("at least 1 teaching staff and not professor as advisor"), std::string::npos) << s;
  EXPECT_EQ(s,
            "IITPhdStudent: is a student, enrolled in at least 1 IIT programme, has at least 1 teaching staff "
            "and not professor as advisor, has exactly one professor as advisor, and has at least one teaching "
            "staff and only teaching staff as advisor");
}

}  // namespace
}  // namespace shiqv
