#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shiqv/concept.hpp"
#include "shiqv/labelset.hpp"

namespace shiqv {

struct RoleLexEntry {
  std::string role;
  std::string verb;
  std::string noun;

  friend bool operator==(const RoleLexEntry&, const RoleLexEntry&) = default;
};

/**
 * @brief Role verb/noun overrides, concept display labels and extra verbs.
 */
struct Lexicon {
  std::map<std::string, RoleLexEntry> roles;
  std::map<std::string, std::string> labels;
  std::set<std::string> verbs;
};

class LexiconError : public std::runtime_error {
 public:
  LexiconError(int line, const std::string& msg)
      : std::runtime_error("lexicon line " + std::to_string(line) + ": " + msg) {}
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline const std::set<std::string>& builtin_verbs() {
  static const std::set<std::string> verbs{
      "has",      "have",     "is",       "are",     "owns",      "own",      "teaches",
      "teach",    "enrolled", "related",  "contains", "contain",  "uses",     "use",
      "includes", "include",  "belongs",  "works",   "lives",     "studies",  "supervises",
      "advises",  "writes",   "wrote",    "eats",    "likes",     "knows",    "holds",
      "makes",    "produces", "manages",  "attends", "takes",     "gives",    "located",
      "born",     "married",  "employed", "part",    "member",    "authored", "published",
      "created",  "governs",  "borders",  "speaks",  "plays",     "drives",   "reads",
      "admitted", "affiliated"};
  return verbs;
}

inline const std::set<std::string>& prepositions() {
  static const std::set<std::string> preps{"in",   "of",  "to",   "at",   "on",   "by",
                                           "for",  "from", "with", "into", "onto", "as",
                                           "over", "under", "about"};
  return preps;
}

// Splits an identifier on camel-case, digits, underscores, spaces and
// punctuation. Runs of capitals stay together ("IITProgramme" -> IIT, Programme).
inline std::vector<std::string> split_identifier(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (!std::isalnum(c)) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      unsigned char p = static_cast<unsigned char>(cur.back());
      bool boundary = false;
      if (std::isupper(c) && (std::islower(p) || std::isdigit(p))) boundary = true;
      if (std::isdigit(c) != std::isdigit(p) && !std::isupper(c)) boundary = true;
      if (std::isupper(c) && std::isupper(p) && i + 1 < s.size() &&
          std::islower(static_cast<unsigned char>(s[i + 1]))) {
        boundary = true;
      }
      if (boundary) flush();
    }
    cur.push_back(static_cast<char>(c));
  }
  flush();
  return out;
}

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline bool is_acronym(const std::string& w) {
  if (w.size() < 2) return false;
  return std::all_of(w.begin(), w.end(), [](char c) {
    return std::isupper(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c));
  });
}

inline std::string join(const std::vector<std::string>& words, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += sep;
    out += words[i];
  }
  return out;
}

}  // namespace detail

/** @brief Splits a concept name into lowercase words, keeping acronyms. */
inline std::string display_name(const std::string& concept_name, const Lexicon& lex = {}) {
  auto it = lex.labels.find(concept_name);
  if (it != lex.labels.end()) return it->second;
  std::vector<std::string> words;
  for (std::string& w : detail::split_identifier(concept_name)) {
    words.push_back(detail::is_acronym(w) ? w : detail::lower(w));
  }
  return detail::join(words, " ");
}

/**
 * @brief Splits a role name into an R-verb and R-noun.
 *
 * A leading copula maps to "related to". A verb followed only by
 * prepositions absorbs them into the verb phrase with an empty noun.
 */
inline RoleLexEntry tokenize_role(const std::string& role,
                                  const std::optional<RoleLexEntry>& override_entry = std::nullopt,
                                  const std::set<std::string>& extra_verbs = {}) {
  if (override_entry) return *override_entry;
  std::vector<std::string> toks;
  for (const std::string& w : detail::split_identifier(role)) toks.push_back(detail::lower(w));
  RoleLexEntry e{role, "related to", detail::join(toks, " ")};
  if (toks.empty()) return e;
  const std::string& first = toks.front();
  bool verb = detail::builtin_verbs().count(first) || extra_verbs.count(first);
  if (!verb) return e;
  std::vector<std::string> rest(toks.begin() + 1, toks.end());
  if (first == "is" || first == "are") {
    while (!rest.empty() && detail::prepositions().count(rest.back())) rest.pop_back();
    if (!rest.empty()) e.noun = detail::join(rest, " ");
    return e;
  }
  bool preps_only = !rest.empty() && std::all_of(rest.begin(), rest.end(), [](const std::string& w) {
    return detail::prepositions().count(w) > 0;
  });
  if (preps_only) {
    e.verb = detail::join(toks, " ");
    e.noun.clear();
  } else {
    e.verb = first;
    e.noun = detail::join(rest, " ");
  }
  return e;
}

inline RoleLexEntry lookup_role(const std::string& role, const Lexicon& lex) {
  auto it = lex.roles.find(role);
  if (it != lex.roles.end()) return it->second;
  return tokenize_role(role, std::nullopt, lex.verbs);
}

/**
 * @brief Parses a lexicon. Lines are `role = verb | noun`, `Concept = label`
 * or `verb: word`; '#' starts a comment.
 */
inline Lexicon parse_lexicon(std::string_view text) {
  Lexicon lex;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    std::string s = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.rfind("verb:", 0) == 0) {
      std::string w = detail::lower(detail::trim(s.substr(5)));
      if (w.empty()) throw LexiconError(line, "empty verb");
      lex.verbs.insert(w);
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) throw LexiconError(line, "expected '='");
    std::string key = detail::trim(s.substr(0, eq));
    std::string value = s.substr(eq + 1);
    if (key.empty()) throw LexiconError(line, "empty name");
    auto bar = value.find('|');
    if (bar == std::string::npos) {
      lex.labels[key] = detail::trim(value);
      continue;
    }
    std::string verb = detail::trim(value.substr(0, bar));
    lex.roles[key] = {key, verb.empty() ? "related to" : verb, detail::trim(value.substr(bar + 1))};
  }
  return lex;
}

inline Lexicon load_lexicon(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read lexicon '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_lexicon(ss.str());
}

namespace detail {

inline std::string join_list(const std::vector<std::string>& items, std::string_view conj) {
  if (items.empty()) return "";
  if (items.size() == 1) return items[0];
  std::string c(conj);
  if (items.size() == 2) return items[0] + " " + c + " " + items[1];
  std::string out;
  for (std::size_t i = 0; i + 1 < items.size(); ++i) out += items[i] + ", ";
  return out + c + " " + items.back();
}

inline std::string with_article(const std::string& phrase) {
  if (phrase.empty()) return phrase;
  char c = phrase[0];
  bool vowel;
  std::string first = phrase.substr(0, phrase.find(' '));
  if (is_acronym(first)) {
    vowel = std::string_view("AEFHILMNORSX").find(c) != std::string_view::npos;
  } else {
    vowel = std::string_view("aeiouAEIOU").find(c) != std::string_view::npos;
  }
  return (vowel ? "an " : "a ") + phrase;
}

// Filler operands: atomic names, then negations, then the rest.
inline std::vector<Concept> filler_order(std::span<const Concept> ops) {
  std::vector<Concept> out(ops.begin(), ops.end());
  auto rank = [](const Concept& c) { return c.is_atomic() ? 0 : c.is(ConceptKind::kNot) ? 1 : 2; };
  std::stable_sort(out.begin(), out.end(),
                   [&](const Concept& a, const Concept& b) { return rank(a) < rank(b); });
  return out;
}

}  // namespace detail

inline std::string render_restriction(const Concept& c, const Lexicon& lex = {});

/** @brief Noun phrase for a filler expression, without article. */
inline std::string render_filler(const Concept& c, const Lexicon& lex = {}) {
  switch (c.kind()) {
    case ConceptKind::kAtomic: return display_name(c.name(), lex);
    case ConceptKind::kTop: return "thing";
    case ConceptKind::kBottom: return "nothing";
    case ConceptKind::kNot: return "not " + render_filler(c.inner(), lex);
    case ConceptKind::kAnd:
    case ConceptKind::kOr: {
      std::vector<std::string> parts;
      for (const Concept& op : detail::filler_order(c.operands())) parts.push_back(render_filler(op, lex));
      return detail::join(parts, c.is(ConceptKind::kAnd) ? " and " : " or ");
    }
    default: return "something that " + render_restriction(c, lex);
  }
}

/** @brief Verbalizes a restriction with the constraint-specific template. */
inline std::string render_restriction(const Concept& c, const Lexicon& lex) {
  if (!c.is_restriction()) return render_filler(c, lex);
  RoleLexEntry e = lookup_role(c.role().name, lex);
  std::string verb = e.verb;
  if (c.role().inverted) {
    verb = e.noun.empty() ? "is " + verb + " by" : "is " + e.noun + " of";
    e.noun.clear();
  }
  const std::string f = render_filler(c.filler(), lex);
  const std::string n = std::to_string(c.number());
  std::string body;
  switch (c.kind()) {
    case ConceptKind::kSome: body = "at least 1 " + f; break;
    case ConceptKind::kAll: body = "only " + f; break;
    case ConceptKind::kAtLeast: body = "at least " + n + " " + f; break;
    case ConceptKind::kAtMost: body = "at most " + n + " " + f; break;
    case ConceptKind::kNonVacuous: body = "at least one " + f + " and only " + f; break;
    case ConceptKind::kExactly: body = "exactly " + (c.number() == 1 ? std::string("one") : n) + " " + f; break;
    default: break;
  }
  std::string out = verb + " " + body;
  if (!e.noun.empty()) out += " as " + e.noun;
  return out;
}

struct Description {
  std::string subject;
  std::vector<std::string> class_phrases;
  std::vector<std::string> restriction_phrases;
  std::string sentence;
};

/**
 * @brief Renders a label-set as "<subject>: is <classes>, <restrictions>".
 *
 * A pure function of the label-set and lexicon.
 */
inline Description render_description(const std::string& subject, const LabelSet& ls,
                                      const Lexicon& lex = {}) {
  Description d;
  d.subject = subject;
  std::vector<Concept> other;
  std::vector<Concept> restrictions;
  for (const Concept& c : ls.labels()) {
    if (c.is_atomic()) {
      d.class_phrases.push_back(detail::with_article(display_name(c.name(), lex)));
    } else if (c.is_restriction()) {
      restrictions.push_back(c);
    } else {
      other.push_back(c);
    }
  }
  // Restrictions are grouped by role name, canonical order within a role.
  std::stable_sort(restrictions.begin(), restrictions.end(), [](const Concept& a, const Concept& b) {
    return a.role().name < b.role().name;
  });
  for (const Concept& c : restrictions) d.restriction_phrases.push_back(render_restriction(c, lex));
  for (const Concept& c : other) d.class_phrases.push_back(render_filler(c, lex));
  for (const Concept& clause : ls.deferred) {
    std::vector<std::string> alts;
    for (const Concept& op : detail::filler_order(clause.operands())) {
      if (op.is_atomic()) {
        alts.push_back(detail::with_article(display_name(op.name(), lex)));
      } else if (op.is_restriction()) {
        alts.push_back("something that " + render_restriction(op, lex));
      } else {
        alts.push_back(render_filler(op, lex));
      }
    }
    d.class_phrases.push_back(detail::join(alts, " or "));
  }
  std::vector<std::string> all = d.class_phrases;
  all.insert(all.end(), d.restriction_phrases.begin(), d.restriction_phrases.end());
  d.sentence = subject + ":";
  if (!d.class_phrases.empty()) d.sentence += " is";
  if (!all.empty()) d.sentence += " " + detail::join_list(all, "and");
  return d;
}

}  // namespace shiqv
