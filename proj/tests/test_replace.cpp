#include <doctest.h>

#include <set>
#include <sstream>
#include <string>

#include "lexmix/errors.h"
#include "lexmix/lexicon.h"
#include "lexmix/replace.h"
#include "lexmix/rng.h"
#include "lexmix/text.h"

using namespace lexmix;

namespace {

BilingualLexicon lex_from(const std::string& tsv) {
  std::istringstream in(tsv);
  return load_lexicon(in, "en", "de", "test");
}

Document doc_of(uint64_t id, const std::string& text) {
  Document d;
  d.id = id;
  d.lang = "en";
  d.role = Role::hr;
  d.text = text;
  return d;
}

}  // namespace

TEST_SUITE_BEGIN("replace");

TEST_CASE("r=0 leaves the document untouched") {
  const BilingualLexicon lex = lex_from("the\tder\ncat\tKatze\n");
  const Document doc = doc_of(1, "the cat sat on the mat.");
  const ReplacementOutcome out = replace(doc, lex, 0.0, 42);
  CHECK(out.document.text == doc.text);
  CHECK(out.k_target == 0);
  CHECK(out.k_actual == 0);
  CHECK(out.replaced.empty());
}

TEST_CASE("full ratio, full coverage: unique exhaustive outcome") {
  const BilingualLexicon lex = lex_from("the\tder\ncat\tKatze\nsat\tsa\xc3\x9f\n");
  const Document doc = doc_of(2, "the cat sat");
  const ReplacementOutcome out = replace(doc, lex, 1.0, 42);
  CHECK(out.document.text == "der Katze sa\xc3\x9f");
  CHECK(out.n_words == 3);
  CHECK(out.k_target == 3);
  CHECK(out.k_actual == 3);
}

TEST_CASE("coverage caps the replacement count") {
  // 10 words, exactly 5 in-lexicon, r=0.7 -> k_target 7, k_actual 5.
  const BilingualLexicon lex = lex_from("w0\tx0\nw1\tx1\nw2\tx2\nw3\tx3\nw4\tx4\n");
  const Document doc = doc_of(3, "w0 w1 w2 w3 w4 v5 v6 v7 v8 v9");
  const ReplacementOutcome out = replace(doc, lex, 0.7, 1);
  CHECK(out.n_words == 10);
  CHECK(out.n_in_lexicon == 5);
  CHECK(out.k_target == 7);
  CHECK(out.k_actual == 5);
}

TEST_CASE("punctuation survives replacement") {
  const BilingualLexicon lex = lex_from("mixture\tMischung\n");
  const Document doc = doc_of(4, "onion mixture.");
  const ReplacementOutcome out = replace(doc, lex, 1.0, 9);
  CHECK(out.document.text == "onion Mischung.");
}

TEST_CASE("worked passage: exhaustive substitution with case transfer") {
  const BilingualLexicon lex = lex_from(
      "combine\tkombinieren\n"
      "the\tder\n"
      "lamb\tLamm\n"
      "with\tmit\n"
      "onion\tZwiebel\n"
      "cinnamon\tZimtbaum\n"
      "and\tund\n"
      "red\trot\n"
      "wine\tWein\n"
      "cook\tKoch\n"
      "for\tda\n"
      "few\twenig\n"
      "cup\tTasse\n"
      "of\taus\n"
      "water\tWasser\n"
      "or\toder\n"
      "stock\tVorrat\n"
      "see\tsehen\n"
      "more\tmehr\n");
  const std::string input =
      "Combine the lamb with the onion mixture. "
      "Add the cinnamon, oregano and red wine and cook for a few minutes. "
      "Add the tomatoes and a cup of water or stock. "
      "See more Greek recipes.";
  const std::string expected =
      "Kombinieren der Lamm mit der Zwiebel mixture. "
      "Add der Zimtbaum, oregano und rot Wein und Koch da a wenig minutes. "
      "Add der tomatoes und a Tasse aus Wasser oder Vorrat. "
      "Sehen mehr Greek recipes.";
  // At r=1 with single-sense entries the outcome is seed-independent.
  for (const uint64_t seed : {0ull, 7ull, 123456789ull}) {
    const ReplacementOutcome out = replace(doc_of(5, input), lex, 1.0, seed);
    CHECK(out.document.text == expected);
    CHECK(out.k_actual == out.n_in_lexicon);
  }
}

TEST_CASE("locality: unselected words and gaps are byte-identical") {
  const BilingualLexicon lex = lex_from("apple\tApfel\nplum\tPflaume\npear\tBirne\n");
  SplitMix64 gen(31337);
  const char* vocab[] = {"apple", "plum", "pear", "kiwi", "fig", "Grape,", "(melon)", "one2three"};
  for (int round = 0; round < 100; ++round) {
    std::string text;
    const int n = 1 + static_cast<int>(gen.next_below(20));
    for (int i = 0; i < n; ++i) {
      if (i) text += gen.next_below(4) == 0 ? "  " : " ";
      text += vocab[gen.next_below(std::size(vocab))];
    }
    const Document doc = doc_of(round, text);
    const double r = static_cast<double>(gen.next_below(101)) / 100.0;
    const ReplacementOutcome out = replace(doc, lex, r, gen.next());

    // Coverage cap, exactly.
    const auto words = segment_words(text);
    uint64_t in_lex = 0;
    for (const auto& w : words) {
      if (lex.contains(w.normalized)) ++in_lex;
    }
    CHECK(out.k_actual == std::min<uint64_t>(
                              static_cast<uint64_t>(r * static_cast<double>(words.size())),
                              in_lex));

    // Rebuild the expected text from the replacement records; everything
    // else must be untouched.
    std::set<size_t> replaced_positions;
    for (const auto& rep : out.replaced) {
      replaced_positions.insert(rep.word_index);
      const LexiconEntry* entry = lex.find(words[rep.word_index].normalized);
      REQUIRE(entry != nullptr);
      bool valid = false;
      for (const auto& t : entry->translations) {
        if (rep.substituted == t || rep.substituted == transfer_case(rep.original, t)) valid = true;
      }
      CHECK_MESSAGE(valid, "substitution not a listed translation: ", rep.substituted);
    }
    std::string expected;
    size_t cursor = 0;
    for (size_t i = 0; i < words.size(); ++i) {
      expected += text.substr(cursor, words[i].begin - cursor);
      if (replaced_positions.count(i) > 0) {
        for (const auto& rep : out.replaced) {
          if (rep.word_index == i) expected += rep.substituted;
        }
      } else {
        expected += text.substr(words[i].begin, words[i].end - words[i].begin);
      }
      cursor = words[i].end;
    }
    expected += text.substr(cursor);
    CHECK(out.document.text == expected);
  }
}

TEST_CASE("monotonicity: k_actual non-decreasing in r under a shared seed") {
  const BilingualLexicon lex = lex_from("a\tx\nb\ty\nc\tz\n");
  const Document doc = doc_of(6, "a b c d e f g h i j");
  uint64_t prev = 0;
  for (int pct = 0; pct <= 100; pct += 5) {
    const ReplacementOutcome out = replace(doc, lex, pct / 100.0, 55);
    CHECK(out.k_actual >= prev);
    prev = out.k_actual;
  }
}

TEST_CASE("determinism: same seed same text; different seed differs") {
  std::string tsv;
  for (int i = 0; i < 30; ++i) {
    tsv += "w" + std::to_string(i) + "\ta" + std::to_string(i) + "|b" + std::to_string(i) + "\n";
  }
  const BilingualLexicon lex = lex_from(tsv);
  std::string text;
  for (int i = 0; i < 30; ++i) text += (i ? " w" : "w") + std::to_string(i);
  const Document doc = doc_of(7, text);
  const ReplacementOutcome a = replace(doc, lex, 0.5, 1001);
  const ReplacementOutcome b = replace(doc, lex, 0.5, 1001);
  CHECK(a.document.text == b.document.text);
  const ReplacementOutcome c = replace(doc, lex, 0.5, 1002);
  CHECK(a.document.text != c.document.text);
}

TEST_CASE("selection spreads over candidate positions") {
  const BilingualLexicon lex = lex_from("t\tu\n");
  std::string text = "t";
  for (int i = 1; i < 10; ++i) text += " t";
  std::vector<int> hits(10, 0);
  for (uint64_t seed = 0; seed < 2000; ++seed) {
    const ReplacementOutcome out = replace(doc_of(8, text), lex, 0.1, seed);
    REQUIRE(out.k_actual == 1);
    ++hits[out.replaced[0].word_index];
  }
  for (const int h : hits) {
    CHECK(h > 120);  // 200 expected
    CHECK(h < 300);
  }
}

TEST_CASE("multi-sense translations all occur") {
  const BilingualLexicon lex = lex_from("word\teins|zwei|drei\n");
  std::set<std::string> seen;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const ReplacementOutcome out = replace(doc_of(9, "word"), lex, 1.0, seed);
    seen.insert(out.document.text);
  }
  CHECK(seen == std::set<std::string>{"eins", "zwei", "drei"});
}

TEST_CASE("empty text and out-of-range ratio") {
  const BilingualLexicon lex = lex_from("a\tb\n");
  const ReplacementOutcome out = replace(doc_of(10, ""), lex, 1.0, 3);
  CHECK(out.n_words == 0);
  CHECK(out.k_actual == 0);
  CHECK(out.document.text.empty());
  CHECK_THROWS_AS(replace(doc_of(11, "a"), lex, 1.5, 3), UsageError);
  CHECK_THROWS_AS(replace(doc_of(12, "a"), lex, -0.1, 3), UsageError);
}

TEST_CASE("config fingerprint separates lexicons and ratios") {
  const BilingualLexicon a = lex_from("a\tx\n");
  const BilingualLexicon b = lex_from("a\ty\n");
  CHECK(replacement_config_fingerprint(a, 0.5) != replacement_config_fingerprint(b, 0.5));
  CHECK(replacement_config_fingerprint(a, 0.5) != replacement_config_fingerprint(a, 0.7));
  CHECK(replacement_config_fingerprint(a, 0.5) == replacement_config_fingerprint(a, 0.5));
}

TEST_SUITE_END();
