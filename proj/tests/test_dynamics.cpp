#include <catch2/catch.hpp>

#include "seqtag/dynamics.hpp"

using namespace seqtag;

namespace {

// Two three-token entities sharing an ambiguous head ("the Madison ...")
// plus one unambiguous singleton.
Corpus river_corpus() {
  return Corpus(
      {
          Sentence{{"the", "Madison", "River"}, {"B-LOC", "I-LOC", "E-LOC"}},
          Sentence{{"the", "Madison", "Group"}, {"B-ORG", "I-ORG", "E-ORG"}},
          Sentence{{"Oslo", "."}, {"S-LOC", "O"}},
      },
      Scheme::IOBES);
}

}  // namespace

TEST_CASE("token label sets") {
  const auto sets = token_label_sets(river_corpus());
  CHECK(sets.at("Madison") == std::set<std::string>{"I-LOC", "I-ORG"});
  CHECK(sets.at("the") == std::set<std::string>{"B-LOC", "B-ORG"});
  CHECK(sets.at("River") == std::set<std::string>{"E-LOC"});
  CHECK(sets.at(".") == std::set<std::string>{"O"});

  SECTION("all-O corpus maps every form to {O}") {
    const Corpus all_o({Sentence{{"a", "b"}, {"O", "O"}}}, Scheme::IOBES);
    for (const auto& [token, labels] : token_label_sets(all_o)) {
      CHECK(labels == std::set<std::string>{"O"});
    }
  }
  SECTION("case folding merges forms") {
    const Corpus mixed({Sentence{{"Bank", "bank"}, {"S-ORG", "O"}}}, Scheme::IOBES);
    CHECK(token_label_sets(mixed).size() == 2);
    const auto folded = token_label_sets(mixed, true);
    CHECK(folded.size() == 1);
    CHECK(folded.at("bank") == std::set<std::string>{"S-ORG", "O"});
  }
}

TEST_CASE("ambiguity percentage") {
  SECTION("all-O corpus has none") {
    const Corpus all_o({Sentence{{"a", "b", "a"}, {"O", "O", "O"}}}, Scheme::IOBES);
    CHECK(ambiguity(all_o) == 0.0);
  }
  SECTION("hand count") {
    // 8 occurrences, 4 of them ("the" x2, "Madison" x2) ambiguous
    CHECK(ambiguity(river_corpus()) == Approx(50.0));
  }
  SECTION("empty corpus is an error") {
    CHECK_THROWS_AS(ambiguity(Corpus({}, Scheme::IOBES)), std::invalid_argument);
  }
}

TEST_CASE("ambiguity over unique forms") {
  // 6 distinct forms, 2 of them ambiguous
  CHECK(ambiguity_unique_forms(river_corpus()) == Approx(100.0 / 3.0));
  const Corpus all_o({Sentence{{"a", "b"}, {"O", "O"}}}, Scheme::IOBES);
  CHECK(ambiguity_unique_forms(all_o) == 0.0);
}

TEST_CASE("strictly dominated occurrences") {
  // "Madison" after B-LOC can only be I-LOC; after B-ORG only I-ORG.
  // "the" at sentence start keeps both of its labels.
  CHECK(strictly_dominated(river_corpus(), Scheme::IOBES) == Approx(50.0));

  SECTION("no ambiguous tokens reports zero") {
    const Corpus plain({Sentence{{"a", "b"}, {"O", "S-X"}}}, Scheme::IOBES);
    CHECK(strictly_dominated(plain, Scheme::IOBES) == 0.0);
  }
}

TEST_CASE("easy boundaries") {
  // entities: LOC(the Madison River), ORG(the Madison Group), LOC(Oslo)
  // firsts: the/the/Oslo -> 1 of 3 easy; lasts: River/Group/Oslo -> all easy
  const auto [first, last] = easy_boundaries(river_corpus(), Scheme::IOBES);
  CHECK(first == Approx(100.0 / 3.0));
  CHECK(last == Approx(100.0));

  SECTION("single unambiguous singleton is easy on both ends") {
    const Corpus one({Sentence{{"Iceland"}, {"S-LOC"}}}, Scheme::IOBES);
    const auto [f, l] = easy_boundaries(one, Scheme::IOBES);
    CHECK(f == 100.0);
    CHECK(l == 100.0);
  }
  SECTION("no entities is an error") {
    const Corpus none({Sentence{{"a"}, {"O"}}}, Scheme::IOBES);
    CHECK_THROWS_AS(easy_boundaries(none, Scheme::IOBES), std::invalid_argument);
  }
}

TEST_CASE("analyze aggregates the full report") {
  const TagDynamicsReport report = analyze(river_corpus(), Scheme::IOBES);
  CHECK(report.tag_types == 2);
  CHECK(report.ambiguity_pct == Approx(50.0));
  CHECK(report.strictly_dominated_pct == Approx(50.0));
  CHECK(report.easy_first_pct == Approx(100.0 / 3.0));
  CHECK(report.easy_last_pct == Approx(100.0));
  CHECK(report.token_occurrences == 8);
  CHECK(report.ambiguous_occurrences == 4);
  CHECK(report.entity_occurrences == 3);
}

TEST_CASE("metrics are computed on the requested scheme's labels") {
  // beta is ambiguous in IOBES (E-X vs I-X) but not in BIO (always I-X)
  const Corpus corpus(
      {
          Sentence{{"alpha", "beta"}, {"B-X", "E-X"}},
          Sentence{{"alpha", "beta", "gamma"}, {"B-X", "I-X", "E-X"}},
      },
      Scheme::IOBES);

  const TagDynamicsReport iobes = analyze(corpus, Scheme::IOBES);
  CHECK(iobes.ambiguity_pct == Approx(40.0));
  CHECK(iobes.strictly_dominated_pct == Approx(0.0));
  CHECK(iobes.easy_first_pct == Approx(100.0));
  CHECK(iobes.easy_last_pct == Approx(50.0));

  const TagDynamicsReport bio = analyze(corpus, Scheme::BIO);
  CHECK(bio.ambiguity_pct == 0.0);
  CHECK(bio.easy_last_pct == Approx(100.0));
  CHECK(bio.tag_types == iobes.tag_types);

  SECTION("conversion never shrinks the label space") {
    const Corpus as_bio = convert_corpus(corpus, Scheme::BIO);
    CHECK(convert_corpus(as_bio, Scheme::IOBES).vocab().size() >= as_bio.vocab().size());
  }
}

TEST_CASE("reports are deterministic and order-insensitive for ambiguity") {
  const Corpus forward = river_corpus();
  std::vector<Sentence> reversed(forward.sentences().rbegin(), forward.sentences().rend());
  const Corpus backward(std::move(reversed), Scheme::IOBES);
  CHECK(ambiguity(forward) == ambiguity(backward));
  const TagDynamicsReport a = analyze(forward, Scheme::IOBES);
  const TagDynamicsReport b = analyze(forward, Scheme::IOBES);
  CHECK(a.ambiguity_pct == b.ambiguity_pct);
  CHECK(a.strictly_dominated_pct == b.strictly_dominated_pct);
}

TEST_CASE("the left context can pin an ambiguous token to one label") {
  const Corpus corpus(
      {
          Sentence{{"the", "Hudson", "River"}, {"B-LOC", "I-LOC", "E-LOC"}},
          Sentence{{"near", "Hudson"}, {"O", "S-ORG"}},
      },
      Scheme::IOBES);
  // Hudson's labels: {I-LOC, S-ORG}. After B-LOC only I-LOC is legal, after
  // O only S-ORG is, so both occurrences are dominated.
  CHECK(strictly_dominated(corpus, Scheme::IOBES) == Approx(100.0));
}
