#include <catch2/catch.hpp>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "seqtag/conll.hpp"

using namespace seqtag;

namespace {

std::vector<std::string> labels(std::initializer_list<const char*> values) {
  return {values.begin(), values.end()};
}

}  // namespace

TEST_CASE("read_conll basics") {
  SECTION("single token file") {
    std::istringstream in("EU B-ORG\n\n");
    const Corpus corpus = read_conll(in, Scheme::BIO);
    REQUIRE(corpus.sentences().size() == 1);
    CHECK(corpus.sentences()[0].tokens == std::vector<std::string>{"EU"});
    CHECK(corpus.sentences()[0].labels == std::vector<std::string>{"B-ORG"});
    CHECK(corpus.token_count() == 1);
  }
  SECTION("docstart rows are dropped") {
    std::istringstream in(
        "-DOCSTART- -X- -X- O\n"
        "\n"
        "EU NNP I-NP I-ORG\n"
        "rejects VBZ I-VP O\n"
        "\n"
        "-DOCSTART- -X- -X- O\n"
        "\n"
        "Peter NNP I-NP I-PER\n");
    const Corpus corpus = read_conll(in, Scheme::IOB1);
    REQUIRE(corpus.sentences().size() == 2);
    CHECK(corpus.sentences()[0].tokens == std::vector<std::string>{"EU", "rejects"});
    CHECK(corpus.sentences()[1].labels == std::vector<std::string>{"I-PER"});
  }
  SECTION("crlf endings") {
    std::istringstream in("a O\r\nb O\r\n\r\nc O\r\n");
    const Corpus corpus = read_conll(in, Scheme::IOBES);
    REQUIRE(corpus.sentences().size() == 2);
    CHECK(corpus.sentences()[0].tokens == std::vector<std::string>{"a", "b"});
  }
  SECTION("column selection") {
    std::istringstream in("The DT B-NP O\n");
    const Corpus corpus = read_conll(in, Scheme::BIO, ConllOptions{0, 2});
    CHECK(corpus.sentences()[0].labels == std::vector<std::string>{"B-NP"});
  }
  SECTION("label column defaults to last") {
    std::istringstream in("EU NNP I-NP B-ORG\n");
    const Corpus corpus = read_conll(in, Scheme::BIO);
    CHECK(corpus.sentences()[0].labels == std::vector<std::string>{"B-ORG"});
  }
  SECTION("vocab collects labels in order of first appearance") {
    std::istringstream in("a O\nb B-X\nc I-X\nd O\n");
    const Corpus corpus = read_conll(in, Scheme::BIO);
    CHECK(corpus.vocab().labels() == std::vector<std::string>{"O", "B-X", "I-X"});
  }
  SECTION("empty input gives an empty corpus") {
    std::istringstream in("");
    CHECK(read_conll(in, Scheme::IOBES).sentences().empty());
  }
  SECTION("single-column files serve as both token and label") {
    std::istringstream in("O\nB-X\nI-X\n");
    const Corpus corpus = read_conll(in, Scheme::BIO);
    REQUIRE(corpus.sentences().size() == 1);
    CHECK(corpus.sentences()[0].tokens == std::vector<std::string>{"O", "B-X", "I-X"});
    CHECK(corpus.sentences()[0].labels == std::vector<std::string>{"O", "B-X", "I-X"});
  }
}

TEST_CASE("read_conll errors carry line numbers") {
  SECTION("ragged row") {
    std::istringstream in("a O\nb\n");
    ConllOptions options;
    options.label_column = 1;
    CHECK_THROWS_WITH(read_conll(in, Scheme::IOBES, options), Catch::Contains("line 2"));
  }
  SECTION("bad label") {
    std::istringstream in("a O\nb E-ORG\n");
    CHECK_THROWS_WITH(read_conll(in, Scheme::BIO, {}),
                      Catch::Contains("line 2") && Catch::Contains("E-ORG"));
  }
}

TEST_CASE("write_conll format contract") {
  SECTION("two sentences, one separator, trailing newline") {
    const Corpus corpus(
        {Sentence{{"a", "b"}, {"O", "O"}}, Sentence{{"c"}, {"S-X"}}}, Scheme::IOBES);
    std::ostringstream out;
    write_conll(corpus, out);
    CHECK(out.str() == "a O\nb O\n\nc S-X\n");
  }
  SECTION("empty corpus writes nothing") {
    std::ostringstream out;
    write_conll(Corpus({}, Scheme::IOBES), out);
    CHECK(out.str().empty());
  }
}

TEST_CASE("read-write-read round trip") {
  std::istringstream in(
      "EU NNP I-NP I-ORG\n"
      "rejects VBZ I-VP O\n"
      "German JJ I-NP I-MISC\n"
      "\n"
      "Peter NNP I-NP I-PER\n"
      "Blackburn NNP I-NP I-PER\n");
  const Corpus first = read_conll(in, Scheme::IOB1);
  std::ostringstream out;
  write_conll(first, out);
  std::istringstream again(out.str());
  const Corpus second = read_conll(again, Scheme::IOB1);
  CHECK(first == second);
}

TEST_CASE("span extraction") {
  SECTION("iobes singleton") {
    const auto spans = extract_spans(labels({"O", "S-LOC", "O"}), Scheme::IOBES);
    CHECK(spans == std::vector<Span>{{"LOC", 1, 2}});
  }
  SECTION("iobes full entity") {
    const auto spans = extract_spans(labels({"B-ORG", "I-ORG", "E-ORG"}), Scheme::IOBES);
    CHECK(spans == std::vector<Span>{{"ORG", 0, 3}});
  }
  SECTION("bio illegal start is repaired like conlleval") {
    const auto spans = extract_spans(labels({"O", "I-LOC"}), Scheme::BIO);
    CHECK(spans == std::vector<Span>{{"LOC", 1, 2}});
    CHECK(oracle::conlleval_chunks(labels({"O", "I-LOC"})) == spans);
  }
  SECTION("type switch splits the span") {
    const auto spans = extract_spans(labels({"B-ORG", "I-LOC"}), Scheme::BIO);
    CHECK(spans == std::vector<Span>{{"ORG", 0, 1}, {"LOC", 1, 2}});
  }
  SECTION("unterminated runs close at the boundary") {
    CHECK(extract_spans(labels({"B-X", "I-X"}), Scheme::IOBES) ==
          std::vector<Span>{{"X", 0, 2}});
  }
  SECTION("stray E becomes a width-1 span") {
    CHECK(extract_spans(labels({"O", "E-X"}), Scheme::IOBES) ==
          std::vector<Span>{{"X", 1, 2}});
  }
}

TEST_CASE("extraction matches the conlleval chunker on random sequences") {
  // includes illegal sequences, which is where the repair policy matters
  const std::vector<std::string> iobes_labels{"O",   "B-X", "I-X", "E-X", "S-X",
                                              "B-Y", "I-Y", "E-Y", "S-Y"};
  const std::vector<std::string> bio_labels{"O", "B-X", "I-X", "B-Y", "I-Y"};
  std::mt19937 rng(606);
  for (int round = 0; round < 500; ++round) {
    const std::size_t n = 1 + rng() % 9;
    std::vector<std::string> iobes, bio;
    for (std::size_t i = 0; i < n; ++i) {
      iobes.push_back(iobes_labels[rng() % iobes_labels.size()]);
      bio.push_back(bio_labels[rng() % bio_labels.size()]);
    }
    CHECK(extract_spans(iobes, Scheme::IOBES) == oracle::conlleval_chunks(iobes));
    CHECK(extract_spans(bio, Scheme::BIO) == oracle::conlleval_chunks(bio));
    CHECK(extract_spans(bio, Scheme::IOB1) == oracle::conlleval_chunks(bio));
  }
}

TEST_CASE("span encoding") {
  SECTION("iobes width one") {
    CHECK(encode_spans(std::vector<Span>{{"LOC", 0, 1}}, 2, Scheme::IOBES) ==
          labels({"S-LOC", "O"}));
  }
  SECTION("bio") {
    CHECK(encode_spans(std::vector<Span>{{"ORG", 0, 2}}, 2, Scheme::BIO) ==
          labels({"B-ORG", "I-ORG"}));
  }
  SECTION("iob1 uses B only between adjacent same-type spans") {
    CHECK(encode_spans(std::vector<Span>{{"ORG", 0, 1}, {"ORG", 1, 2}}, 2, Scheme::IOB1) ==
          labels({"I-ORG", "B-ORG"}));
    CHECK(encode_spans(std::vector<Span>{{"ORG", 0, 1}, {"LOC", 1, 2}}, 2, Scheme::IOB1) ==
          labels({"I-ORG", "I-LOC"}));
  }
  SECTION("overlap is rejected") {
    CHECK_THROWS_AS(encode_spans(std::vector<Span>{{"A", 0, 2}, {"B", 1, 3}}, 3, Scheme::BIO),
                    std::invalid_argument);
  }
  SECTION("out of bounds is rejected") {
    CHECK_THROWS_AS(encode_spans(std::vector<Span>{{"A", 1, 1}}, 2, Scheme::BIO),
                    std::invalid_argument);
    CHECK_THROWS_AS(encode_spans(std::vector<Span>{{"A", 0, 3}}, 2, Scheme::BIO),
                    std::invalid_argument);
  }
}

TEST_CASE("encode-extract round trip on random span sets") {
  const std::vector<std::string> types{"PER", "LOC", "ORG", "MISC"};
  std::mt19937 rng(515);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 1 + rng() % 12;
    const std::vector<Span> spans = oracle::random_spans(rng, n, types);
    for (Scheme scheme : {Scheme::IOB1, Scheme::BIO, Scheme::IOBES}) {
      const std::vector<std::string> encoded = encode_spans(spans, n, scheme);
      CHECK(extract_spans(encoded, scheme) == spans);
      CHECK(validate_sequence(encoded, scheme).empty());
    }
  }
}

TEST_CASE("scheme conversion") {
  SECTION("bio to iobes") {
    CHECK(convert_scheme(labels({"B-ORG", "I-ORG"}), Scheme::BIO, Scheme::IOBES) ==
          labels({"B-ORG", "E-ORG"}));
    CHECK(convert_scheme(labels({"B-LOC"}), Scheme::BIO, Scheme::IOBES) == labels({"S-LOC"}));
  }
  SECTION("iob1 adjacent entities become two singletons") {
    CHECK(convert_scheme(labels({"I-ORG", "B-ORG"}), Scheme::IOB1, Scheme::IOBES) ==
          labels({"S-ORG", "S-ORG"}));
  }
  SECTION("round trips preserve span sets") {
    std::mt19937 rng(616);
    const std::vector<std::string> types{"A", "B"};
    for (int round = 0; round < 100; ++round) {
      const std::size_t n = 1 + rng() % 10;
      const std::vector<Span> spans = oracle::random_spans(rng, n, types);
      const auto iobes = encode_spans(spans, n, Scheme::IOBES);
      const auto bio = convert_scheme(iobes, Scheme::IOBES, Scheme::BIO);
      const auto iob1 = convert_scheme(bio, Scheme::BIO, Scheme::IOB1);
      const auto back = convert_scheme(iob1, Scheme::IOB1, Scheme::IOBES);
      CHECK(extract_spans(bio, Scheme::BIO) == spans);
      CHECK(extract_spans(iob1, Scheme::IOB1) == spans);
      CHECK(back == iobes);
    }
  }
}

TEST_CASE("corpus conversion preserves tokens and shapes") {
  const Corpus corpus(
      {
          Sentence{{"EU", "rejects", "it"}, {"B-ORG", "O", "O"}},
          Sentence{{"New", "York"}, {"B-LOC", "I-LOC"}},
      },
      Scheme::BIO);
  const Corpus converted = convert_corpus(corpus, Scheme::IOBES);
  REQUIRE(converted.sentences().size() == corpus.sentences().size());
  CHECK(converted.token_count() == corpus.token_count());
  for (std::size_t s = 0; s < corpus.sentences().size(); ++s) {
    CHECK(converted.sentences()[s].tokens == corpus.sentences()[s].tokens);
    CHECK(converted.sentences()[s].labels.size() == corpus.sentences()[s].labels.size());
  }
  CHECK(converted.scheme() == Scheme::IOBES);
  CHECK(converted.sentences()[1].labels == std::vector<std::string>{"B-LOC", "E-LOC"});
}

TEST_CASE("validate_sequence") {
  SECTION("reports the illegal pair") {
    const auto violations = validate_sequence(labels({"O", "E-ORG"}), Scheme::IOBES);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].position == 1);
    CHECK(violations[0].from_label == "O");
    CHECK(violations[0].to_label == "E-ORG");
  }
  SECTION("boundary violations") {
    const auto head = validate_sequence(labels({"I-X", "E-X"}), Scheme::IOBES);
    REQUIRE(head.size() == 1);
    CHECK(head[0].position == 0);
    CHECK(head[0].from_label == "<GO>");

    const auto tail = validate_sequence(labels({"B-X", "I-X"}), Scheme::IOBES);
    REQUIRE(tail.size() == 1);
    CHECK(tail[0].position == 2);
    CHECK(tail[0].to_label == "<EOS>");
  }
  SECTION("encoded spans always validate") {
    std::mt19937 rng(717);
    for (int round = 0; round < 50; ++round) {
      const std::size_t n = 1 + rng() % 8;
      const auto spans = oracle::random_spans(rng, n, std::vector<std::string>{"Q"});
      CHECK(validate_sequence(encode_spans(spans, n, Scheme::IOBES), Scheme::IOBES).empty());
    }
  }
  SECTION("empty sequence has no violations") {
    CHECK(validate_sequence(std::vector<std::string>{}, Scheme::IOBES).empty());
  }
}

TEST_CASE("repair then re-encode is stable") {
  // extract -> encode yields a legal sequence even from illegal input
  const std::vector<std::string> broken{"O", "I-ORG", "E-LOC", "E-LOC", "S-PER"};
  const auto spans = extract_spans(broken, Scheme::IOBES);
  const auto repaired = encode_spans(spans, broken.size(), Scheme::IOBES);
  CHECK(validate_sequence(repaired, Scheme::IOBES).empty());
  CHECK(extract_spans(repaired, Scheme::IOBES) == spans);
}
