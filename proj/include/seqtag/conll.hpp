#pragma once

// CoNLL-format corpora: reading/writing, span extraction and encoding,
// scheme conversion, and sequence validation.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "seqtag/core.hpp"
#include "seqtag/tags.hpp"

namespace seqtag {

struct Sentence {
  std::vector<std::string> tokens;
  std::vector<std::string> labels;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// (type, start, end) with end exclusive; the unit of entity-level F1.
struct Span {
  std::string entity_type;
  std::size_t start = 0;
  std::size_t end = 0;

  friend auto operator<=>(const Span&, const Span&) = default;
};

class Corpus {
 public:
  Corpus(std::vector<Sentence> sentences, Scheme scheme)
      : sentences_(std::move(sentences)), scheme_(scheme) {
    std::vector<std::string> labels;
    std::set<std::string, std::less<>> seen;
    for (const Sentence& sentence : sentences_) {
      if (sentence.tokens.empty()) {
        throw std::invalid_argument("corpus contains an empty sentence");
      }
      if (sentence.tokens.size() != sentence.labels.size()) {
        throw std::invalid_argument("sentence token/label lengths differ");
      }
      for (const std::string& label : sentence.labels) {
        if (seen.insert(label).second) {
          parse_tag(label, scheme_);
          labels.push_back(label);
        }
      }
    }
    vocab_ = TagVocabulary(std::move(labels));
  }

  const std::vector<Sentence>& sentences() const { return sentences_; }
  Scheme scheme() const { return scheme_; }
  const TagVocabulary& vocab() const { return vocab_; }

  std::size_t token_count() const {
    std::size_t total = 0;
    for (const Sentence& sentence : sentences_) total += sentence.tokens.size();
    return total;
  }

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.scheme_ == b.scheme_ && a.sentences_ == b.sentences_;
  }

 private:
  std::vector<Sentence> sentences_;
  Scheme scheme_;
  TagVocabulary vocab_;
};

struct ConllOptions {
  std::size_t token_column = 0;
  std::optional<std::size_t> label_column;  // defaults to the last column
};

// Whitespace-separated columns, blank lines between sentences. "-DOCSTART-"
// rows mark document boundaries and are dropped. Accepts \n and \r\n.
inline Corpus read_conll(std::istream& in, Scheme scheme, const ConllOptions& options = {}) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::set<std::string, std::less<>> validated;
  std::string line;
  std::size_t line_number = 0;

  auto flush = [&] {
    if (!current.tokens.empty()) {
      sentences.push_back(std::move(current));
      current = {};
    }
  };

  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> columns;
    {
      std::istringstream fields(line);
      std::string field;
      while (fields >> field) columns.push_back(std::move(field));
    }
    if (columns.empty()) {
      flush();
      continue;
    }
    if (columns[0] == "-DOCSTART-") {
      flush();
      continue;
    }
    const std::size_t label_column = options.label_column.value_or(columns.size() - 1);
    if (options.token_column >= columns.size() || label_column >= columns.size()) {
      throw ParseError("line " + std::to_string(line_number) + ": expected at least " +
                       std::to_string(std::max(options.token_column, label_column) + 1) +
                       " columns, found " + std::to_string(columns.size()));
    }
    const std::string& label = columns[label_column];
    if (!validated.contains(label)) {
      try {
        parse_tag(label, scheme);
      } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(line_number) + ": " + e.what());
      }
      validated.insert(label);
    }
    // copy the label before the token column is moved from; the two
    // indices coincide for single-column files
    current.labels.push_back(label);
    current.tokens.push_back(std::move(columns[options.token_column]));
  }
  flush();
  return Corpus(std::move(sentences), scheme);
}

// Two columns (token, label), one blank line between sentences, "\n" endings.
inline void write_conll(const Corpus& corpus, std::ostream& out) {
  const auto& sentences = corpus.sentences();
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (s > 0) out << '\n';
    for (std::size_t i = 0; i < sentences[s].tokens.size(); ++i) {
      out << sentences[s].tokens[i] << ' ' << sentences[s].labels[i] << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed to write corpus");
}

// Span extraction with the conlleval repair policy: an I-/E- tag whose
// predecessor does not legally continue it starts a new span, S- is always
// a width-1 span, and an open span at the sentence end closes there.
inline std::vector<Span> extract_spans(std::span<const std::string> labels, Scheme scheme) {
  std::vector<Span> spans;
  std::optional<Span> open;

  auto close_open = [&] {
    if (open) {
      spans.push_back(std::move(*open));
      open.reset();
    }
  };

  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Tag tag = parse_tag(labels[i], scheme);
    switch (tag.prefix) {
      case Prefix::O:
        close_open();
        break;
      case Prefix::B:
        close_open();
        open = Span{tag.entity_type, i, i + 1};
        break;
      case Prefix::S:
        close_open();
        spans.push_back(Span{tag.entity_type, i, i + 1});
        break;
      case Prefix::I:
        if (open && open->entity_type == tag.entity_type) {
          open->end = i + 1;
        } else {
          close_open();
          open = Span{tag.entity_type, i, i + 1};
        }
        break;
      case Prefix::E:
        if (open && open->entity_type == tag.entity_type) {
          open->end = i + 1;
          close_open();
        } else {
          close_open();
          spans.push_back(Span{tag.entity_type, i, i + 1});
        }
        break;
      default:
        throw ParseError("unexpected boundary tag in label sequence");
    }
  }
  close_open();
  return spans;
}

// Unique legal encoding of a span set; inverse of extract_spans.
inline std::vector<std::string> encode_spans(std::span<const Span> spans, std::size_t length,
                                             Scheme scheme) {
  std::vector<Span> ordered(spans.begin(), spans.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const Span& a, const Span& b) { return a.start < b.start; });
  for (std::size_t s = 0; s < ordered.size(); ++s) {
    const Span& span = ordered[s];
    if (span.start >= span.end || span.end > length) {
      throw std::invalid_argument("span [" + std::to_string(span.start) + ", " +
                                  std::to_string(span.end) + ") is out of bounds");
    }
    if (span.entity_type.empty()) {
      throw std::invalid_argument("span has an empty entity type");
    }
    if (s > 0 && ordered[s - 1].end > span.start) {
      throw std::invalid_argument("spans overlap at token " + std::to_string(span.start));
    }
  }

  std::vector<std::string> labels(length, "O");
  const Span* previous = nullptr;
  for (const Span& span : ordered) {
    const std::size_t width = span.end - span.start;
    switch (scheme) {
      case Scheme::IOBES:
        if (width == 1) {
          labels[span.start] = "S-" + span.entity_type;
        } else {
          labels[span.start] = "B-" + span.entity_type;
          for (std::size_t i = span.start + 1; i + 1 < span.end; ++i) {
            labels[i] = "I-" + span.entity_type;
          }
          labels[span.end - 1] = "E-" + span.entity_type;
        }
        break;
      case Scheme::BIO:
        labels[span.start] = "B-" + span.entity_type;
        for (std::size_t i = span.start + 1; i < span.end; ++i) {
          labels[i] = "I-" + span.entity_type;
        }
        break;
      case Scheme::IOB1: {
        // B only marks a same-type span butted against the previous one.
        const bool adjacent_same_type = previous != nullptr && previous->end == span.start &&
                                        previous->entity_type == span.entity_type;
        labels[span.start] = (adjacent_same_type ? "B-" : "I-") + span.entity_type;
        for (std::size_t i = span.start + 1; i < span.end; ++i) {
          labels[i] = "I-" + span.entity_type;
        }
        break;
      }
    }
    previous = &span;
  }
  return labels;
}

inline std::vector<std::string> convert_scheme(std::span<const std::string> labels, Scheme from,
                                               Scheme to) {
  const std::vector<Span> spans = extract_spans(labels, from);
  return encode_spans(spans, labels.size(), to);
}

inline Corpus convert_corpus(const Corpus& corpus, Scheme to) {
  std::vector<Sentence> sentences;
  sentences.reserve(corpus.sentences().size());
  for (const Sentence& sentence : corpus.sentences()) {
    sentences.push_back(
        Sentence{sentence.tokens, convert_scheme(sentence.labels, corpus.scheme(), to)});
  }
  return Corpus(std::move(sentences), to);
}

// One entry per illegal transition. position is the index of the transition
// target: 0 for Go -> first, i for labels[i-1] -> labels[i], N for the
// last -> Eos boundary.
struct Violation {
  std::size_t position = 0;
  std::string from_label;
  std::string to_label;

  friend bool operator==(const Violation&, const Violation&) = default;
};

inline std::vector<Violation> validate_sequence(std::span<const std::string> labels,
                                                Scheme scheme) {
  std::vector<Violation> violations;
  if (labels.empty()) return violations;

  std::vector<Tag> tags;
  tags.reserve(labels.size());
  for (const std::string& label : labels) tags.push_back(parse_tag(label, scheme));

  if (!is_legal_transition(scheme, Tag::go(), tags.front())) {
    violations.push_back(Violation{0, to_label(Tag::go()), labels.front()});
  }
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (!is_legal_transition(scheme, tags[i - 1], tags[i])) {
      violations.push_back(Violation{i, labels[i - 1], labels[i]});
    }
  }
  if (!is_legal_transition(scheme, tags.back(), Tag::eos())) {
    violations.push_back(Violation{labels.size(), labels.back(), to_label(Tag::eos())});
  }
  return violations;
}

}  // namespace seqtag
