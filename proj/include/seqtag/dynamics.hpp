#pragma once

// Corpus tag-dynamics diagnostics: how ambiguous tokens are, how often the
// previous gold tag pins an ambiguous token down to one label, and how
// often entities start or end with an unambiguous surface form.

#include <cctype>
#include <cstddef>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "seqtag/conll.hpp"
#include "seqtag/tags.hpp"

namespace seqtag {

struct TagDynamicsReport {
  std::size_t tag_types = 0;            // distinct entity types, not labels
  double ambiguity_pct = 0.0;           // % of token occurrences with > 1 observed label
  double strictly_dominated_pct = 0.0;  // % of ambiguous occurrences pinned by the left context
  double easy_first_pct = 0.0;          // % of entities starting with an unambiguous form
  double easy_last_pct = 0.0;           // % of entities ending with an unambiguous form
  std::size_t token_occurrences = 0;
  std::size_t ambiguous_occurrences = 0;
  std::size_t entity_occurrences = 0;
};

namespace detail {

inline std::string fold(const std::string& token, bool fold_case) {
  if (!fold_case) return token;
  std::string out = token;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace detail

// Surface form -> set of labels it was observed with, case-sensitive unless
// fold_case is set.
inline std::map<std::string, std::set<std::string>> token_label_sets(const Corpus& corpus,
                                                                     bool fold_case = false) {
  std::map<std::string, std::set<std::string>> sets;
  for (const Sentence& sentence : corpus.sentences()) {
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      sets[detail::fold(sentence.tokens[i], fold_case)].insert(sentence.labels[i]);
    }
  }
  return sets;
}

// % of token occurrences whose surface form carries more than one label.
inline double ambiguity(const Corpus& corpus, bool fold_case = false) {
  if (corpus.sentences().empty()) {
    throw std::invalid_argument("cannot compute ambiguity of an empty corpus");
  }
  const auto sets = token_label_sets(corpus, fold_case);
  std::size_t total = 0;
  std::size_t ambiguous = 0;
  for (const Sentence& sentence : corpus.sentences()) {
    for (const std::string& token : sentence.tokens) {
      ++total;
      if (sets.at(detail::fold(token, fold_case)).size() > 1) ++ambiguous;
    }
  }
  return 100.0 * static_cast<double>(ambiguous) / static_cast<double>(total);
}

// Alternative ambiguity convention: % of distinct surface forms (rather
// than occurrences) observed with more than one label.
inline double ambiguity_unique_forms(const Corpus& corpus, bool fold_case = false) {
  if (corpus.sentences().empty()) {
    throw std::invalid_argument("cannot compute ambiguity of an empty corpus");
  }
  const auto sets = token_label_sets(corpus, fold_case);
  std::size_t ambiguous = 0;
  for (const auto& [form, labels] : sets) {
    if (labels.size() > 1) ++ambiguous;
  }
  return 100.0 * static_cast<double>(ambiguous) / static_cast<double>(sets.size());
}

// % of ambiguous token occurrences whose observed label set intersected with
// the legal successors of the previous gold tag has exactly one element.
// Position 0 uses Go's successors. 0 (with a warning) when nothing is ambiguous.
inline double strictly_dominated(const Corpus& corpus, Scheme scheme, bool fold_case = false) {
  const auto sets = token_label_sets(corpus, fold_case);
  std::size_t ambiguous = 0;
  std::size_t dominated = 0;
  for (const Sentence& sentence : corpus.sentences()) {
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      const auto& label_set = sets.at(detail::fold(sentence.tokens[i], fold_case));
      if (label_set.size() < 2) continue;
      ++ambiguous;
      const Tag previous = i == 0 ? Tag::go() : parse_tag(sentence.labels[i - 1], scheme);
      std::size_t legal = 0;
      for (const std::string& candidate : label_set) {
        if (is_legal_transition(scheme, previous, parse_tag(candidate, scheme))) ++legal;
      }
      if (legal == 1) ++dominated;
    }
  }
  if (ambiguous == 0) {
    std::cerr << "warning: corpus has no ambiguous tokens; strictly-dominated is undefined, "
                 "reporting 0\n";
    return 0.0;
  }
  return 100.0 * static_cast<double>(dominated) / static_cast<double>(ambiguous);
}

// (easy-first %, easy-last %) over entity span occurrences: a boundary is
// easy when its token's surface form has exactly one observed label.
inline std::pair<double, double> easy_boundaries(const Corpus& corpus, Scheme scheme,
                                                 bool fold_case = false) {
  const auto sets = token_label_sets(corpus, fold_case);
  std::size_t entities = 0;
  std::size_t easy_first = 0;
  std::size_t easy_last = 0;
  for (const Sentence& sentence : corpus.sentences()) {
    for (const Span& span : extract_spans(sentence.labels, scheme)) {
      ++entities;
      if (sets.at(detail::fold(sentence.tokens[span.start], fold_case)).size() == 1) ++easy_first;
      if (sets.at(detail::fold(sentence.tokens[span.end - 1], fold_case)).size() == 1) ++easy_last;
    }
  }
  if (entities == 0) {
    throw std::invalid_argument("corpus contains no entities");
  }
  return {100.0 * static_cast<double>(easy_first) / static_cast<double>(entities),
          100.0 * static_cast<double>(easy_last) / static_cast<double>(entities)};
}

// Full report under the requested scheme; the corpus is converted first if
// it is encoded differently, since every metric depends on the label space.
inline TagDynamicsReport analyze(const Corpus& corpus, Scheme scheme, bool fold_case = false) {
  if (corpus.scheme() != scheme) {
    return analyze(convert_corpus(corpus, scheme), scheme, fold_case);
  }
  TagDynamicsReport report;
  const auto sets = token_label_sets(corpus, fold_case);

  std::set<std::string> types;
  for (const std::string& label : corpus.vocab().labels()) {
    const Tag tag = parse_tag(label, scheme);
    if (!tag.entity_type.empty()) types.insert(tag.entity_type);
  }
  report.tag_types = types.size();

  report.token_occurrences = corpus.token_count();
  for (const Sentence& sentence : corpus.sentences()) {
    for (const std::string& token : sentence.tokens) {
      if (sets.at(detail::fold(token, fold_case)).size() > 1) ++report.ambiguous_occurrences;
    }
    report.entity_occurrences += extract_spans(sentence.labels, scheme).size();
  }

  report.ambiguity_pct = ambiguity(corpus, fold_case);
  report.strictly_dominated_pct = strictly_dominated(corpus, scheme, fold_case);
  const auto [first, last] = easy_boundaries(corpus, scheme, fold_case);
  report.easy_first_pct = first;
  report.easy_last_pct = last;
  return report;
}

}  // namespace seqtag
