#pragma once

// Entity-level precision/recall/F1 over exact (type, start, end) matches.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "seqtag/conll.hpp"

namespace seqtag {

struct EvalCounts {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double precision = 0.0;  // in [0, 1]; 0 when the denominator is 0
  double recall = 0.0;
  double f1 = 0.0;

  void finalize() {
    const std::size_t p_denom = true_positives + false_positives;
    const std::size_t r_denom = true_positives + false_negatives;
    precision = p_denom == 0 ? 0.0 : static_cast<double>(true_positives) / p_denom;
    recall = r_denom == 0 ? 0.0 : static_cast<double>(true_positives) / r_denom;
    f1 = (precision + recall) == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
  }
};

struct EvalReport {
  EvalCounts micro;
  std::map<std::string, EvalCounts> per_type;
};

// Exact span matching per sentence. Both corpora go through extract_spans,
// so illegal predicted sequences are repaired rather than rejected.
inline EvalReport entity_f1(const Corpus& gold, const Corpus& pred) {
  if (gold.sentences().size() != pred.sentences().size()) {
    throw std::invalid_argument("sentence count mismatch: gold has " +
                                std::to_string(gold.sentences().size()) + ", pred has " +
                                std::to_string(pred.sentences().size()));
  }
  EvalReport report;
  for (std::size_t s = 0; s < gold.sentences().size(); ++s) {
    const Sentence& gold_sentence = gold.sentences()[s];
    const Sentence& pred_sentence = pred.sentences()[s];
    if (gold_sentence.tokens.size() != pred_sentence.tokens.size()) {
      throw std::invalid_argument(
          "sentence " + std::to_string(s) + ": length mismatch (gold " +
          std::to_string(gold_sentence.tokens.size()) + ", pred " +
          std::to_string(pred_sentence.tokens.size()) + ")");
    }
    const std::vector<Span> gold_spans = extract_spans(gold_sentence.labels, gold.scheme());
    const std::vector<Span> pred_spans = extract_spans(pred_sentence.labels, pred.scheme());
    const std::set<Span> gold_set(gold_spans.begin(), gold_spans.end());
    const std::set<Span> pred_set(pred_spans.begin(), pred_spans.end());

    for (const Span& span : pred_spans) {
      if (gold_set.contains(span)) {
        ++report.per_type[span.entity_type].true_positives;
      } else {
        ++report.per_type[span.entity_type].false_positives;
      }
    }
    for (const Span& span : gold_spans) {
      if (!pred_set.contains(span)) {
        ++report.per_type[span.entity_type].false_negatives;
      }
    }
  }

  for (auto& [type, counts] : report.per_type) {
    counts.finalize();
    report.micro.true_positives += counts.true_positives;
    report.micro.false_positives += counts.false_positives;
    report.micro.false_negatives += counts.false_negatives;
  }
  report.micro.finalize();
  return report;
}

}  // namespace seqtag
