#pragma once

// Decoding over an emission lattice: greedy argmax, Viterbi, and constrained
// decoding (Viterbi with the scheme mask as the transition matrix).

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "seqtag/core.hpp"
#include "seqtag/tags.hpp"

namespace seqtag {

// N x T matrix of per-token unnormalized tag scores. All entries finite.
class EmissionLattice {
 public:
  explicit EmissionLattice(Matrix scores) : scores_(std::move(scores)) {
    if (scores_.rows() == 0 || scores_.cols() == 0) {
      throw std::invalid_argument("emission lattice must be at least 1x1");
    }
    if (!scores_.all_finite()) {
      throw std::invalid_argument("emission lattice contains non-finite scores");
    }
  }

  std::size_t length() const { return scores_.rows(); }
  std::size_t vocab_size() const { return scores_.cols(); }
  double score(std::size_t token, std::size_t tag) const { return scores_(token, tag); }
  const Matrix& scores() const { return scores_; }

 private:
  Matrix scores_;
};

struct DecodedPath {
  std::vector<std::size_t> tag_indices;
  double path_score = 0.0;
};

namespace detail {

inline void check_transition_shape(const EmissionLattice& lattice, const Matrix& transitions) {
  const std::size_t expected = lattice.vocab_size() + 2;
  if (transitions.rows() != expected || transitions.cols() != expected) {
    throw std::invalid_argument("transition matrix must be (T+2)x(T+2) for T=" +
                                std::to_string(lattice.vocab_size()));
  }
}

}  // namespace detail

// Sum of emissions plus transitions along a path, including the Go -> first
// and last -> Eos boundary terms. Accumulated left to right.
inline double score_path(const EmissionLattice& lattice, const Matrix& transitions,
                         std::span<const std::size_t> path) {
  detail::check_transition_shape(lattice, transitions);
  const std::size_t n = lattice.length();
  const std::size_t t = lattice.vocab_size();
  if (path.size() != n) {
    throw std::invalid_argument("path length " + std::to_string(path.size()) +
                                " does not match lattice length " + std::to_string(n));
  }
  for (std::size_t tag : path) {
    if (tag >= t) throw std::out_of_range("path tag index " + std::to_string(tag) + " out of range");
  }
  const std::size_t go = t;
  const std::size_t eos = t + 1;
  double score = transitions(go, path[0]) + lattice.score(0, path[0]);
  for (std::size_t i = 1; i < n; ++i) {
    score += transitions(path[i - 1], path[i]) + lattice.score(i, path[i]);
  }
  return score + transitions(path[n - 1], eos);
}

// Per-token argmax; ties go to the lowest tag index. The path score uses a
// zero transition matrix, so it is just the sum of the chosen emissions.
inline DecodedPath greedy_decode(const EmissionLattice& lattice) {
  DecodedPath out;
  out.tag_indices.reserve(lattice.length());
  for (std::size_t i = 0; i < lattice.length(); ++i) {
    std::size_t best = 0;
    for (std::size_t tag = 1; tag < lattice.vocab_size(); ++tag) {
      if (lattice.score(i, tag) > lattice.score(i, best)) best = tag;
    }
    out.tag_indices.push_back(best);
    out.path_score += lattice.score(i, best);
  }
  return out;
}

// Max-sum dynamic program over (T+2)x(T+2) transitions with Go/Eos boundary
// terms. Ties break toward the lowest tag index at every decision. Throws
// NoLegalPathError when every complete path scores -inf.
inline DecodedPath viterbi(const EmissionLattice& lattice, const Matrix& transitions) {
  detail::check_transition_shape(lattice, transitions);
  const std::size_t n = lattice.length();
  const std::size_t t = lattice.vocab_size();
  const std::size_t go = t;
  const std::size_t eos = t + 1;

  std::vector<double> score(t);
  std::vector<double> next(t);
  std::vector<std::size_t> backptr(n > 1 ? (n - 1) * t : 0);

  for (std::size_t tag = 0; tag < t; ++tag) {
    score[tag] = transitions(go, tag) + lattice.score(0, tag);
  }
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t tag = 0; tag < t; ++tag) {
      double best = kNegInf;
      std::size_t best_from = 0;
      for (std::size_t from = 0; from < t; ++from) {
        const double s = score[from] + transitions(from, tag);
        if (s > best) {
          best = s;
          best_from = from;
        }
      }
      next[tag] = best + lattice.score(i, tag);
      backptr[(i - 1) * t + tag] = best_from;
    }
    std::swap(score, next);
  }

  double best = kNegInf;
  std::size_t best_last = 0;
  for (std::size_t tag = 0; tag < t; ++tag) {
    const double s = score[tag] + transitions(tag, eos);
    if (s > best) {
      best = s;
      best_last = tag;
    }
  }
  if (!std::isfinite(best)) {
    throw NoLegalPathError("no legal path through the lattice");
  }

  DecodedPath out;
  out.tag_indices.assign(n, 0);
  out.tag_indices[n - 1] = best_last;
  for (std::size_t i = n - 1; i > 0; --i) {
    out.tag_indices[i - 1] = backptr[(i - 1) * t + out.tag_indices[i]];
  }
  // Re-score so the reported value is reproducible by score_path exactly.
  out.path_score = score_path(lattice, transitions, out.tag_indices);
  return out;
}

// Viterbi with the mask as the transition matrix; illegal transitions are
// excluded outright (-inf), so the output always validates under the scheme.
inline DecodedPath constrained_decode(const EmissionLattice& lattice, const TransitionMask& mask) {
  if (mask.num_real() != lattice.vocab_size()) {
    throw std::invalid_argument("mask size does not match lattice vocabulary");
  }
  return viterbi(lattice, mask_to_scores(mask, kNegInf));
}

}  // namespace seqtag
