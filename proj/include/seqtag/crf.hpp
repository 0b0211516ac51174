#pragma once

// Linear-chain CRF quantities: log-partition by the forward algorithm,
// negative log likelihood, forward-backward marginals, analytic NLL
// gradients, and the token-level cross-entropy loss.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "seqtag/core.hpp"
#include "seqtag/lattice.hpp"
#include "seqtag/tags.hpp"

namespace seqtag {

// Transition scores for the chain, (T+2)x(T+2) with Go/Eos rows/columns.
// An optional mask overrides masked entries with illegal_score up front,
// which is the "constrained CRF" configuration.
class CrfParams {
 public:
  explicit CrfParams(Matrix transitions) : transitions_(std::move(transitions)) {
    if (transitions_.rows() != transitions_.cols() || transitions_.rows() < 3) {
      throw std::invalid_argument("CRF transitions must be square (T+2)x(T+2) with T >= 1");
    }
  }

  CrfParams(Matrix transitions, const TransitionMask& mask,
            double illegal_score = kDefaultIllegalScore)
      : CrfParams(std::move(transitions)) {
    if (mask.size() != transitions_.rows()) {
      throw std::invalid_argument("mask size does not match transition matrix");
    }
    for (std::size_t from = 0; from < mask.size(); ++from) {
      for (std::size_t to = 0; to < mask.size(); ++to) {
        if (!mask.allowed(from, to)) transitions_(from, to) = illegal_score;
      }
    }
  }

  std::size_t num_real() const { return transitions_.rows() - 2; }
  std::size_t go_index() const { return num_real(); }
  std::size_t eos_index() const { return num_real() + 1; }
  const Matrix& transitions() const { return transitions_; }

 private:
  Matrix transitions_;
};

struct CrfGradients {
  Matrix d_emissions;    // N x T
  Matrix d_transitions;  // (T+2) x (T+2)
};

struct Marginals {
  Matrix unary;                  // N x T, unary(i, t) = P(y_i = t)
  std::vector<Matrix> pairwise;  // N-1 entries, pairwise[i](f, t) = P(y_i = f, y_{i+1} = t)
  double log_partition = 0.0;
};

namespace detail {

// alpha(i, t) = log sum of exp-scores of all prefixes ending in tag t at i,
// boundary term Go -> y_0 included. Left-to-right with per-step log-sum-exp.
inline Matrix forward_scores(const EmissionLattice& lattice, const CrfParams& params) {
  const std::size_t n = lattice.length();
  const std::size_t t = lattice.vocab_size();
  const Matrix& trans = params.transitions();
  Matrix alpha(n, t);
  for (std::size_t tag = 0; tag < t; ++tag) {
    alpha(0, tag) = trans(params.go_index(), tag) + lattice.score(0, tag);
  }
  std::vector<double> buffer(t);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t tag = 0; tag < t; ++tag) {
      for (std::size_t from = 0; from < t; ++from) {
        buffer[from] = alpha(i - 1, from) + trans(from, tag);
      }
      alpha(i, tag) = log_sum_exp(buffer) + lattice.score(i, tag);
    }
  }
  return alpha;
}

// beta(i, t) = log sum of exp-scores of all suffixes starting after (i, t),
// the y_{N-1} -> Eos term included. Emissions at i itself are excluded.
inline Matrix backward_scores(const EmissionLattice& lattice, const CrfParams& params) {
  const std::size_t n = lattice.length();
  const std::size_t t = lattice.vocab_size();
  const Matrix& trans = params.transitions();
  Matrix beta(n, t);
  for (std::size_t tag = 0; tag < t; ++tag) {
    beta(n - 1, tag) = trans(tag, params.eos_index());
  }
  std::vector<double> buffer(t);
  for (std::size_t i = n - 1; i > 0; --i) {
    for (std::size_t from = 0; from < t; ++from) {
      for (std::size_t to = 0; to < t; ++to) {
        buffer[to] = trans(from, to) + lattice.score(i, to) + beta(i, to);
      }
      beta(i - 1, from) = log_sum_exp(buffer);
    }
  }
  return beta;
}

inline void check_gold(const EmissionLattice& lattice, std::span<const std::size_t> gold) {
  if (gold.size() != lattice.length()) {
    throw std::invalid_argument("gold path length does not match lattice length");
  }
  for (std::size_t tag : gold) {
    if (tag >= lattice.vocab_size()) {
      throw std::out_of_range("gold tag index " + std::to_string(tag) + " out of range");
    }
  }
}

}  // namespace detail

// log of the summed exp-scores of all T^N sequences, boundary terms included.
inline double log_partition(const EmissionLattice& lattice, const CrfParams& params) {
  if (params.num_real() != lattice.vocab_size()) {
    throw std::invalid_argument("CRF parameters do not match lattice vocabulary");
  }
  const Matrix alpha = detail::forward_scores(lattice, params);
  const std::size_t n = lattice.length();
  const std::size_t t = lattice.vocab_size();
  std::vector<double> finals(t);
  for (std::size_t tag = 0; tag < t; ++tag) {
    finals[tag] = alpha(n - 1, tag) + params.transitions()(tag, params.eos_index());
  }
  return log_sum_exp(finals);
}

inline double crf_nll(const EmissionLattice& lattice, const CrfParams& params,
                      std::span<const std::size_t> gold) {
  detail::check_gold(lattice, gold);
  return log_partition(lattice, params) - score_path(lattice, params.transitions(), gold);
}

// Exact unary and pairwise posteriors under the chain distribution.
inline Marginals forward_backward(const EmissionLattice& lattice, const CrfParams& params) {
  if (params.num_real() != lattice.vocab_size()) {
    throw std::invalid_argument("CRF parameters do not match lattice vocabulary");
  }
  const std::size_t n = lattice.length();
  const std::size_t t = lattice.vocab_size();
  const Matrix& trans = params.transitions();
  const Matrix alpha = detail::forward_scores(lattice, params);
  const Matrix beta = detail::backward_scores(lattice, params);

  std::vector<double> finals(t);
  for (std::size_t tag = 0; tag < t; ++tag) {
    finals[tag] = alpha(n - 1, tag) + trans(tag, params.eos_index());
  }
  const double log_z = log_sum_exp(finals);

  Marginals out;
  out.log_partition = log_z;
  out.unary = Matrix(n, t);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t tag = 0; tag < t; ++tag) {
      out.unary(i, tag) = std::exp(alpha(i, tag) + beta(i, tag) - log_z);
    }
  }
  out.pairwise.reserve(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Matrix pair(t, t);
    for (std::size_t from = 0; from < t; ++from) {
      for (std::size_t to = 0; to < t; ++to) {
        pair(from, to) = std::exp(alpha(i, from) + trans(from, to) + lattice.score(i + 1, to) +
                                  beta(i + 1, to) - log_z);
      }
    }
    out.pairwise.push_back(std::move(pair));
  }
  return out;
}

// Gradient of the NLL: posterior expectations minus gold indicator counts,
// boundary transitions included. Masked entries report the gradient of the
// overridden score like any other entry; callers holding the mask fixed
// zero them out themselves.
inline CrfGradients crf_nll_gradients(const EmissionLattice& lattice, const CrfParams& params,
                                      std::span<const std::size_t> gold) {
  detail::check_gold(lattice, gold);
  const std::size_t n = lattice.length();
  const std::size_t t = lattice.vocab_size();
  const Marginals marginals = forward_backward(lattice, params);

  CrfGradients grads{Matrix(n, t), Matrix(t + 2, t + 2)};
  grads.d_emissions = marginals.unary;
  for (std::size_t i = 0; i < n; ++i) {
    grads.d_emissions(i, gold[i]) -= 1.0;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t from = 0; from < t; ++from) {
      for (std::size_t to = 0; to < t; ++to) {
        grads.d_transitions(from, to) += marginals.pairwise[i](from, to);
      }
    }
    grads.d_transitions(gold[i], gold[i + 1]) -= 1.0;
  }
  const std::size_t go = params.go_index();
  const std::size_t eos = params.eos_index();
  for (std::size_t tag = 0; tag < t; ++tag) {
    grads.d_transitions(go, tag) += marginals.unary(0, tag);
    grads.d_transitions(tag, eos) += marginals.unary(n - 1, tag);
  }
  grads.d_transitions(go, gold[0]) -= 1.0;
  grads.d_transitions(gold[n - 1], eos) -= 1.0;
  return grads;
}

// Sum over tokens of -log softmax(emissions[i])[gold_i]; no transition or
// boundary terms, each token independent.
inline double token_cross_entropy(const EmissionLattice& lattice,
                                  std::span<const std::size_t> gold) {
  detail::check_gold(lattice, gold);
  double total = 0.0;
  for (std::size_t i = 0; i < lattice.length(); ++i) {
    total += log_sum_exp(lattice.scores().row(i)) - lattice.score(i, gold[i]);
  }
  return total;
}

}  // namespace seqtag
