#pragma once

// File formats for the decode pipeline. Lattice files are line-delimited
// JSON: one record per sentence with "labels" (ordered, identical across
// the file) and "scores" (N x T, either nested rows or a flat row-major
// array). Transition files are a single JSON object with "labels" and a
// (T+2) x (T+2) "transitions" table whose last two rows/columns are the
// virtual start and end tags.

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqtag/core.hpp"
#include "seqtag/lattice.hpp"

namespace seqtag {

struct LatticeFile {
  std::vector<std::string> labels;
  std::vector<EmissionLattice> lattices;
};

namespace detail {

inline std::vector<std::string> parse_labels(const nlohmann::json& object,
                                             const std::string& where) {
  if (!object.contains("labels") || !object["labels"].is_array() || object["labels"].empty()) {
    throw ParseError(where + ": missing or empty \"labels\" array");
  }
  std::vector<std::string> labels;
  for (const auto& entry : object["labels"]) {
    if (!entry.is_string()) throw ParseError(where + ": \"labels\" entries must be strings");
    labels.push_back(entry.get<std::string>());
  }
  return labels;
}

inline Matrix parse_scores(const nlohmann::json& scores, std::size_t vocab_size,
                           const std::string& where) {
  if (!scores.is_array() || scores.empty()) {
    throw ParseError(where + ": \"scores\" must be a non-empty array");
  }
  std::vector<double> values;
  if (scores[0].is_array()) {
    for (const auto& row : scores) {
      if (!row.is_array() || row.size() != vocab_size) {
        throw ParseError(where + ": every score row must have " + std::to_string(vocab_size) +
                         " entries");
      }
      for (const auto& value : row) {
        if (!value.is_number()) throw ParseError(where + ": scores must be numbers");
        values.push_back(value.get<double>());
      }
    }
  } else {
    for (const auto& value : scores) {
      if (!value.is_number()) throw ParseError(where + ": scores must be numbers");
      values.push_back(value.get<double>());
    }
    if (values.size() % vocab_size != 0) {
      throw ParseError(where + ": flat score array length " + std::to_string(values.size()) +
                       " is not a multiple of " + std::to_string(vocab_size) + " labels");
    }
  }
  const std::size_t length = values.size() / vocab_size;
  Matrix matrix(length, vocab_size);
  for (std::size_t i = 0; i < length; ++i) {
    for (std::size_t t = 0; t < vocab_size; ++t) {
      matrix(i, t) = values[i * vocab_size + t];
    }
  }
  return matrix;
}

}  // namespace detail

inline LatticeFile read_lattice_file(std::istream& in) {
  LatticeFile out;
  std::string line;
  std::size_t record = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++record;
    const std::string where = "record " + std::to_string(record);
    nlohmann::json object;
    try {
      object = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
    std::vector<std::string> labels = detail::parse_labels(object, where);
    if (out.labels.empty()) {
      out.labels = std::move(labels);
    } else if (labels != out.labels) {
      throw ParseError(where + ": label list differs from the first record");
    }
    if (!object.contains("scores")) throw ParseError(where + ": missing \"scores\"");
    try {
      out.lattices.emplace_back(detail::parse_scores(object["scores"], out.labels.size(), where));
    } catch (const std::invalid_argument& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return out;
}

inline void write_lattice_record(std::ostream& out, const std::vector<std::string>& labels,
                                 const EmissionLattice& lattice) {
  nlohmann::json object;
  object["labels"] = labels;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < lattice.length(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t t = 0; t < lattice.vocab_size(); ++t) row.push_back(lattice.score(i, t));
    rows.push_back(std::move(row));
  }
  object["scores"] = std::move(rows);
  out << object.dump() << '\n';
}

struct TransitionsFile {
  std::vector<std::string> labels;
  Matrix transitions;  // (T+2) x (T+2), rows/cols ordered labels..., go, eos
};

inline TransitionsFile read_transitions_file(std::istream& in) {
  nlohmann::json object;
  try {
    object = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("transitions file: ") + e.what());
  }
  TransitionsFile out;
  out.labels = detail::parse_labels(object, "transitions file");
  const std::size_t dim = out.labels.size() + 2;
  if (!object.contains("transitions") || !object["transitions"].is_array() ||
      object["transitions"].size() != dim) {
    throw ParseError("transitions file: \"transitions\" must be a " + std::to_string(dim) + "x" +
                     std::to_string(dim) + " array");
  }
  out.transitions = Matrix(dim, dim);
  for (std::size_t from = 0; from < dim; ++from) {
    const auto& row = object["transitions"][from];
    if (!row.is_array() || row.size() != dim) {
      throw ParseError("transitions file: row " + std::to_string(from) + " must have " +
                       std::to_string(dim) + " entries");
    }
    for (std::size_t to = 0; to < dim; ++to) {
      if (!row[to].is_number()) {
        throw ParseError("transitions file: entries must be numbers");
      }
      out.transitions(from, to) = row[to].get<double>();
    }
  }
  return out;
}

inline void write_transitions_file(std::ostream& out, const std::vector<std::string>& labels,
                                   const Matrix& transitions) {
  nlohmann::json object;
  object["labels"] = labels;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t from = 0; from < transitions.rows(); ++from) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t to = 0; to < transitions.cols(); ++to) row.push_back(transitions(from, to));
    rows.push_back(std::move(row));
  }
  object["transitions"] = std::move(rows);
  out << object.dump() << '\n';
}

}  // namespace seqtag
