#pragma once

// Span-encoding schemes (IOB1 / BIO / IOBES): label parsing, transition
// legality, and the constraint mask used as a drop-in transition matrix.

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqtag/core.hpp"

namespace seqtag {

enum class Prefix { O, B, I, E, S, Go, Eos };

enum class Scheme { IOB1, BIO, IOBES };

inline std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::IOB1: return "iob1";
    case Scheme::BIO: return "bio";
    case Scheme::IOBES: return "iobes";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view name) {
  if (name == "iob1" || name == "IOB1") return Scheme::IOB1;
  if (name == "bio" || name == "BIO" || name == "iob2" || name == "IOB2") return Scheme::BIO;
  if (name == "iobes" || name == "IOBES") return Scheme::IOBES;
  throw ParseError("unknown scheme '" + std::string(name) + "' (expected iob1, bio, or iobes)");
}

// A decomposed label: position prefix plus entity type. The type is empty
// exactly for O and the virtual boundary tags Go/Eos.
struct Tag {
  Prefix prefix = Prefix::O;
  std::string entity_type;

  static Tag outside() { return {Prefix::O, {}}; }
  static Tag go() { return {Prefix::Go, {}}; }
  static Tag eos() { return {Prefix::Eos, {}}; }

  friend bool operator==(const Tag&, const Tag&) = default;
};

inline std::string to_label(const Tag& tag) {
  switch (tag.prefix) {
    case Prefix::O: return "O";
    case Prefix::Go: return "<GO>";
    case Prefix::Eos: return "<EOS>";
    case Prefix::B: return "B-" + tag.entity_type;
    case Prefix::I: return "I-" + tag.entity_type;
    case Prefix::E: return "E-" + tag.entity_type;
    case Prefix::S: return "S-" + tag.entity_type;
  }
  return "?";
}

inline bool scheme_has_prefix(Scheme scheme, Prefix prefix) {
  switch (scheme) {
    case Scheme::IOB1:
    case Scheme::BIO:
      return prefix == Prefix::O || prefix == Prefix::B || prefix == Prefix::I;
    case Scheme::IOBES:
      return prefix != Prefix::Go && prefix != Prefix::Eos;
  }
  return false;
}

// Splits a surface label ("O", "B-LOC", "I-WORK_OF_ART", ...) on the first
// hyphen, so entity types may themselves contain hyphens.
inline Tag parse_tag(std::string_view label, Scheme scheme) {
  if (label.empty()) throw ParseError("empty label");
  if (label == "O") return Tag::outside();
  Prefix prefix;
  switch (label[0]) {
    case 'B': prefix = Prefix::B; break;
    case 'I': prefix = Prefix::I; break;
    case 'E': prefix = Prefix::E; break;
    case 'S': prefix = Prefix::S; break;
    default:
      throw ParseError("malformed label '" + std::string(label) + "'");
  }
  if (label.size() < 2 || label[1] != '-') {
    throw ParseError("malformed label '" + std::string(label) + "': expected PREFIX-TYPE");
  }
  if (!scheme_has_prefix(scheme, prefix)) {
    throw ParseError("label '" + std::string(label) + "' is not valid under the " +
                     std::string(scheme_name(scheme)) + " scheme");
  }
  std::string entity_type(label.substr(2));
  if (entity_type.empty()) {
    throw ParseError("label '" + std::string(label) + "' has an empty entity type");
  }
  return Tag{prefix, std::move(entity_type)};
}

// Transition legality between two tags, Go/Eos included. Nothing may enter
// Go or leave Eos, and a sentence may not be empty (Go -> Eos is illegal).
inline bool is_legal_transition(Scheme scheme, const Tag& from, const Tag& to) {
  if (to.prefix == Prefix::Go || from.prefix == Prefix::Eos) return false;
  if (from.prefix == Prefix::Go && to.prefix == Prefix::Eos) return false;
  switch (scheme) {
    case Scheme::IOBES:
      switch (from.prefix) {
        case Prefix::O:
        case Prefix::E:
        case Prefix::S:
        case Prefix::Go:
          // An entity may only start with B or S; I and E never follow here.
          return to.prefix == Prefix::O || to.prefix == Prefix::B ||
                 to.prefix == Prefix::S || to.prefix == Prefix::Eos;
        case Prefix::B:
        case Prefix::I:
          // Inside an entity: continue with I or close with E, same type.
          return (to.prefix == Prefix::I || to.prefix == Prefix::E) &&
                 to.entity_type == from.entity_type;
        case Prefix::Eos:
          return false;
      }
      return false;
    case Scheme::BIO:
      if (to.prefix == Prefix::Eos || to.prefix == Prefix::O || to.prefix == Prefix::B) return true;
      if (to.prefix == Prefix::I) {
        return (from.prefix == Prefix::B || from.prefix == Prefix::I) &&
               from.entity_type == to.entity_type;
      }
      return false;
    case Scheme::IOB1:
      if (to.prefix == Prefix::Eos || to.prefix == Prefix::O || to.prefix == Prefix::I) return true;
      if (to.prefix == Prefix::B) {
        // B only separates adjacent entities of the same type.
        return (from.prefix == Prefix::B || from.prefix == Prefix::I) &&
               from.entity_type == to.entity_type;
      }
      return false;
  }
  return false;
}

// Ordered label list with dense indices; the two virtual boundary tags sit
// after all real labels (go = T, eos = T + 1).
class TagVocabulary {
 public:
  TagVocabulary() = default;

  explicit TagVocabulary(std::vector<std::string> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i].empty()) throw ParseError("empty label in vocabulary");
      if (!index_.emplace(labels_[i], i).second) {
        throw ParseError("duplicate label '" + labels_[i] + "' in vocabulary");
      }
    }
  }

  std::size_t size() const { return labels_.size(); }
  std::size_t go_index() const { return labels_.size(); }
  std::size_t eos_index() const { return labels_.size() + 1; }

  const std::string& label(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const { return labels_; }

  bool contains(std::string_view label) const { return index_.find(label) != index_.end(); }

  std::size_t index_of(std::string_view label) const {
    auto it = index_.find(label);
    if (it == index_.end()) {
      throw std::out_of_range("label '" + std::string(label) + "' is not in the vocabulary");
    }
    return it->second;
  }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// (T+2) x (T+2) legality table over tag indices, boundaries included.
class TransitionMask {
 public:
  explicit TransitionMask(std::size_t num_real)
      : num_real_(num_real), allowed_((num_real + 2) * (num_real + 2), 0) {}

  std::size_t num_real() const { return num_real_; }
  std::size_t size() const { return num_real_ + 2; }
  std::size_t go_index() const { return num_real_; }
  std::size_t eos_index() const { return num_real_ + 1; }

  bool allowed(std::size_t from, std::size_t to) const {
    return allowed_[from * size() + to] != 0;
  }
  void set(std::size_t from, std::size_t to, bool value) {
    allowed_[from * size() + to] = value ? 1 : 0;
  }

  friend bool operator==(const TransitionMask&, const TransitionMask&) = default;

 private:
  std::size_t num_real_ = 0;
  std::vector<char> allowed_;
};

// Builds the scheme's legality mask over a vocabulary. Rejects vocabularies
// whose legal graph dead-ends: every real tag needs a real successor, Go
// needs a real successor, and some real tag must be able to close a sentence.
inline TransitionMask build_transition_mask(Scheme scheme, const TagVocabulary& vocab) {
  const std::size_t num_real = vocab.size();
  std::vector<Tag> tags;
  tags.reserve(num_real);
  for (const std::string& label : vocab.labels()) {
    tags.push_back(parse_tag(label, scheme));
  }

  TransitionMask mask(num_real);
  for (std::size_t from = 0; from < num_real; ++from) {
    for (std::size_t to = 0; to < num_real; ++to) {
      mask.set(from, to, is_legal_transition(scheme, tags[from], tags[to]));
    }
    mask.set(from, mask.eos_index(), is_legal_transition(scheme, tags[from], Tag::eos()));
  }
  for (std::size_t to = 0; to < num_real; ++to) {
    mask.set(mask.go_index(), to, is_legal_transition(scheme, Tag::go(), tags[to]));
  }

  for (std::size_t from = 0; from < num_real; ++from) {
    bool has_successor = false;
    for (std::size_t to = 0; to < num_real && !has_successor; ++to) {
      has_successor = mask.allowed(from, to);
    }
    if (!has_successor) {
      throw std::invalid_argument("vocabulary dead-ends at label '" + vocab.label(from) +
                                  "': no legal successor");
    }
  }
  bool go_ok = false;
  bool eos_ok = false;
  for (std::size_t i = 0; i < num_real; ++i) {
    go_ok = go_ok || mask.allowed(mask.go_index(), i);
    eos_ok = eos_ok || mask.allowed(i, mask.eos_index());
  }
  if (num_real > 0 && !go_ok) {
    throw std::invalid_argument("vocabulary dead-ends: no label may start a sentence");
  }
  if (num_real > 0 && !eos_ok) {
    throw std::invalid_argument("vocabulary dead-ends: no label may end a sentence");
  }
  return mask;
}

// Turns a legality mask into transition scores: allowed entries are 0,
// disallowed ones get illegal_score (a large negative value, or -inf when
// the matrix only ever feeds Viterbi).
inline Matrix mask_to_scores(const TransitionMask& mask, double illegal_score) {
  if (illegal_score >= 0.0 || std::isnan(illegal_score)) {
    throw std::invalid_argument("illegal_score must be negative (finite or -inf)");
  }
  Matrix scores(mask.size(), mask.size(), 0.0);
  for (std::size_t from = 0; from < mask.size(); ++from) {
    for (std::size_t to = 0; to < mask.size(); ++to) {
      if (!mask.allowed(from, to)) scores(from, to) = illegal_score;
    }
  }
  return scores;
}

}  // namespace seqtag
