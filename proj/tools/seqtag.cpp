// seqtag command line tool: decode lattices, convert and validate corpora,
// evaluate predictions, analyze tag dynamics, benchmark decoding, and check
// CRF gradients numerically.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqtag/seqtag.hpp"

namespace {

using namespace seqtag;
using nlohmann::json;

constexpr int kExitSuccess = 0;
constexpr int kExitFailure = 1;  // the subcommand's own pass/fail semantics
constexpr int kExitUsage = 2;    // bad flags, unreadable or malformed input

class InputFile {
 public:
  std::istream& open(const std::string& path) {
    if (path == "-") return std::cin;
    file_.open(path);
    if (!file_) throw std::runtime_error("cannot open '" + path + "' for reading");
    return file_;
  }

 private:
  std::ifstream file_;
};

class OutputFile {
 public:
  std::ostream& open(const std::string& path) {
    if (path == "-") return std::cout;
    file_.open(path);
    if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    return file_;
  }

 private:
  std::ofstream file_;
};

// ---------------------------------------------------------------------------
// decode

struct DecodeConfig {
  std::string input = "-";
  std::string output = "-";
  std::string mode = "constrained";
  std::string scheme = "iobes";
  std::string transitions_path;
  std::optional<double> illegal_score;
  unsigned threads = 1;
};

int run_decode(const DecodeConfig& config) {
  InputFile in;
  const LatticeFile file = read_lattice_file(in.open(config.input));
  OutputFile out_holder;
  std::ostream& out = out_holder.open(config.output);
  if (file.lattices.empty()) return kExitSuccess;

  Matrix transitions;
  bool greedy = false;
  if (config.mode == "greedy") {
    greedy = true;
  } else if (config.mode == "viterbi") {
    if (config.transitions_path.empty()) {
      throw std::runtime_error("decode --mode viterbi requires --transitions");
    }
    InputFile trans_in;
    TransitionsFile trans = read_transitions_file(trans_in.open(config.transitions_path));
    if (trans.labels != file.labels) {
      throw std::runtime_error("transitions file labels do not match the lattice file");
    }
    transitions = std::move(trans.transitions);
  } else if (config.mode == "constrained") {
    const Scheme scheme = parse_scheme(config.scheme);
    const TagVocabulary vocab(file.labels);
    const TransitionMask mask = build_transition_mask(scheme, vocab);
    transitions = mask_to_scores(mask, config.illegal_score.value_or(kNegInf));
  } else {
    throw std::runtime_error("unknown decode mode '" + config.mode +
                             "' (expected greedy, viterbi, or constrained)");
  }

  std::vector<std::vector<std::size_t>> paths(file.lattices.size());
  std::exception_ptr worker_error;
  std::mutex error_mutex;
  auto decode_range = [&](std::size_t begin, std::size_t end) {
    try {
      for (std::size_t s = begin; s < end; ++s) {
        paths[s] = greedy ? greedy_decode(file.lattices[s]).tag_indices
                          : viterbi(file.lattices[s], transitions).tag_indices;
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!worker_error) worker_error = std::current_exception();
    }
  };
  const unsigned threads = std::max(1u, config.threads);
  if (threads == 1 || file.lattices.size() < 2) {
    decode_range(0, file.lattices.size());
  } else {
    std::vector<std::thread> workers;
    const std::size_t chunk = (file.lattices.size() + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t begin = std::min<std::size_t>(w * chunk, file.lattices.size());
      const std::size_t end = std::min<std::size_t>(begin + chunk, file.lattices.size());
      if (begin < end) workers.emplace_back(decode_range, begin, end);
    }
    for (auto& worker : workers) worker.join();
  }
  if (worker_error) std::rethrow_exception(worker_error);

  // CoNLL-style two-column output: token index, predicted label
  for (std::size_t s = 0; s < paths.size(); ++s) {
    if (s > 0) out << '\n';
    for (std::size_t i = 0; i < paths[s].size(); ++i) {
      out << i << ' ' << file.labels[paths[s][i]] << '\n';
    }
  }
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// convert

struct ConvertConfig {
  std::string input = "-";
  std::string output = "-";
  std::string from;
  std::string to;
  std::size_t token_column = 0;
  std::optional<std::size_t> label_column;
};

int run_convert(const ConvertConfig& config) {
  InputFile in;
  ConllOptions options;
  options.token_column = config.token_column;
  options.label_column = config.label_column;
  const Corpus corpus = read_conll(in.open(config.input), parse_scheme(config.from), options);
  OutputFile out;
  write_conll(convert_corpus(corpus, parse_scheme(config.to)), out.open(config.output));
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateConfig {
  std::string input = "-";
  std::string scheme = "iobes";
  std::size_t token_column = 0;
  std::optional<std::size_t> label_column;
};

int run_validate(const ValidateConfig& config) {
  InputFile in;
  ConllOptions options;
  options.token_column = config.token_column;
  options.label_column = config.label_column;
  const Scheme scheme = parse_scheme(config.scheme);
  const Corpus corpus = read_conll(in.open(config.input), scheme, options);

  std::size_t total = 0;
  for (std::size_t s = 0; s < corpus.sentences().size(); ++s) {
    for (const Violation& violation : validate_sequence(corpus.sentences()[s].labels, scheme)) {
      std::cout << "sentence " << s << " position " << violation.position << ": "
                << violation.from_label << " -> " << violation.to_label << '\n';
      ++total;
    }
  }
  std::cerr << total << " violation(s) in " << corpus.sentences().size() << " sentence(s)\n";
  return total == 0 ? kExitSuccess : kExitFailure;
}

// ---------------------------------------------------------------------------
// eval

struct EvalConfig {
  std::string gold_path;
  std::string pred_path;
  std::string scheme = "iobes";
  std::string pred_scheme;  // defaults to --scheme
  std::size_t token_column = 0;
  std::optional<std::size_t> label_column;
  bool machine = false;
};

void print_eval_row(std::ostream& out, const std::string& name, const EvalCounts& counts) {
  out << std::left << std::setw(16) << name << std::right << std::fixed << std::setprecision(2)
      << std::setw(8) << 100.0 * counts.precision << std::setw(8) << 100.0 * counts.recall
      << std::setw(8) << 100.0 * counts.f1 << std::setw(8) << counts.true_positives
      << std::setw(6) << counts.false_positives << std::setw(6) << counts.false_negatives
      << '\n';
}

json eval_record(const std::string& name, const EvalCounts& counts) {
  json record;
  record["type"] = name;
  record["precision"] = 100.0 * counts.precision;
  record["recall"] = 100.0 * counts.recall;
  record["f1"] = 100.0 * counts.f1;
  record["tp"] = counts.true_positives;
  record["fp"] = counts.false_positives;
  record["fn"] = counts.false_negatives;
  return record;
}

int run_eval(const EvalConfig& config) {
  ConllOptions options;
  options.token_column = config.token_column;
  options.label_column = config.label_column;
  InputFile gold_in, pred_in;
  const Corpus gold =
      read_conll(gold_in.open(config.gold_path), parse_scheme(config.scheme), options);
  const Scheme pred_scheme =
      parse_scheme(config.pred_scheme.empty() ? config.scheme : config.pred_scheme);
  const Corpus pred = read_conll(pred_in.open(config.pred_path), pred_scheme, options);

  const EvalReport report = entity_f1(gold, pred);
  if (config.machine) {
    for (const auto& [type, counts] : report.per_type) {
      std::cout << eval_record(type, counts).dump() << '\n';
    }
    std::cout << eval_record("micro", report.micro).dump() << '\n';
  } else {
    std::cout << std::left << std::setw(16) << "type" << std::right << std::setw(8) << "prec"
              << std::setw(8) << "recall" << std::setw(8) << "f1" << std::setw(8) << "tp"
              << std::setw(6) << "fp" << std::setw(6) << "fn" << '\n';
    for (const auto& [type, counts] : report.per_type) {
      print_eval_row(std::cout, type, counts);
    }
    print_eval_row(std::cout, "micro", report.micro);
  }
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeConfig {
  std::vector<std::string> inputs;
  std::string scheme = "iobes";
  std::string from;  // scheme of the input files; defaults to --scheme
  std::size_t token_column = 0;
  std::optional<std::size_t> label_column;
  bool fold_case = false;
  bool unique_forms = false;
  bool machine = false;
};

int run_analyze(const AnalyzeConfig& config) {
  ConllOptions options;
  options.token_column = config.token_column;
  options.label_column = config.label_column;
  const Scheme file_scheme = parse_scheme(config.from.empty() ? config.scheme : config.from);
  std::vector<Sentence> sentences;
  for (const std::string& path : config.inputs) {
    InputFile in;
    const Corpus part = read_conll(in.open(path), file_scheme, options);
    sentences.insert(sentences.end(), part.sentences().begin(), part.sentences().end());
  }
  const Corpus corpus(std::move(sentences), file_scheme);
  const Scheme scheme = parse_scheme(config.scheme);
  TagDynamicsReport report = analyze(corpus, scheme, config.fold_case);
  if (config.unique_forms) {
    report.ambiguity_pct = ambiguity_unique_forms(
        corpus.scheme() == scheme ? corpus : convert_corpus(corpus, scheme), config.fold_case);
  }

  if (config.machine) {
    json record;
    record["scheme"] = std::string(scheme_name(scheme));
    record["tag_types"] = report.tag_types;
    record["ambiguity"] = report.ambiguity_pct;
    record["strictly_dominated"] = report.strictly_dominated_pct;
    record["easy_first"] = report.easy_first_pct;
    record["easy_last"] = report.easy_last_pct;
    record["tokens"] = report.token_occurrences;
    record["ambiguous_tokens"] = report.ambiguous_occurrences;
    record["entities"] = report.entity_occurrences;
    record["ambiguity_over"] = config.unique_forms ? "unique_forms" : "occurrences";
    std::cout << record.dump() << '\n';
  } else {
    std::cout << std::fixed << std::setprecision(1);
    std::cout << "scheme             " << scheme_name(scheme) << '\n'
              << "tag types          " << report.tag_types << '\n'
              << "ambiguity          " << report.ambiguity_pct << "%"
              << (config.unique_forms ? " (unique forms)" : "") << '\n'
              << "strictly dominated " << report.strictly_dominated_pct << "%\n"
              << "easy first         " << report.easy_first_pct << "%\n"
              << "easy last          " << report.easy_last_pct << "%\n"
              << "tokens             " << report.token_occurrences << '\n'
              << "ambiguous tokens   " << report.ambiguous_occurrences << '\n'
              << "entities           " << report.entity_occurrences << '\n';
  }
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// bench

struct BenchConfig {
  std::uint64_t seed = 42;
  std::size_t length = 40;
  std::size_t tags = 17;
  std::size_t types = 4;
  std::size_t sentences = 200;
  std::size_t reps = 5;
  std::vector<std::string> methods{"greedy", "viterbi", "constrained", "partition"};
  bool machine = false;
};

Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = dist(rng);
  }
  return m;
}

std::uint64_t fnv1a(std::uint64_t hash, std::uint64_t value) {
  hash ^= value;
  return hash * 1099511628211ull;
}

struct BenchResult {
  std::string method;
  std::size_t tags = 0;
  double median_seconds = 0.0;
  double tokens_per_second = 0.0;
  std::uint64_t checksum = 0;
};

template <typename Work>
BenchResult run_bench_method(const std::string& method, std::size_t tags, std::size_t tokens,
                             std::size_t reps, Work&& work) {
  std::vector<double> seconds;
  std::uint64_t checksum = 0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    checksum = 14695981039346656037ull;
    const auto start = std::chrono::steady_clock::now();
    work(checksum);
    const auto stop = std::chrono::steady_clock::now();
    seconds.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::sort(seconds.begin(), seconds.end());
  const double median = seconds[seconds.size() / 2];
  return BenchResult{method, tags, median,
                     median > 0.0 ? static_cast<double>(tokens) / median : 0.0, checksum};
}

int run_bench(const BenchConfig& config) {
  std::mt19937_64 rng(config.seed);
  std::vector<EmissionLattice> lattices;
  lattices.reserve(config.sentences);
  for (std::size_t s = 0; s < config.sentences; ++s) {
    lattices.emplace_back(random_matrix(rng, config.length, config.tags));
  }
  const Matrix transitions = random_matrix(rng, config.tags + 2, config.tags + 2);

  // constrained decoding needs a coherent IOBES vocabulary
  std::vector<std::string> labels{"O"};
  for (std::size_t k = 0; k < config.types; ++k) {
    const std::string type = "T" + std::to_string(k);
    for (const char* prefix : {"B-", "I-", "E-", "S-"}) labels.push_back(prefix + type);
  }
  const TagVocabulary vocab(labels);
  const TransitionMask mask = build_transition_mask(Scheme::IOBES, vocab);
  const Matrix mask_scores = mask_to_scores(mask, kNegInf);
  std::vector<EmissionLattice> constrained_lattices;
  constrained_lattices.reserve(config.sentences);
  for (std::size_t s = 0; s < config.sentences; ++s) {
    constrained_lattices.emplace_back(random_matrix(rng, config.length, vocab.size()));
  }

  const std::size_t tokens = config.sentences * config.length;
  std::vector<BenchResult> results;
  for (const std::string& method : config.methods) {
    if (method == "greedy") {
      results.push_back(run_bench_method(method, config.tags, tokens, config.reps,
                                         [&](std::uint64_t& checksum) {
                                           for (const auto& lattice : lattices) {
                                             for (std::size_t tag :
                                                  greedy_decode(lattice).tag_indices) {
                                               checksum = fnv1a(checksum, tag);
                                             }
                                           }
                                         }));
    } else if (method == "viterbi") {
      results.push_back(run_bench_method(method, config.tags, tokens, config.reps,
                                         [&](std::uint64_t& checksum) {
                                           for (const auto& lattice : lattices) {
                                             for (std::size_t tag :
                                                  viterbi(lattice, transitions).tag_indices) {
                                               checksum = fnv1a(checksum, tag);
                                             }
                                           }
                                         }));
    } else if (method == "constrained") {
      results.push_back(run_bench_method(
          method, vocab.size(), tokens, config.reps, [&](std::uint64_t& checksum) {
            for (const auto& lattice : constrained_lattices) {
              for (std::size_t tag : viterbi(lattice, mask_scores).tag_indices) {
                checksum = fnv1a(checksum, tag);
              }
            }
          }));
    } else if (method == "partition") {
      const CrfParams params{transitions};
      results.push_back(run_bench_method(method, config.tags, tokens, config.reps,
                                         [&](std::uint64_t& checksum) {
                                           for (const auto& lattice : lattices) {
                                             const double z = log_partition(lattice, params);
                                             std::uint64_t bits;
                                             std::memcpy(&bits, &z, sizeof(bits));
                                             checksum = fnv1a(checksum, bits);
                                           }
                                         }));
    } else {
      throw std::runtime_error("unknown bench method '" + method + "'");
    }
  }

  for (const BenchResult& result : results) {
    if (config.machine) {
      json record;
      record["method"] = result.method;
      record["tags"] = result.tags;
      record["length"] = config.length;
      record["sentences"] = config.sentences;
      record["median_seconds"] = result.median_seconds;
      record["tokens_per_second"] = result.tokens_per_second;
      record["checksum"] = result.checksum;
      std::cout << record.dump() << '\n';
    } else {
      std::cout << std::left << std::setw(12) << result.method << " T=" << std::setw(4)
                << result.tags << std::scientific << std::setprecision(3) << " median "
                << result.median_seconds << "s  " << std::fixed << std::setprecision(0)
                << result.tokens_per_second << " tokens/s  checksum " << std::hex
                << result.checksum << std::dec << '\n';
    }
  }
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// grad-check

struct GradCheckConfig {
  std::size_t instances = 100;
  std::uint64_t seed = 7;
  double tolerance = 1e-5;
  double step = 1e-5;
  std::size_t max_length = 4;
  std::size_t max_tags = 3;
  bool inject_sign_flip = false;  // negative-control hook for tests
  bool machine = false;
};

int run_grad_check(const GradCheckConfig& config) {
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  double worst = 0.0;
  const double flip = config.inject_sign_flip ? -1.0 : 1.0;

  for (std::size_t instance = 0; instance < config.instances; ++instance) {
    const std::size_t n = 1 + rng() % config.max_length;
    const std::size_t t = 2 + rng() % (config.max_tags - 1);
    Matrix emissions(n, t);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t tag = 0; tag < t; ++tag) emissions(i, tag) = dist(rng);
    }
    Matrix transitions(t + 2, t + 2);
    for (std::size_t f = 0; f < t + 2; ++f) {
      for (std::size_t to = 0; to < t + 2; ++to) transitions(f, to) = dist(rng);
    }
    std::vector<std::size_t> gold(n);
    for (auto& g : gold) g = rng() % t;

    const CrfGradients grads =
        crf_nll_gradients(EmissionLattice(emissions), CrfParams{transitions}, gold);

    auto relative_error = [](double a, double b) {
      return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t tag = 0; tag < t; ++tag) {
        Matrix up = emissions, down = emissions;
        up(i, tag) += config.step;
        down(i, tag) -= config.step;
        const double fd = (crf_nll(EmissionLattice(up), CrfParams{transitions}, gold) -
                           crf_nll(EmissionLattice(down), CrfParams{transitions}, gold)) /
                          (2.0 * config.step);
        worst = std::max(worst, relative_error(flip * grads.d_emissions(i, tag), fd));
      }
    }
    for (std::size_t f = 0; f < t + 2; ++f) {
      for (std::size_t to = 0; to < t + 2; ++to) {
        Matrix up = transitions, down = transitions;
        up(f, to) += config.step;
        down(f, to) -= config.step;
        const double fd = (crf_nll(EmissionLattice(emissions), CrfParams{up}, gold) -
                           crf_nll(EmissionLattice(emissions), CrfParams{down}, gold)) /
                          (2.0 * config.step);
        worst = std::max(worst, relative_error(flip * grads.d_transitions(f, to), fd));
      }
    }
  }

  const bool pass = worst <= config.tolerance;
  if (config.machine) {
    json record;
    record["instances"] = config.instances;
    record["max_relative_error"] = worst;
    record["tolerance"] = config.tolerance;
    record["pass"] = pass;
    std::cout << record.dump() << '\n';
  } else {
    std::cout << "instances " << config.instances << "  max relative error " << std::scientific
              << std::setprecision(3) << worst << "  tolerance " << config.tolerance << "  "
              << (pass ? "PASS" : "FAIL") << '\n';
  }
  return pass ? kExitSuccess : kExitFailure;
}

// ---------------------------------------------------------------------------
// loss

struct LossConfig {
  std::string lattice_path;
  std::string gold_path;
  std::string scheme = "iobes";
  std::size_t token_column = 0;
  std::optional<std::size_t> label_column;
  double illegal_score = kDefaultIllegalScore;
  bool apply_mask = true;
};

int run_loss(const LossConfig& config) {
  InputFile lattice_in;
  const LatticeFile file = read_lattice_file(lattice_in.open(config.lattice_path));
  ConllOptions options;
  options.token_column = config.token_column;
  options.label_column = config.label_column;
  const Scheme scheme = parse_scheme(config.scheme);
  InputFile gold_in;
  const Corpus gold = read_conll(gold_in.open(config.gold_path), scheme, options);

  if (gold.sentences().size() != file.lattices.size()) {
    throw std::runtime_error("lattice file has " + std::to_string(file.lattices.size()) +
                             " records but gold corpus has " +
                             std::to_string(gold.sentences().size()) + " sentences");
  }
  const TagVocabulary vocab(file.labels);
  Matrix transitions(vocab.size() + 2, vocab.size() + 2, 0.0);
  const CrfParams params =
      config.apply_mask
          ? CrfParams(std::move(transitions), build_transition_mask(scheme, vocab),
                      config.illegal_score)
          : CrfParams(std::move(transitions));

  double nll_total = 0.0;
  double ce_total = 0.0;
  for (std::size_t s = 0; s < file.lattices.size(); ++s) {
    const Sentence& sentence = gold.sentences()[s];
    if (sentence.tokens.size() != file.lattices[s].length()) {
      throw std::runtime_error("sentence " + std::to_string(s) + ": gold length " +
                               std::to_string(sentence.tokens.size()) +
                               " does not match lattice length " +
                               std::to_string(file.lattices[s].length()));
    }
    std::vector<std::size_t> gold_path;
    gold_path.reserve(sentence.labels.size());
    for (const std::string& label : sentence.labels) gold_path.push_back(vocab.index_of(label));

    const double log_z = log_partition(file.lattices[s], params);
    const double gold_score = score_path(file.lattices[s], params.transitions(), gold_path);
    const double ce = token_cross_entropy(file.lattices[s], gold_path);
    nll_total += log_z - gold_score;
    ce_total += ce;

    json record;
    record["sentence"] = s;
    record["log_partition"] = log_z;
    record["gold_score"] = gold_score;
    record["nll"] = log_z - gold_score;
    record["cross_entropy"] = ce;
    std::cout << record.dump() << '\n';
  }
  json summary;
  summary["sentences"] = file.lattices.size();
  summary["nll_total"] = nll_total;
  summary["cross_entropy_total"] = ce_total;
  std::cout << summary.dump() << '\n';
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequence labeling toolkit: transition masks, constrained Viterbi decoding, "
               "CRF losses, entity-level F1, and corpus tag dynamics"};
  app.require_subcommand(1);

  DecodeConfig decode_config;
  CLI::App* decode = app.add_subcommand("decode", "decode a lattice file to labels");
  decode->add_option("-i,--input", decode_config.input, "lattice file (JSONL), - for stdin");
  decode->add_option("-o,--output", decode_config.output, "output path, - for stdout");
  decode->add_option("-m,--mode", decode_config.mode, "greedy | viterbi | constrained")
      ->check(CLI::IsMember({"greedy", "viterbi", "constrained"}));
  decode->add_option("-s,--scheme", decode_config.scheme, "scheme for constrained mode");
  decode->add_option("--transitions", decode_config.transitions_path,
                     "transition matrix file for viterbi mode");
  decode->add_option("--illegal-score", decode_config.illegal_score,
                     "score for masked transitions in constrained mode (default -inf)");
  decode->add_option("-j,--threads", decode_config.threads, "worker threads")
      ->check(CLI::Range(1u, 256u));

  ConvertConfig convert_config;
  CLI::App* convert = app.add_subcommand("convert", "convert a corpus between schemes");
  convert->add_option("-i,--input", convert_config.input, "CoNLL file, - for stdin");
  convert->add_option("-o,--output", convert_config.output, "output path, - for stdout");
  convert->add_option("--from", convert_config.from, "scheme of the input file")->required();
  convert->add_option("--to", convert_config.to, "scheme to convert to")->required();
  convert->add_option("--token-column", convert_config.token_column, "token column index");
  convert->add_option("--label-column", convert_config.label_column,
                      "label column index (default: last)");

  ValidateConfig validate_config;
  CLI::App* validate = app.add_subcommand("validate", "report illegal transitions in a corpus");
  validate->add_option("-i,--input", validate_config.input, "CoNLL file, - for stdin");
  validate->add_option("-s,--scheme", validate_config.scheme, "scheme to validate against");
  validate->add_option("--token-column", validate_config.token_column, "token column index");
  validate->add_option("--label-column", validate_config.label_column,
                       "label column index (default: last)");

  EvalConfig eval_config;
  CLI::App* eval = app.add_subcommand("eval", "entity-level F1 of predictions against gold");
  eval->add_option("-g,--gold", eval_config.gold_path, "gold CoNLL file")->required();
  eval->add_option("-p,--pred", eval_config.pred_path, "predicted CoNLL file")->required();
  eval->add_option("-s,--scheme", eval_config.scheme, "scheme of both files");
  eval->add_option("--pred-scheme", eval_config.pred_scheme,
                   "scheme of the predicted file when it differs");
  eval->add_option("--token-column", eval_config.token_column, "token column index");
  eval->add_option("--label-column", eval_config.label_column,
                   "label column index (default: last)");
  eval->add_flag("--json", eval_config.machine, "line-delimited JSON records");

  AnalyzeConfig analyze_config;
  CLI::App* analyze = app.add_subcommand("analyze", "tag dynamics diagnostics of a corpus");
  analyze->add_option("inputs", analyze_config.inputs, "CoNLL file(s), merged in order")
      ->required()
      ->expected(-1);
  analyze->add_option("-s,--scheme", analyze_config.scheme, "scheme to compute metrics under");
  analyze->add_option("--from", analyze_config.from,
                      "scheme of the input files when it differs from --scheme");
  analyze->add_option("--token-column", analyze_config.token_column, "token column index");
  analyze->add_option("--label-column", analyze_config.label_column,
                      "label column index (default: last)");
  analyze->add_flag("--fold-case", analyze_config.fold_case, "case-fold surface forms");
  analyze->add_flag("--unique-forms", analyze_config.unique_forms,
                    "ambiguity over unique forms instead of occurrences");
  analyze->add_flag("--json", analyze_config.machine, "line-delimited JSON records");

  BenchConfig bench_config;
  CLI::App* bench = app.add_subcommand("bench", "time decoding methods on random lattices");
  bench->add_option("--seed", bench_config.seed, "random seed");
  bench->add_option("-n,--length", bench_config.length, "tokens per sentence")
      ->check(CLI::PositiveNumber);
  bench->add_option("-t,--tags", bench_config.tags, "tag count for unconstrained methods")
      ->check(CLI::PositiveNumber);
  bench->add_option("--types", bench_config.types, "entity types for constrained decoding")
      ->check(CLI::PositiveNumber);
  bench->add_option("--sentences", bench_config.sentences, "sentences per repetition")
      ->check(CLI::PositiveNumber);
  bench->add_option("--reps", bench_config.reps, "repetitions (median reported)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--methods", bench_config.methods,
                    "subset of greedy, viterbi, constrained, partition");
  bench->add_flag("--json", bench_config.machine, "line-delimited JSON records");

  GradCheckConfig grad_config;
  CLI::App* grad = app.add_subcommand("grad-check",
                                      "verify CRF gradients against finite differences");
  grad->add_option("--instances", grad_config.instances, "random instances")
      ->check(CLI::PositiveNumber);
  grad->add_option("--seed", grad_config.seed, "random seed");
  grad->add_option("--tolerance", grad_config.tolerance, "max relative error allowed");
  grad->add_option("--step", grad_config.step, "finite difference step")
      ->check(CLI::PositiveNumber);
  grad->add_option("--max-length", grad_config.max_length, "max sentence length")
      ->check(CLI::PositiveNumber);
  grad->add_option("--max-tags", grad_config.max_tags, "max tag count")
      ->check(CLI::Range(std::size_t{2}, std::size_t{16}));
  grad->add_flag("--inject-sign-flip", grad_config.inject_sign_flip,
                 "negate analytic gradients (negative control)");
  grad->add_flag("--json", grad_config.machine, "line-delimited JSON record");

  LossConfig loss_config;
  CLI::App* loss = app.add_subcommand("loss", "per-sentence CRF and cross-entropy diagnostics");
  loss->add_option("-l,--lattice", loss_config.lattice_path, "lattice file (JSONL)")->required();
  loss->add_option("-g,--gold", loss_config.gold_path, "gold CoNLL file")->required();
  loss->add_option("-s,--scheme", loss_config.scheme, "scheme of the gold file");
  loss->add_option("--token-column", loss_config.token_column, "token column index");
  loss->add_option("--label-column", loss_config.label_column,
                   "label column index (default: last)");
  loss->add_option("--illegal-score", loss_config.illegal_score,
                   "masked transition score for the constrained CRF");
  loss->add_flag("!--no-mask", loss_config.apply_mask, "score without the scheme mask");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*decode) return run_decode(decode_config);
    if (*convert) return run_convert(convert_config);
    if (*validate) return run_validate(validate_config);
    if (*eval) return run_eval(eval_config);
    if (*analyze) return run_analyze(analyze_config);
    if (*bench) return run_bench(bench_config);
    if (*grad) return run_grad_check(grad_config);
    if (*loss) return run_loss(loss_config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
