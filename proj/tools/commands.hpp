#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cacheback/decode.hpp"

namespace cacheback::cli {

struct CliOptions {
  std::size_t ll = 1;
  std::size_t fl = 3;
  std::size_t lc = std::size_t{1} << 20;
  std::size_t fc = 128;
  std::size_t tdl = 96;
  std::size_t crt = 16;
  std::string tokenizer = "whitespace";
  std::string verifier = "kgram";
  std::size_t kgram_order = 2;
  std::string wiring = "dual";
  std::string table;  // CBFT path
  std::string prompts;
  std::string prompt_mode = "line";
  std::vector<std::string> corpus;
  std::string corpus_mode = "line";
  std::size_t max_new_tokens = 128;
  bool no_eos_stop = false;
  bool check_lossless = false;
  std::uint64_t seed = 42;
  double sample_fraction = 1.0;
  std::string out;
  std::string format;  // text | json | csv; empty = default
  std::vector<std::size_t> ll_values{1, 2, 3};
  std::vector<std::size_t> fl_values{1, 2, 3, 4, 5};

  // tokenize
  std::string text;
  std::string input;

  // gen-corpus
  std::size_t documents = 60;
  std::size_t doc_tokens = 400;

  DecodeConfig decode_config() const;
};

/// Parses "a..b" or "a,b,c" into a list of positive integers.
std::vector<std::size_t> parse_range(const std::string& text);

// Each command writes its human-readable output to `out` and diagnostics to
// `err`, and returns a process exit code (0 ok, 1 I/O, 2 usage).
int cmd_build_table(const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_bench(const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_sweep(const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_ablate(const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_tokenize(const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_gen_corpus(const CliOptions& o, std::ostream& out, std::ostream& err);

}  // namespace cacheback::cli
