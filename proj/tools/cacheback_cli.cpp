#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

using cacheback::cli::CliOptions;

namespace {

void table_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--ll", o.ll, "leader length")->capture_default_str();
  cmd->add_option("--fl", o.fl, "follower length")->capture_default_str();
  cmd->add_option("--lc", o.lc, "leader capacity")->capture_default_str();
  cmd->add_option("--fc", o.fc, "follower capacity per leader")->capture_default_str();
  cmd->add_option("--tokenizer", o.tokenizer, "whitespace | byte")->capture_default_str();
  cmd->add_option("--corpus", o.corpus, "corpus text files");
  cmd->add_option("--corpus-mode", o.corpus_mode, "line: one document per line; file: one per file")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "corpus sampling seed")->capture_default_str();
  cmd->add_option("--sample-fraction", o.sample_fraction, "fraction of documents in the frozen table")
      ->capture_default_str();
  cmd->add_option("--out", o.out, "output path");
}

void run_flags(CLI::App* cmd, CliOptions& o) {
  table_flags(cmd, o);
  cmd->add_option("--tdl", o.tdl, "total draft length")->capture_default_str();
  cmd->add_option("--crt", o.crt, "chaining-reserved tokens")->capture_default_str();
  cmd->add_option("--verifier", o.verifier, "replay | kgram | kgram:K")->capture_default_str();
  cmd->add_option("--kgram-order", o.kgram_order, "context length for --verifier kgram")
      ->capture_default_str();
  cmd->add_option("--table", o.table, "frozen table (.cbft)");
  cmd->add_option("--prompts", o.prompts, "prompt file")->required();
  cmd->add_option("--prompt-mode", o.prompt_mode, "line | file")->capture_default_str();
  cmd->add_option("--max-new-tokens", o.max_new_tokens)->capture_default_str();
  cmd->add_flag("--no-eos-stop", o.no_eos_stop, "keep decoding past EOS");
  cmd->add_flag("--check-lossless", o.check_lossless, "compare each task against plain greedy decoding");
  cmd->add_option("--format", o.format, "text | json | csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cacheback speculative decoding: LRU n-gram draft tables and benchmarks"};
  app.require_subcommand(1);
  CliOptions o;

  auto* build = app.add_subcommand("build-table", "build a frozen table (.cbft) from a corpus");
  table_flags(build, o);

  auto* bench = app.add_subcommand("bench", "decode each prompt and report acceptance metrics");
  run_flags(bench, o);
  bench->add_option("--wiring", o.wiring, "dual | dynamic-only | frozen-only")->capture_default_str();

  std::string ll_range = "1..3";
  std::string fl_range = "1..5";
  auto* sweep = app.add_subcommand("sweep", "MAT over a grid of leader and follower lengths");
  run_flags(sweep, o);
  sweep->add_option("--wiring", o.wiring)->capture_default_str();
  sweep->add_option("--ll-range", ll_range, "e.g. 1..3 or 1,2,4")->capture_default_str();
  sweep->add_option("--fl-range", fl_range)->capture_default_str();

  auto* ablate = app.add_subcommand("ablate", "dual vs dynamic-only vs frozen-only tables");
  run_flags(ablate, o);

  auto* tok = app.add_subcommand("tokenize", "print token ids");
  tok->add_option("--tokenizer", o.tokenizer)->capture_default_str();
  tok->add_option("--text", o.text, "text to tokenize");
  tok->add_option("--input", o.input, "file to tokenize");
  tok->add_option("--out", o.out, "write the whitespace vocabulary here");

  auto* gen = app.add_subcommand("gen-corpus", "write the synthetic desk corpus, one document per line");
  gen->add_option("--documents", o.documents)->capture_default_str();
  gen->add_option("--doc-tokens", o.doc_tokens)->capture_default_str();
  gen->add_option("--seed", o.seed)->capture_default_str();
  gen->add_option("--out", o.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*build) return cacheback::cli::cmd_build_table(o, std::cout, std::cerr);
  if (*bench) return cacheback::cli::cmd_bench(o, std::cout, std::cerr);
  if (*sweep) {
    try {
      o.ll_values = cacheback::cli::parse_range(ll_range);
      o.fl_values = cacheback::cli::parse_range(fl_range);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
    return cacheback::cli::cmd_sweep(o, std::cout, std::cerr);
  }
  if (*ablate) return cacheback::cli::cmd_ablate(o, std::cout, std::cerr);
  if (*tok) return cacheback::cli::cmd_tokenize(o, std::cout, std::cerr);
  if (*gen) return cacheback::cli::cmd_gen_corpus(o, std::cout, std::cerr);
  return 2;
}
