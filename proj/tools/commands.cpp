#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "cacheback/desk_corpus.hpp"
#include "cacheback/frozen_table.hpp"
#include "cacheback/harness.hpp"
#include "cacheback/report.hpp"
#include "cacheback/text.hpp"

namespace cacheback::cli {

namespace {

// Distinguishes I/O failures (exit 1) from usage errors (exit 2).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr TokenId kByteEos = 256;
constexpr const char* kWordEos = "</s>";

CorpusMode parse_corpus_mode(const std::string& m) {
  if (m == "line") return CorpusMode::kLine;
  if (m == "file") return CorpusMode::kFile;
  throw UsageError("unknown document mode '" + m + "' (want line|file)");
}

std::vector<std::string> read_docs(const std::vector<std::string>& paths, const std::string& mode) {
  const CorpusMode cm = parse_corpus_mode(mode);
  try {
    return read_documents(paths, cm);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

std::string vocab_path_for(const std::string& path) { return path + ".vocab"; }

struct VerifierChoice {
  bool replay = false;
  std::size_t kgram_order = 0;
};

VerifierChoice parse_verifier(const CliOptions& o) {
  if (o.verifier == "replay") return {true, 0};
  if (o.verifier == "kgram") return {false, o.kgram_order};
  if (o.verifier.rfind("kgram:", 0) == 0) {
    std::size_t k = 0;
    try {
      k = std::stoul(o.verifier.substr(6));
    } catch (const std::exception&) {
      throw UsageError("bad verifier '" + o.verifier + "'");
    }
    return {false, k};
  }
  throw UsageError("unknown verifier '" + o.verifier + "' (want replay|kgram|kgram:K)");
}

// Everything a bench-style command needs, tokenized against one vocabulary.
struct Workspace {
  TokenizerMode mode;
  Vocabulary vocab;
  TokenId eos = kByteEos;
  std::vector<TokenSeq> corpus;
  std::vector<std::size_t> sampled;  // indices into corpus
  std::vector<BenchTask> tasks;
  std::shared_ptr<const FrozenTable> loaded;
  nlohmann::json meta;
};

Workspace load_workspace(const CliOptions& o) {
  Workspace ws{parse_tokenizer_mode(o.tokenizer), {}, kByteEos, {}, {}, {}, {}, {}};
  if (!o.table.empty()) {
    try {
      ws.loaded = std::make_shared<FrozenTable>(load_frozen_file(o.table));
    } catch (const FormatError&) {
      throw;
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
    if (ws.mode == TokenizerMode::kWhitespace && std::filesystem::exists(vocab_path_for(o.table))) {
      ws.vocab = Vocabulary::load(vocab_path_for(o.table));
    }
  }
  if (ws.mode == TokenizerMode::kWhitespace) ws.eos = ws.vocab.intern(kWordEos);

  for (const auto& d : read_docs(o.corpus, o.corpus_mode)) ws.corpus.push_back(tokenize(d, ws.mode, ws.vocab));
  ws.sampled = sample_indices(ws.corpus.size(), o.sample_fraction, o.seed);

  if (o.prompts.empty()) throw UsageError("--prompts is required");
  std::vector<TokenSeq> prompts;
  for (const auto& d : read_docs({o.prompts}, o.prompt_mode)) prompts.push_back(tokenize(d, ws.mode, ws.vocab));
  if (prompts.empty()) throw UsageError("no prompts in " + o.prompts);

  const VerifierChoice v = parse_verifier(o);
  if (v.replay) {
    ws.tasks = make_replay_tasks(prompts, ws.eos);
  } else {
    if (ws.corpus.empty()) throw UsageError("kgram verifier needs --corpus");
    auto model = std::make_shared<KGramVerifier>(v.kgram_order, ws.corpus);
    ws.tasks = make_shared_verifier_tasks(prompts, std::move(model));
  }

  ws.meta = {{"tokenizer", o.tokenizer},
             {"verifier", v.replay ? std::string("replay") : "kgram:" + std::to_string(v.kgram_order)},
             {"seed", o.seed},
             {"sample_fraction", o.sample_fraction},
             {"table", o.table},
             {"prompts", o.prompts},
             {"corpus", o.corpus}};
  return ws;
}

// Frozen table for a given shape: the loaded file if it matches, else one
// built from the sampled corpus, else none.
FrozenProvider frozen_provider(const Workspace& ws) {
  return [&ws](const CacheTableConfig& cfg) -> std::shared_ptr<const FrozenTable> {
    if (ws.loaded) {
      if (ws.loaded->config().ll != cfg.ll || ws.loaded->config().fl != cfg.fl) {
        throw UsageError("--table has LL/FL " + std::to_string(ws.loaded->config().ll) + "/" +
                         std::to_string(ws.loaded->config().fl) + ", run wants " +
                         std::to_string(cfg.ll) + "/" + std::to_string(cfg.fl));
      }
      return ws.loaded;
    }
    if (ws.corpus.empty()) return nullptr;
    std::vector<TokenSeq> docs;
    for (std::size_t i : ws.sampled) docs.push_back(ws.corpus[i]);
    return std::make_shared<FrozenTable>(build_frozen(count_ngrams(docs, cfg), cfg));
  };
}

BenchOptions bench_options(const CliOptions& o) {
  BenchOptions b;
  b.decode = o.decode_config();
  b.max_new_tokens = o.max_new_tokens;
  b.stop_at_eos = !o.no_eos_stop;
  b.check_lossless = o.check_lossless;
  if (b.max_new_tokens == 0) throw UsageError("--max-new-tokens must be >= 1");
  return b;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << body)) throw IoError("cannot write " + path);
}

// Human text goes to stdout; --out receives --format (default json). Without
// --out, a non-text --format replaces the stdout text.
void emit(const CliOptions& o, std::ostream& out, const std::string& text, const std::string& json,
          const std::string& csv) {
  const std::string fmt = o.format.empty() ? (o.out.empty() ? "text" : "json") : o.format;
  const std::string* body = nullptr;
  if (fmt == "text") body = &text;
  else if (fmt == "json") body = &json;
  else if (fmt == "csv") body = &csv;
  else throw UsageError("unknown --format '" + fmt + "' (want text|json|csv)");
  if (o.out.empty()) {
    out << *body;
    return;
  }
  out << text;
  write_file(o.out, *body);
}

void save_vocab_beside(const Workspace& ws, const CliOptions& o) {
  if (!o.out.empty() && ws.mode == TokenizerMode::kWhitespace) ws.vocab.save(vocab_path_for(o.out));
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

DecodeConfig CliOptions::decode_config() const {
  DecodeConfig c;
  c.table = {ll, fl, lc, fc};
  c.draft = {tdl, crt};
  c.wiring = parse_wiring(wiring);
  c.validate();
  return c;
}

std::vector<std::size_t> parse_range(const std::string& text) {
  std::vector<std::size_t> out;
  auto number = [&](const std::string& s) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || s.empty() || v == 0) throw UsageError("bad range '" + text + "'");
    return static_cast<std::size_t>(v);
  };
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const std::size_t lo = number(text.substr(0, dots));
    const std::size_t hi = number(text.substr(dots + 2));
    if (lo > hi) throw UsageError("bad range '" + text + "'");
    for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number(item));
  if (out.empty()) throw UsageError("empty range");
  return out;
}

int cmd_build_table(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.corpus.empty()) throw UsageError("--corpus is required");
    if (o.out.empty()) throw UsageError("--out is required");
    const CacheTableConfig cfg{o.ll, o.fl, o.lc, o.fc};
    cfg.validate();
    const TokenizerMode mode = parse_tokenizer_mode(o.tokenizer);
    Vocabulary vocab;
    std::vector<TokenSeq> docs;
    for (const auto& d : read_docs(o.corpus, o.corpus_mode)) docs.push_back(tokenize(d, mode, vocab));
    std::vector<TokenSeq> sampled;
    for (std::size_t i : sample_indices(docs.size(), o.sample_fraction, o.seed)) sampled.push_back(docs[i]);
    if (sampled.empty()) err << "warning: no documents left after sampling; table is empty\n";

    const FrozenTable table = build_frozen(count_ngrams(sampled, cfg), cfg);
    try {
      save_frozen_file(table, o.out);
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
    if (mode == TokenizerMode::kWhitespace) vocab.save(vocab_path_for(o.out));
    out << "wrote " << o.out << ": " << table.leader_count() << " leaders from " << sampled.size()
        << "/" << docs.size() << " documents (ll=" << cfg.ll << " fl=" << cfg.fl << " lc=" << cfg.lc
        << " fc=" << cfg.fc << ")\n";
    return 0;
  });
}

int cmd_bench(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const BenchOptions opts = bench_options(o);
    const Workspace ws = load_workspace(o);
    auto frozen = opts.decode.wiring == TableWiring::kDynamicOnly ? nullptr : frozen_provider(ws)(opts.decode.table);
    if (opts.decode.wiring == TableWiring::kFrozenOnly && !frozen) {
      throw UsageError("frozen-only wiring needs --table or --corpus");
    }
    const BenchReport r = run_bench(ws.tasks, frozen, opts);
    emit(o, out, bench_text(r), bench_jsonl(r, ws.meta), bench_csv(r));
    save_vocab_beside(ws, o);
    return r.all_lossless() ? 0 : 1;
  });
}

int cmd_sweep(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const BenchOptions opts = bench_options(o);
    const Workspace ws = load_workspace(o);
    const FrozenProvider provider = opts.decode.wiring == TableWiring::kDynamicOnly
                                        ? FrozenProvider{}
                                        : frozen_provider(ws);
    const SweepResult s = run_sweep(ws.tasks, provider, opts, o.ll_values, o.fl_values);
    emit(o, out, sweep_text(s), sweep_jsonl(s, ws.meta), sweep_csv(s));
    save_vocab_beside(ws, o);
    return 0;
  });
}

int cmd_ablate(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const BenchOptions opts = bench_options(o);
    const Workspace ws = load_workspace(o);
    auto frozen = frozen_provider(ws)(opts.decode.table);
    if (!frozen) throw UsageError("ablate needs a frozen table: pass --table or --corpus");
    const AblationResult a = run_ablation(ws.tasks, frozen, opts);
    emit(o, out, ablation_text(a), ablation_jsonl(a, ws.meta), ablation_csv(a));
    save_vocab_beside(ws, o);
    return 0;
  });
}

int cmd_tokenize(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TokenizerMode mode = parse_tokenizer_mode(o.tokenizer);
    std::string text = o.text;
    if (!o.input.empty()) {
      std::ifstream in(o.input, std::ios::binary);
      if (!in) throw IoError("cannot open " + o.input);
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    Vocabulary vocab;
    const TokenSeq ids = tokenize(text, mode, vocab);
    for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? " " : "") << ids[i];
    out << '\n';
    if (!o.out.empty() && mode == TokenizerMode::kWhitespace) vocab.save(o.out);
    return 0;
  });
}

int cmd_gen_corpus(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.out.empty()) throw UsageError("--out is required");
    DeskCorpusOptions d;
    d.documents = o.documents;
    d.doc_tokens = o.doc_tokens;
    d.seed = o.seed;
    std::string body;
    for (const auto& doc : generate_desk_corpus(d)) body += doc + '\n';
    write_file(o.out, body);
    out << "wrote " << d.documents << " documents to " << o.out << '\n';
    return 0;
  });
}

}  // namespace cacheback::cli
