// Command-line front end: tagging, application, noising, toy training,
// prediction, scoring and tagset coverage over line-oriented files.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gectag/gectag.hpp"

namespace fs = std::filesystem;
using namespace gectag;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;
constexpr std::size_t kChunk = 4096;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

// Reads one line, stripping a trailing CR. Returns false at end of input.
bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

struct Located {
  std::string text;
  std::size_t lineno;
};

// Feeds `in` to fn in chunks, processing each chunk on the worker pool and
// writing results in input order. Errors are reported as path:line.
template <typename Fn>
void stream_map(std::istream& in, const std::string& path, std::ostream& out, unsigned workers, Fn fn) {
  std::vector<Located> chunk;
  std::size_t lineno = 0;
  std::string line;
  auto flush = [&] {
    auto results = parallel_map(chunk, workers, [&](std::size_t, const Located& l) {
      try {
        return fn(l.text);
      } catch (const DataError& e) {
        throw DataError(path + ":" + std::to_string(l.lineno) + ": " + e.what());
      }
    });
    for (const auto& r : results) out << r << '\n';
    chunk.clear();
  };
  while (next_line(in, line)) {
    chunk.push_back({std::move(line), ++lineno});
    if (chunk.size() == kChunk) flush();
  }
  flush();
  if (!out) throw IoError("write failed");
}

std::pair<Sentence, Sentence> split_pair(const std::string& line) {
  const auto tab = line.find('\t');
  if (tab == std::string::npos) throw DataError("expected source<TAB>target");
  if (line.find('\t', tab + 1) != std::string::npos) throw DataError("more than one tab in pair line");
  auto src = tokenize(line.substr(0, tab));
  if (src.empty()) throw DataError("empty source sentence");
  return {std::move(src), tokenize(line.substr(tab + 1))};
}

std::vector<std::string> read_all_lines(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::string> lines;
  std::string line;
  while (next_line(in, line)) lines.push_back(line);
  return lines;
}

struct Common {
  unsigned workers = default_workers();
  std::string lexicon_dir = default_data_dir().string();

  const Lexicon& lexicon() {
    if (!lex_) lex_ = std::make_unique<Lexicon>(load_lexicon(lexicon_dir));
    return *lex_;
  }
  const PatternInventories& patterns() {
    if (!pat_) pat_ = std::make_unique<PatternInventories>(load_patterns(lexicon_dir));
    return *pat_;
  }
  TagSet tagset(const std::string& path) {
    return path.empty() ? load_tagset((fs::path(lexicon_dir) / "default_tagset.txt").string()) : load_tagset(path);
  }

 private:
  std::unique_ptr<Lexicon> lex_;
  std::unique_ptr<PatternInventories> pat_;
};

void add_lexicon_option(CLI::App* cmd, Common& c) {
  cmd->add_option("--lexicon", c.lexicon_dir, "Data directory with lexicon, patterns and MANIFEST")
      ->capture_default_str();
}

void add_workers_option(CLI::App* cmd, Common& c) {
  cmd->add_option("--workers", c.workers, "Worker threads (output order never depends on it)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

// ---------------------------------------------------------------------------

struct TagArgs {
  std::string pairs, tagset, out;
};

void run_tag(Common& c, const TagArgs& a) {
  const auto& lex = c.lexicon();
  const auto ts = c.tagset(a.tagset);
  auto in = open_in(a.pairs);
  auto out = open_out(a.out);
  stream_map(in, a.pairs, out, c.workers, [&](const std::string& line) {
    auto [src, tgt] = split_pair(line);
    const auto edits = seq2edit(src, tgt, lex, ts);
    return to_json(LabeledExample{src, derive_labels(src, edits)}).dump();
  });
}

struct ApplyArgs {
  std::string src, edits, out;
  bool strict = false;
};

void run_apply(Common& c, const ApplyArgs& a) {
  const auto& lex = c.lexicon();
  auto src_in = open_in(a.src);
  auto edit_in = open_in(a.edits);
  auto out = open_out(a.out);
  std::string s, e;
  std::size_t lineno = 0;
  while (true) {
    const bool more_src = next_line(src_in, s), more_edits = next_line(edit_in, e);
    if (!more_src && !more_edits) break;
    ++lineno;
    const auto where = a.edits + ":" + std::to_string(lineno);
    if (more_src != more_edits) throw DataError(where + ": source and edit files differ in length");
    try {
      const auto src = tokenize(s);
      const auto edits = parse_edit_sequence(e);
      if (a.strict) {
        out << join(edit2seq(src, edits, lex)) << '\n';
      } else {
        std::vector<std::string> warnings;
        out << join(edit2seq_lenient(src, edits, lex, &warnings)) << '\n';
        for (const auto& w : warnings) std::cerr << where << ": warning: " << w << '\n';
      }
    } catch (const DataError& err) {
      throw DataError(where + ": " + err.what());
    }
  }
}

struct NoiseArgs {
  std::string in, profile, out, stats;
  std::optional<std::uint64_t> seed;
};

void run_noise(Common& c, const NoiseArgs& a) {
  auto pin = open_in(a.profile);
  auto profile = parse_profile(pin, a.profile);
  if (a.seed) profile.rng_seed = *a.seed;
  EditDictionary dict;
  if (!profile.dictionary_path.empty()) {
    fs::path dpath = profile.dictionary_path;
    if (dpath.is_relative()) dpath = fs::path(a.profile).parent_path() / dpath;
    auto din = open_in(dpath.string());
    std::string line;
    std::size_t lineno = 0;
    while (next_line(din, line)) {
      ++lineno;
      try {
        auto [src, tgt] = split_pair(line);
        add_to_dictionary(dict, align(src, tgt));
      } catch (const DataError& e) {
        throw DataError(dpath.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }
  NoiseResources res{&c.lexicon(), &c.patterns(), dict.empty() ? nullptr : &dict};
  auto in = open_in(a.in);
  auto out = open_out(a.out);
  const auto stats = generate_corpus(in, out, profile, res, c.workers);
  if (!a.stats.empty()) {
    auto s = open_out(a.stats);
    s << stats.to_json().dump(2) << '\n';
  }
}

struct TrainArgs {
  std::string data, tagset, out, loss_curve;
  double lambda = 0.5;
  std::size_t heads = 7;
  std::uint64_t seed = 0;
  std::size_t epochs = 10;
  double learning_rate = 0.2;
  std::size_t batch_size = 16;
  std::uint32_t dim_bits = 14;
  bool full_tagset = false;
};

void run_train(Common& c, const TrainArgs& a) {
  std::vector<LabeledExample> examples;
  {
    auto in = open_in(a.data);
    std::string line;
    std::size_t lineno = 0;
    while (next_line(in, line)) {
      ++lineno;
      if (tokenize(line).empty()) continue;
      try {
        examples.push_back(labeled_example_from_json(nlohmann::json::parse(line)));
      } catch (const nlohmann::json::exception& e) {
        throw DataError(a.data + ":" + std::to_string(lineno) + ": " + e.what());
      } catch (const DataError& e) {
        throw DataError(a.data + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }
  if (examples.empty()) throw DataError(a.data + ": no training examples");
  auto tags = c.tagset(a.tagset);
  if (!a.full_tagset) tags = compact_tagset(tags, examples);
  MultiHeadModel model(FeatureEncoder(1u << a.dim_bits), std::move(tags), a.heads, a.lambda);
  const auto data = encode_dataset(model, examples);
  TrainOptions opt;
  opt.epochs = a.epochs;
  opt.learning_rate = a.learning_rate;
  opt.batch_size = a.batch_size;
  opt.seed = a.seed;
  const auto result = train(model, data, opt);
  save_model(model, a.out);
  if (!a.loss_curve.empty()) {
    auto os = open_out(a.loss_curve);
    os << nlohmann::json(result.loss_curve).dump() << '\n';
  }
}

struct PredictArgs {
  std::string model, in, out;
  int iters = 4;
  double keep_bias = 0.0;
  double min_error_prob = 0.0;
};

void run_predict(Common& c, const PredictArgs& a) {
  const auto model = load_model(a.model);
  const auto& lex = c.lexicon();
  InferenceTweaks tw{a.keep_bias, std::clamp(a.min_error_prob, 0.0, 1.0)};
  RefineOptions ro;
  ro.max_iters = a.iters;
  auto in = open_in(a.in);
  auto out = open_out(a.out);
  stream_map(in, a.in, out, c.workers, [&](const std::string& line) {
    const auto src = tokenize(line);
    if (src.empty()) return std::string();
    return join(predict_refine(model, src, lex, tw, ro).output);
  });
}

struct ScoreArgs {
  std::string src, hyp, ref, out;
  std::string metric = "both";
  std::uint64_t seed = 0;
};

void run_score(Common& c, const ScoreArgs& a) {
  const auto src_lines = read_all_lines(a.src), hyp_lines = read_all_lines(a.hyp), ref_lines = read_all_lines(a.ref);
  if (src_lines.size() != hyp_lines.size() || src_lines.size() != ref_lines.size())
    throw DataError(a.hyp + ": source, hypothesis and reference files differ in line count (" +
                    std::to_string(src_lines.size()) + ", " + std::to_string(hyp_lines.size()) + ", " +
                    std::to_string(ref_lines.size()) + ")");
  std::vector<Sentence> srcs, hyps;
  std::vector<std::vector<Sentence>> refs;
  for (std::size_t i = 0; i < src_lines.size(); ++i) {
    srcs.push_back(tokenize(src_lines[i]));
    if (srcs.back().empty()) throw DataError(a.src + ":" + std::to_string(i + 1) + ": empty source sentence");
    hyps.push_back(tokenize(hyp_lines[i]));
    std::vector<Sentence> r;
    for (const auto& part : split(ref_lines[i], '\t')) r.push_back(tokenize(part));
    refs.push_back(std::move(r));
  }
  nlohmann::ordered_json j;
  if (a.metric == "f05" || a.metric == "both") {
    const auto prf = f_half_corpus(srcs, hyps, refs);
    j["P"] = prf.precision;
    j["R"] = prf.recall;
    j["F0.5"] = prf.f05;
  }
  if (a.metric == "gleu" || a.metric == "both") {
    GleuOptions go;
    go.seed = a.seed;
    j["GLEU"] = srcs.empty() ? 0.0 : gleu(srcs, hyps, refs, go);
  }
  j["sentence_count"] = srcs.size();
  (void)c;
  if (a.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    auto os = open_out(a.out);
    os << j.dump(2) << '\n';
  }
}

struct CoverageArgs {
  std::string pairs, tagset, out;
};

void run_coverage(Common& c, const CoverageArgs& a) {
  const auto& lex = c.lexicon();
  const auto ts = c.tagset(a.tagset);
  auto in = open_in(a.pairs);
  std::vector<Located> chunk;
  std::map<std::string, std::size_t> families;
  std::size_t sentences = 0, tokens = 0, edited = 0, unknown = 0;
  auto flush = [&] {
    auto results = parallel_map(chunk, c.workers, [&](std::size_t, const Located& l) {
      try {
        auto [src, tgt] = split_pair(l.text);
        return seq2edit(src, tgt, lex, ts);
      } catch (const DataError& e) {
        throw DataError(a.pairs + ":" + std::to_string(l.lineno) + ": " + e.what());
      }
    });
    for (const auto& edits : results) {
      ++sentences;
      for (const auto& t : edits) {
        ++tokens;
        ++families[std::string(family_name(t.family()))];
        if (t.is_keep()) continue;
        ++edited;
        if (t.family() == TagFamily::kUnknown) ++unknown;
      }
    }
    chunk.clear();
  };
  std::string line;
  std::size_t lineno = 0;
  while (next_line(in, line)) {
    chunk.push_back({std::move(line), ++lineno});
    if (chunk.size() == kChunk) flush();
  }
  flush();
  nlohmann::ordered_json hist;
  for (auto f : kAllFamilies) hist[std::string(family_name(f))] = families[std::string(family_name(f))];
  nlohmann::ordered_json j;
  j["sentences"] = sentences;
  j["tokens"] = tokens;
  j["edited_tokens"] = edited;
  j["unknown_tokens"] = unknown;
  j["unknown_rate"] = edited ? static_cast<double>(unknown) / static_cast<double>(edited) : 0.0;
  j["families"] = hist;
  if (a.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    auto os = open_out(a.out);
    os << j.dump(2) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gectag: edit tagging toolkit for grammatical error correction"};
  app.require_subcommand(1);
  Common common;

  TagArgs tag;
  auto* tag_cmd = app.add_subcommand("tag", "Derive edit tags and label streams from source<TAB>target pairs");
  tag_cmd->add_option("--src-tgt", tag.pairs, "Parallel file, one source<TAB>target pair per line")->required();
  tag_cmd->add_option("--tagset", tag.tagset, "Tagset file (default: the bundled tagset)");
  tag_cmd->add_option("--out", tag.out, "Output JSON-lines file")->required();

  ApplyArgs apply;
  auto* apply_cmd = app.add_subcommand("apply", "Apply space-separated edit tags to source sentences");
  apply_cmd->add_option("--src", apply.src, "Source sentences, one per line")->required();
  apply_cmd->add_option("--edits", apply.edits, "Edit tags, one sequence per line")->required();
  apply_cmd->add_option("--out", apply.out, "Output sentences")->required();
  apply_cmd->add_flag("--strict", apply.strict, "Fail on tags that cannot be applied instead of keeping the token");

  NoiseArgs noise;
  auto* noise_cmd = app.add_subcommand("noise", "Corrupt clean sentences into synthetic error pairs");
  noise_cmd->add_option("--in", noise.in, "Clean sentences, one per line")->required();
  noise_cmd->add_option("--profile", noise.profile, "Noise profile (key=value lines)")->required();
  noise_cmd->add_option("--out", noise.out, "Output corrupted<TAB>clean pairs")->required();
  noise_cmd->add_option("--seed", noise.seed, "Override the profile seed");
  noise_cmd->add_option("--stats", noise.stats, "Write operation statistics as JSON");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train-toy", "Train the hashed-feature multi-head tagger");
  train_cmd->add_option("--data", tr.data, "Labelled JSON-lines file from `tag`")->required();
  train_cmd->add_option("--tagset", tr.tagset, "Tagset file (default: the bundled tagset)");
  train_cmd->add_option("--out", tr.out, "Output model file")->required();
  train_cmd->add_option("--lambda", tr.lambda, "Auxiliary loss weight")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--heads", tr.heads, "Number of heads")->capture_default_str()->check(CLI::IsMember({5, 7}));
  train_cmd->add_option("--seed", tr.seed, "Shuffle seed")->capture_default_str();
  train_cmd->add_option("--epochs", tr.epochs, "Training epochs")->capture_default_str();
  train_cmd->add_option("--lr", tr.learning_rate, "AdaGrad learning rate")->capture_default_str()->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--batch-size", tr.batch_size, "Sentences per update")->capture_default_str()->check(CLI::PositiveNumber);
  train_cmd->add_option("--dim-bits", tr.dim_bits, "log2 of the hashed feature dimension")->capture_default_str()->check(CLI::Range(1, 24));
  train_cmd->add_flag("--full-tagset", tr.full_tagset, "Keep every tag instead of only tags seen in the data");
  train_cmd->add_option("--loss-curve", tr.loss_curve, "Write the per-epoch loss curve as JSON");

  PredictArgs pr;
  auto* predict_cmd = app.add_subcommand("predict", "Correct sentences with a trained toy model");
  predict_cmd->add_option("--model", pr.model, "Model file from train-toy")->required();
  predict_cmd->add_option("--in", pr.in, "Input sentences, one per line")->required();
  predict_cmd->add_option("--out", pr.out, "Corrected sentences")->required();
  predict_cmd->add_option("--iters", pr.iters, "Maximum refinement passes")->capture_default_str()->check(CLI::Range(1, 100));
  predict_cmd->add_option("--keep-bias", pr.keep_bias, "Probability added to KEEP")->capture_default_str();
  predict_cmd->add_option("--min-error-prob", pr.min_error_prob, "Sentence-level detection threshold (clamped to [0,1])")
      ->capture_default_str();

  ScoreArgs sc;
  auto* score_cmd = app.add_subcommand("score", "Span F0.5 and GLEU against references");
  score_cmd->add_option("--src", sc.src, "Source sentences")->required();
  score_cmd->add_option("--hyp", sc.hyp, "System output")->required();
  score_cmd->add_option("--ref", sc.ref, "References; several per line are tab-separated")->required();
  score_cmd->add_option("--metric", sc.metric, "f05, gleu or both")->capture_default_str()->check(CLI::IsMember({"f05", "gleu", "both"}));
  score_cmd->add_option("--seed", sc.seed, "Seed for multi-reference GLEU sampling")->capture_default_str();
  score_cmd->add_option("--out", sc.out, "Write the JSON report here instead of stdout");

  CoverageArgs cov;
  auto* cov_cmd = app.add_subcommand("coverage", "UNKNOWN rate and tag-family histogram for a parallel file");
  cov_cmd->add_option("--src-tgt", cov.pairs, "Parallel file, one source<TAB>target pair per line")->required();
  cov_cmd->add_option("--tagset", cov.tagset, "Tagset file (default: the bundled tagset)");
  cov_cmd->add_option("--out", cov.out, "Write the JSON report here instead of stdout");

  for (auto* cmd : {tag_cmd, apply_cmd, noise_cmd, train_cmd, predict_cmd, score_cmd, cov_cmd}) {
    add_lexicon_option(cmd, common);
    add_workers_option(cmd, common);
  }

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
    if (*tag_cmd) run_tag(common, tag);
    if (*apply_cmd) run_apply(common, apply);
    if (*noise_cmd) run_noise(common, noise);
    if (*train_cmd) run_train(common, tr);
    if (*predict_cmd) run_predict(common, pr);
    if (*score_cmd) run_score(common, sc);
    if (*cov_cmd) run_coverage(common, cov);
  } catch (const Error& e) {
    std::cerr << "gectag: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "gectag: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
