// teco — transcription-error corpus toolkit.
//
// Single binary with subcommands covering the full pipeline: corpus
// normalization, error-model extraction, synthetic corruption, BPE training
// and encoding, char n-gram LM training, corrector construction and
// application, and the evaluation harness (eval/sweep/ablate/compare-noising).
//
// Every subcommand that writes an output file also writes
// `<output>.manifest.json` beside it with the resolved configuration, the
// tool version, and the exact argv needed to reproduce the run.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "teco/charlm.hpp"
#include "teco/corrector.hpp"
#include "teco/corrupt.hpp"
#include "teco/errormodel.hpp"
#include "teco/eval.hpp"
#include "teco/version.hpp"

namespace {

using teco::ErrKind;
using teco::Error;
using teco::Json;
using teco::Sentence;
using teco::SyntheticPair;

// --- small I/O helpers ---

std::vector<Sentence> decode_lines(const std::vector<std::string>& lines) {
    std::vector<Sentence> out;
    out.reserve(lines.size());
    for (const std::string& line : lines)
        out.push_back(teco::decode_utf8(line));
    return out;
}

// Normalized, non-empty sentences from a raw text file (no length filter).
std::vector<Sentence> load_clean_corpus(const std::string& path) {
    std::vector<Sentence> out;
    teco::NormalizationConfig cfg;
    for (const std::string& line : teco::read_lines_file(path)) {
        Sentence s = teco::normalize(line, cfg);
        if (!s.empty()) out.push_back(std::move(s));
    }
    if (out.empty())
        throw Error(ErrKind::EmptyCorpus, "no usable sentences in " + path);
    return out;
}

std::vector<SyntheticPair> read_pairs_tsv(const std::string& path) {
    std::vector<SyntheticPair> pairs;
    const auto lines = teco::read_lines_file(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t tab = lines[i].find('\t');
        if (tab == std::string::npos)
            throw Error(ErrKind::MalformedDocument,
                        path + " line " + std::to_string(i + 1) +
                            ": expected clean<TAB>noisy");
        pairs.push_back({teco::decode_utf8(lines[i].substr(0, tab)),
                         teco::decode_utf8(lines[i].substr(tab + 1))});
    }
    if (pairs.empty()) throw Error(ErrKind::EmptyCorpus, path + " is empty");
    return pairs;
}

std::string pairs_tsv(const std::vector<SyntheticPair>& pairs) {
    std::string out;
    for (const SyntheticPair& pair : pairs) {
        out += teco::encode_utf8(pair.clean);
        out += '\t';
        out += teco::encode_utf8(pair.noisy);
        out += '\n';
    }
    return out;
}

std::string sentences_text(const std::vector<Sentence>& sentences) {
    std::string out;
    for (const Sentence& s : sentences) {
        out += teco::encode_utf8(s);
        out += '\n';
    }
    return out;
}

// Manifest written beside each output: resolved config plus the argv that
// reproduces the run byte-for-byte.
void write_manifest(const std::string& out_path, const std::string& subcommand,
                    const Json& config, const std::vector<std::string>& argv) {
    Json doc;
    doc["tool_version"] = teco::kToolVersion;
    doc["subcommand"] = subcommand;
    doc["output"] = out_path;
    doc["config"] = config;
    doc["command"] = argv;
    teco::save_text_file(out_path + ".manifest.json", doc.dump(2) + "\n");
}

std::string fmt_double(double v) { return teco::fmt12(v); }

// --- subcommand state ---

struct Args {
    std::string in, out, ref, hyp, model, lm, bpe, memory, train, test, raw;
    std::string mode, grid = "default", fractions = "0.01,0.05,0.1,0.25,1.0";
    double alpha = 0.0, rate = 0.1, dropout = 0.0, lambda = 1.0,
           min_ratio = 0.5;
    std::uint64_t seed = 0;
    int order = 5, threads = 1, beam = 8;
    std::size_t vocab_size = 8000, max_token_len = 8, min_words = 1,
                max_words = SIZE_MAX, min_count = 3, token_span = 3;
    bool random = false;
};

std::vector<std::pair<std::size_t, std::size_t>> parse_grid(
    const std::string& spec) {
    if (spec == "default") return teco::default_grid();
    std::vector<std::pair<std::size_t, std::size_t>> grid;
    std::stringstream ss(spec);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const std::size_t colon = cell.find(':');
        if (colon == std::string::npos)
            throw Error(ErrKind::Usage, "grid cell '" + cell +
                                            "' is not VOCAB:MAXLEN");
        grid.emplace_back(std::stoull(cell.substr(0, colon)),
                          std::stoull(cell.substr(colon + 1)));
    }
    if (grid.empty()) throw Error(ErrKind::Usage, "empty grid spec");
    return grid;
}

std::vector<double> parse_fractions(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(teco::parse12(cell));
    return out;
}

// --- subcommand implementations ---

void cmd_normalize(const Args& a) {
    teco::NormalizationConfig cfg;
    cfg.min_words = a.min_words;
    cfg.max_words = a.max_words;
    std::vector<Sentence> kept;
    std::size_t dropped = 0;
    for (const std::string& line : teco::read_lines_file(a.in)) {
        Sentence s = teco::normalize(line, cfg);
        const std::size_t words = teco::word_count(s);
        if (s.empty() || words < cfg.min_words || words > cfg.max_words) {
            ++dropped;
            continue;
        }
        kept.push_back(std::move(s));
    }
    teco::save_text_file(a.out, sentences_text(kept));
    Json config{{"in", a.in},
                {"min_words", a.min_words},
                {"max_words", a.max_words},
                {"kept", kept.size()},
                {"dropped", dropped}};
    write_manifest(a.out, "normalize", config,
                   {"normalize", "--in", a.in, "--out", a.out, "--min-words",
                    std::to_string(a.min_words), "--max-words",
                    std::to_string(a.max_words)});
}

void cmd_extract(const Args& a) {
    const auto ref_lines = teco::read_lines_file(a.ref);
    const auto hyp_lines = teco::read_lines_file(a.hyp);
    if (ref_lines.size() != hyp_lines.size())
        throw Error(ErrKind::LineCountMismatch,
                    a.ref + " has " + std::to_string(ref_lines.size()) +
                        " lines but " + a.hyp + " has " +
                        std::to_string(hyp_lines.size()));
    teco::NormalizationConfig cfg;
    const teco::ParallelCorpus corpus =
        teco::load_parallel(ref_lines, hyp_lines, cfg);
    if (corpus.pairs.empty())
        throw Error(ErrKind::EmptyCorpus,
                    "no usable pairs in " + a.ref + " / " + a.hyp);
    const teco::ErrorModel model =
        teco::estimate(teco::extract_counts(corpus), a.alpha);
    teco::save_text_file(a.out, teco::serialize(model));
    Json config{{"ref", a.ref},
                {"hyp", a.hyp},
                {"alpha", fmt_double(a.alpha)},
                {"pairs", corpus.pairs.size()},
                {"dropped", corpus.dropped}};
    write_manifest(a.out, "extract", config,
                   {"extract", "--ref", a.ref, "--hyp", a.hyp, "--alpha",
                    fmt_double(a.alpha), "--out", a.out});
}

void cmd_corrupt(const Args& a) {
    const teco::ErrorModel model = teco::load_model(a.model);
    const std::vector<Sentence> raw = load_clean_corpus(a.in);
    teco::CorruptionConfig cfg;
    cfg.seed = a.seed;
    cfg.random_rate = a.rate;
    if (a.random) cfg.mode = teco::CorruptMode::RandomBaseline;
    const auto pairs = teco::generate_dataset(raw, model, cfg, a.threads);
    teco::save_text_file(a.out, pairs_tsv(pairs));
    Json config{{"model", a.model},
                {"in", a.in},
                {"seed", a.seed},
                {"random", a.random},
                {"rate", fmt_double(a.rate)},
                {"threads", a.threads},
                {"pairs", pairs.size()}};
    std::vector<std::string> argv{"corrupt", "--model", a.model,
                                  "--in",    a.in,      "--out",
                                  a.out,     "--seed",  std::to_string(a.seed),
                                  "--threads", std::to_string(a.threads)};
    if (a.random) {
        argv.push_back("--random");
        argv.push_back("--rate");
        argv.push_back(fmt_double(a.rate));
    }
    write_manifest(a.out, "corrupt", config, argv);
}

void cmd_train_bpe(const Args& a) {
    const std::vector<Sentence> corpus = load_clean_corpus(a.in);
    const teco::BpeModel model =
        teco::train_bpe(corpus, a.vocab_size, a.max_token_len);
    teco::save_text_file(a.out, teco::serialize(model));
    Json config{{"in", a.in},
                {"vocab_size", a.vocab_size},
                {"max_token_len", a.max_token_len},
                {"vocab", model.vocab.size()},
                {"merges", model.merges.size()}};
    write_manifest(a.out, "train-bpe", config,
                   {"train-bpe", "--in", a.in, "--vocab-size",
                    std::to_string(a.vocab_size), "--max-token-len",
                    std::to_string(a.max_token_len), "--out", a.out});
}

void cmd_encode(const Args& a) {
    const teco::BpeModel model = teco::load_bpe(a.model);
    const std::vector<Sentence> lines = decode_lines(
        a.in.empty() ? teco::read_lines(std::cin) : teco::read_lines_file(a.in));
    std::string out;
    teco::rng::Stream stream(a.seed, 0);
    for (const Sentence& line : lines) {
        const teco::TokenSeq seq =
            teco::encode(model, line, a.dropout,
                         a.dropout > 0.0 ? &stream : nullptr);
        for (std::size_t i = 0; i < seq.size(); ++i) {
            if (i) out += ' ';
            if (seq[i].is_literal()) {
                char buf[16];
                std::snprintf(buf, sizeof(buf), "#%x",
                              static_cast<unsigned>(seq[i].literal));
                out += buf;
            } else {
                out += std::to_string(seq[i].id);
            }
        }
        out += '\n';
    }
    if (a.out.empty()) {
        std::cout << out;
    } else {
        teco::save_text_file(a.out, out);
        Json config{{"model", a.model},
                    {"in", a.in},
                    {"dropout", fmt_double(a.dropout)},
                    {"seed", a.seed}};
        write_manifest(a.out, "encode", config,
                       {"encode", "--model", a.model, "--in", a.in, "--out",
                        a.out, "--dropout", fmt_double(a.dropout), "--seed",
                        std::to_string(a.seed)});
    }
}

void cmd_train_lm(const Args& a) {
    const std::vector<Sentence> corpus = load_clean_corpus(a.in);
    const teco::CharLm lm = teco::train_ngram(corpus, a.order);
    teco::save_text_file(a.out, teco::serialize(lm));
    Json config{{"in", a.in},
                {"order", a.order},
                {"alphabet", lm.alphabet.size()}};
    write_manifest(a.out, "train-lm", config,
                   {"train-lm", "--in", a.in, "--order",
                    std::to_string(a.order), "--out", a.out});
}

void cmd_build_memory(const Args& a) {
    const teco::BpeModel bpe = teco::load_bpe(a.bpe);
    const auto pairs = read_pairs_tsv(a.in);
    teco::CorrectorConfig cfg;
    cfg.min_count = a.min_count;
    cfg.min_ratio = a.min_ratio;
    cfg.token_span = a.token_span;
    cfg.memory_dropout = a.dropout;
    cfg.seed = a.seed;
    const teco::TokenMemory memory = teco::build_memory(pairs, bpe, cfg);
    teco::save_text_file(a.out, teco::serialize(memory));
    Json config{{"in", a.in},
                {"bpe", a.bpe},
                {"min_count", a.min_count},
                {"min_ratio", fmt_double(a.min_ratio)},
                {"token_span", a.token_span},
                {"dropout", fmt_double(a.dropout)},
                {"seed", a.seed},
                {"word_entries", memory.word_table.size()},
                {"token_entries", memory.token_table.size()}};
    write_manifest(a.out, "build-memory", config,
                   {"build-memory", "--in", a.in, "--bpe", a.bpe, "--out",
                    a.out, "--min-count", std::to_string(a.min_count),
                    "--min-ratio", fmt_double(a.min_ratio), "--token-span",
                    std::to_string(a.token_span), "--dropout",
                    fmt_double(a.dropout), "--seed", std::to_string(a.seed)});
}

void cmd_correct(const Args& a) {
    const std::vector<Sentence> lines = decode_lines(teco::read_lines_file(a.in));
    std::vector<Sentence> corrected(lines.size());
    teco::CorrectorConfig cfg;
    cfg.beam_width = static_cast<std::size_t>(a.beam);
    cfg.lambda = a.lambda;
    Json config{{"mode", a.mode}, {"in", a.in}, {"threads", a.threads}};
    std::vector<std::string> argv{"correct", "--mode", a.mode, "--in", a.in,
                                  "--out", a.out, "--threads",
                                  std::to_string(a.threads)};
    if (a.mode == "channel") {
        const teco::ErrorModel model = teco::load_model(a.model);
        const teco::CharLm lm = teco::load_lm(a.lm);
        teco::parallel_for(lines.size(), a.threads, [&](std::size_t i) {
            corrected[i] = teco::correct_channel(lines[i], model, lm, cfg);
        });
        config["model"] = a.model;
        config["lm"] = a.lm;
        config["beam"] = a.beam;
        config["lambda"] = fmt_double(a.lambda);
        for (const std::string& t :
             {std::string("--model"), a.model, std::string("--lm"), a.lm,
              std::string("--beam"), std::to_string(a.beam),
              std::string("--lambda"), fmt_double(a.lambda)})
            argv.push_back(t);
    } else if (a.mode == "memory") {
        const teco::BpeModel bpe = teco::load_bpe(a.bpe);
        const teco::TokenMemory memory = teco::load_memory(a.memory);
        teco::parallel_for(lines.size(), a.threads, [&](std::size_t i) {
            corrected[i] = teco::correct_memory(lines[i], memory, bpe);
        });
        config["memory"] = a.memory;
        config["bpe"] = a.bpe;
        for (const std::string& t : {std::string("--memory"), a.memory,
                                     std::string("--bpe"), a.bpe})
            argv.push_back(t);
    } else {
        throw Error(ErrKind::Usage, "correct --mode must be channel or memory");
    }
    teco::save_text_file(a.out, sentences_text(corrected));
    write_manifest(a.out, "correct", config, argv);
}

void cmd_eval(const Args& a) {
    const auto refs = decode_lines(teco::read_lines_file(a.ref));
    const auto hyps = decode_lines(teco::read_lines_file(a.hyp));
    const teco::EvalResult r = teco::wer(refs, hyps);
    char line[256];
    std::snprintf(line, sizeof(line),
                  "wer=%.6f cer=%.6f substitutions=%llu deletions=%llu "
                  "insertions=%llu ref_words=%llu\n",
                  r.wer, r.cer,
                  static_cast<unsigned long long>(r.substitutions),
                  static_cast<unsigned long long>(r.deletions),
                  static_cast<unsigned long long>(r.insertions),
                  static_cast<unsigned long long>(r.n_ref_words));
    std::cout << line;
    if (!a.out.empty()) {
        Json doc{{"wer", fmt_double(r.wer)},
                 {"cer", fmt_double(r.cer)},
                 {"substitutions", r.substitutions},
                 {"deletions", r.deletions},
                 {"insertions", r.insertions},
                 {"ref_words", r.n_ref_words}};
        teco::save_text_file(a.out, doc.dump(2) + "\n");
        Json config{{"ref", a.ref}, {"hyp", a.hyp}};
        write_manifest(a.out, "eval", config,
                       {"eval", "--ref", a.ref, "--hyp", a.hyp, "--out", a.out});
    }
}

void cmd_sweep(const Args& a) {
    const auto grid = parse_grid(a.grid);
    const auto train = read_pairs_tsv(a.train);
    const auto test = read_pairs_tsv(a.test);
    teco::SweepConfig cfg;
    cfg.threads = a.threads;
    const auto records = teco::run_sweep(grid, train, test, cfg);
    teco::save_text_file(a.out, teco::sweep_csv(records));
    Json config{{"grid", a.grid},
                {"train", a.train},
                {"test", a.test},
                {"threads", a.threads}};
    write_manifest(a.out, "sweep", config,
                   {"sweep", "--grid", a.grid, "--train", a.train, "--test",
                    a.test, "--out", a.out, "--threads",
                    std::to_string(a.threads)});
}

void cmd_compare_noising(const Args& a) {
    const teco::ErrorModel model = teco::load_model(a.model);
    const auto train = load_clean_corpus(a.train);
    const auto test = load_clean_corpus(a.test);
    teco::NoisingConfig cfg;
    cfg.vocab_size = a.vocab_size;
    cfg.max_token_len = a.max_token_len;
    cfg.bpe_dropout = a.dropout > 0.0 ? a.dropout : 0.1;
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    const auto rows = teco::compare_noising(train, model, test, cfg);
    teco::save_text_file(a.out, teco::noising_csv(rows));
    Json config{{"model", a.model},
                {"train", a.train},
                {"test", a.test},
                {"vocab_size", a.vocab_size},
                {"max_token_len", a.max_token_len},
                {"dropout", fmt_double(cfg.bpe_dropout)},
                {"seed", a.seed},
                {"threads", a.threads}};
    write_manifest(a.out, "compare-noising", config,
                   {"compare-noising", "--model", a.model, "--train", a.train,
                    "--test", a.test, "--out", a.out, "--vocab-size",
                    std::to_string(a.vocab_size), "--max-token-len",
                    std::to_string(a.max_token_len), "--dropout",
                    fmt_double(cfg.bpe_dropout), "--seed",
                    std::to_string(a.seed), "--threads",
                    std::to_string(a.threads)});
}

void cmd_ablate(const Args& a) {
    const auto ref_lines = teco::read_lines_file(a.ref);
    const auto hyp_lines = teco::read_lines_file(a.hyp);
    if (ref_lines.size() != hyp_lines.size())
        throw Error(ErrKind::LineCountMismatch,
                    a.ref + " has " + std::to_string(ref_lines.size()) +
                        " lines but " + a.hyp + " has " +
                        std::to_string(hyp_lines.size()));
    teco::NormalizationConfig ncfg;
    const teco::ParallelCorpus pairs =
        teco::load_parallel(ref_lines, hyp_lines, ncfg);
    teco::AblationConfig cfg;
    cfg.alpha = a.alpha;
    cfg.raw = load_clean_corpus(a.raw);
    cfg.test_clean = load_clean_corpus(a.test);
    cfg.vocab_size = a.vocab_size;
    cfg.max_token_len = a.max_token_len;
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    const auto records =
        teco::ablate_data_amount(pairs, parse_fractions(a.fractions), cfg);
    teco::save_text_file(a.out, teco::ablation_csv(records));
    Json config{{"ref", a.ref},
                {"hyp", a.hyp},
                {"raw", a.raw},
                {"test", a.test},
                {"fractions", a.fractions},
                {"alpha", fmt_double(a.alpha)},
                {"vocab_size", a.vocab_size},
                {"max_token_len", a.max_token_len},
                {"seed", a.seed},
                {"threads", a.threads}};
    write_manifest(a.out, "ablate", config,
                   {"ablate", "--ref", a.ref, "--hyp", a.hyp, "--raw", a.raw,
                    "--test", a.test, "--fractions", a.fractions, "--alpha",
                    fmt_double(a.alpha), "--vocab-size",
                    std::to_string(a.vocab_size), "--max-token-len",
                    std::to_string(a.max_token_len), "--seed",
                    std::to_string(a.seed), "--out", a.out, "--threads",
                    std::to_string(a.threads)});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transcription-error corpus toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", teco::kToolVersion);
    Args a;

    auto* normalize = app.add_subcommand("normalize", "normalize a raw corpus");
    normalize->add_option("--in", a.in)->required();
    normalize->add_option("--out", a.out)->required();
    normalize->add_option("--min-words", a.min_words);
    normalize->add_option("--max-words", a.max_words);
    normalize->callback([&] { cmd_normalize(a); });

    auto* extract =
        app.add_subcommand("extract", "extract an error model from ref/hyp");
    extract->add_option("--ref", a.ref)->required();
    extract->add_option("--hyp", a.hyp)->required();
    extract->add_option("--alpha", a.alpha);
    extract->add_option("--out", a.out)->required();
    extract->callback([&] { cmd_extract(a); });

    auto* corrupt =
        app.add_subcommand("corrupt", "generate a synthetic parallel corpus");
    corrupt->add_option("--model", a.model)->required();
    corrupt->add_option("--in", a.in)->required();
    corrupt->add_option("--out", a.out)->required();
    corrupt->add_option("--seed", a.seed);
    corrupt->add_flag("--random", a.random);
    corrupt->add_option("--rate", a.rate);
    corrupt->add_option("--threads", a.threads);
    corrupt->callback([&] { cmd_corrupt(a); });

    auto* train_bpe = app.add_subcommand("train-bpe", "train a BPE tokenizer");
    train_bpe->add_option("--in", a.in)->required();
    train_bpe->add_option("--vocab-size", a.vocab_size);
    train_bpe->add_option("--max-token-len", a.max_token_len);
    train_bpe->add_option("--out", a.out)->required();
    train_bpe->callback([&] { cmd_train_bpe(a); });

    auto* encode = app.add_subcommand("encode", "encode text with a BPE model");
    encode->add_option("--model", a.model)->required();
    encode->add_option("--in", a.in);
    encode->add_option("--out", a.out);
    encode->add_option("--dropout", a.dropout);
    encode->add_option("--seed", a.seed);
    encode->callback([&] { cmd_encode(a); });

    auto* train_lm =
        app.add_subcommand("train-lm", "train a character n-gram LM");
    train_lm->add_option("--in", a.in)->required();
    train_lm->add_option("--order", a.order);
    train_lm->add_option("--out", a.out)->required();
    train_lm->callback([&] { cmd_train_lm(a); });

    auto* build_memory =
        app.add_subcommand("build-memory", "build a token-memory corrector");
    build_memory->add_option("--in", a.in)->required();
    build_memory->add_option("--bpe", a.bpe)->required();
    build_memory->add_option("--out", a.out)->required();
    build_memory->add_option("--min-count", a.min_count);
    build_memory->add_option("--min-ratio", a.min_ratio);
    build_memory->add_option("--token-span", a.token_span);
    build_memory->add_option("--dropout", a.dropout);
    build_memory->add_option("--seed", a.seed);
    build_memory->callback([&] { cmd_build_memory(a); });

    auto* correct = app.add_subcommand("correct", "correct hypothesis text");
    correct->add_option("--mode", a.mode)->required();
    correct->add_option("--model", a.model);
    correct->add_option("--lm", a.lm);
    correct->add_option("--memory", a.memory);
    correct->add_option("--bpe", a.bpe);
    correct->add_option("--in", a.in)->required();
    correct->add_option("--out", a.out)->required();
    correct->add_option("--beam", a.beam);
    correct->add_option("--lambda", a.lambda);
    correct->add_option("--threads", a.threads);
    correct->callback([&] { cmd_correct(a); });

    auto* eval = app.add_subcommand("eval", "word/char error rates");
    eval->add_option("--ref", a.ref)->required();
    eval->add_option("--hyp", a.hyp)->required();
    eval->add_option("--out", a.out);
    eval->callback([&] { cmd_eval(a); });

    auto* sweep = app.add_subcommand("sweep", "tokenizer (V, L) sweep");
    sweep->add_option("--grid", a.grid);
    sweep->add_option("--train", a.train)->required();
    sweep->add_option("--test", a.test)->required();
    sweep->add_option("--out", a.out)->required();
    sweep->add_option("--threads", a.threads);
    sweep->callback([&] { cmd_sweep(a); });

    auto* compare =
        app.add_subcommand("compare-noising", "compare noising methods");
    compare->add_option("--model", a.model)->required();
    compare->add_option("--train", a.train)->required();
    compare->add_option("--test", a.test)->required();
    compare->add_option("--out", a.out)->required();
    compare->add_option("--vocab-size", a.vocab_size);
    compare->add_option("--max-token-len", a.max_token_len);
    compare->add_option("--dropout", a.dropout);
    compare->add_option("--seed", a.seed);
    compare->add_option("--threads", a.threads);
    compare->callback([&] { cmd_compare_noising(a); });

    auto* ablate = app.add_subcommand("ablate", "extraction data ablation");
    ablate->add_option("--ref", a.ref)->required();
    ablate->add_option("--hyp", a.hyp)->required();
    ablate->add_option("--raw", a.raw)->required();
    ablate->add_option("--test", a.test)->required();
    ablate->add_option("--fractions", a.fractions);
    ablate->add_option("--alpha", a.alpha);
    ablate->add_option("--vocab-size", a.vocab_size);
    ablate->add_option("--max-token-len", a.max_token_len);
    ablate->add_option("--seed", a.seed);
    ablate->add_option("--out", a.out)->required();
    ablate->add_option("--threads", a.threads);
    ablate->callback([&] { cmd_ablate(a); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "UsageError: " << e.what() << "\n";
        return static_cast<int>(ErrKind::Usage);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "Error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
