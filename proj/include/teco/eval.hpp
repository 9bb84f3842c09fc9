#pragma once

#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "teco/align.hpp"
#include "teco/corrector.hpp"
#include "teco/corrupt.hpp"
#include "teco/errormodel.hpp"
#include "teco/parallel.hpp"

namespace teco {

struct EvalResult {
    double wer = 0.0;
    double cer = 0.0;
    std::uint64_t substitutions = 0;  // word level
    std::uint64_t deletions = 0;
    std::uint64_t insertions = 0;
    std::uint64_t n_ref_words = 0;
};

namespace detail {

inline double safe_rate(std::uint64_t errors, std::uint64_t denom) {
    if (denom == 0)
        return errors == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    return static_cast<double>(errors) / static_cast<double>(denom);
}

}  // namespace detail

// Corpus WER and CER: per-pair minimal edit alignment (same tie-breaking as
// the character aligner), error counts summed over the corpus, normalized by
// total reference words / characters.
inline EvalResult wer(const std::vector<Sentence>& refs,
                      const std::vector<Sentence>& hyps) {
    if (refs.size() != hyps.size())
        throw Error(ErrKind::LengthMismatch,
                    "wer: " + std::to_string(refs.size()) + " references vs " +
                        std::to_string(hyps.size()) + " hypotheses");
    EvalResult result;
    std::uint64_t char_errors = 0, n_ref_chars = 0;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const auto ref_words = split_words(refs[i]);
        const auto hyp_words = split_words(hyps[i]);
        const AlignStats words = align_stats(ref_words, hyp_words);
        result.substitutions += words.subs;
        result.deletions += words.dels;
        result.insertions += words.ins;
        result.n_ref_words += ref_words.size();
        char_errors += align_stats(refs[i], hyps[i]).distance;
        n_ref_chars += refs[i].size();
    }
    result.wer = detail::safe_rate(
        result.substitutions + result.deletions + result.insertions,
        result.n_ref_words);
    result.cer = detail::safe_rate(char_errors, n_ref_chars);
    return result;
}

// --- (V, L) sweep ---

struct SweepRecord {
    std::size_t vocab_size = 0;
    std::size_t max_token_len = 0;
    std::string corrector = "token_memory";
    double wer_before = 0.0;
    double wer_after = 0.0;
    double cer_after = 0.0;
    double fertility = 0.0;
    double coverage = 0.0;
    std::string status = "ok";
};

struct SweepConfig {
    CorrectorConfig corrector;
    int threads = 1;
};

// Vocabulary endpoints from the studied range with log-spaced interior
// points, each crossed with the token-length range, plus the char-baseline
// row (L = 1).
inline std::vector<std::pair<std::size_t, std::size_t>> default_grid() {
    std::vector<std::pair<std::size_t, std::size_t>> grid{{500, 1}};
    for (std::size_t v : {500, 2000, 8000, 25000})
        for (std::size_t l : {4, 8, 16}) grid.emplace_back(v, l);
    return grid;
}

inline std::vector<SweepRecord> run_sweep(
    const std::vector<std::pair<std::size_t, std::size_t>>& grid,
    const std::vector<SyntheticPair>& train_pairs,
    const std::vector<SyntheticPair>& test_pairs, const SweepConfig& config) {
    if (grid.empty()) throw Error(ErrKind::Usage, "sweep grid is empty");
    if (train_pairs.empty())
        throw Error(ErrKind::EmptyCorpus, "sweep training set is empty");
    if (test_pairs.empty())
        throw Error(ErrKind::EmptyCorpus, "sweep test set is empty");

    std::vector<Sentence> test_clean, test_noisy;
    test_clean.reserve(test_pairs.size());
    test_noisy.reserve(test_pairs.size());
    for (const auto& pair : test_pairs) {
        test_clean.push_back(pair.clean);
        test_noisy.push_back(pair.noisy);
    }
    const EvalResult before = wer(test_clean, test_noisy);

    std::map<std::u32string, std::uint64_t> train_freqs;
    std::vector<Sentence> train_clean;
    train_clean.reserve(train_pairs.size());
    for (const auto& pair : train_pairs) {
        train_clean.push_back(pair.clean);
        for (const std::u32string& w : split_words(pair.clean)) ++train_freqs[w];
    }

    std::vector<SweepRecord> records;
    records.reserve(grid.size());
    for (const auto& [v, l] : grid) {
        SweepRecord rec;
        rec.vocab_size = v;
        rec.max_token_len = l;
        rec.wer_before = before.wer;
        try {
            const BpeModel bpe = train_bpe(train_freqs, v, l);
            const TokenMemory memory = build_memory(train_pairs, bpe,
                                                    config.corrector);
            std::vector<Sentence> corrected(test_noisy.size());
            parallel_for(test_noisy.size(), config.threads, [&](std::size_t i) {
                corrected[i] = correct_memory(test_noisy[i], memory, bpe);
            });
            const EvalResult after = wer(test_clean, corrected);
            const TokenStats stats = tokenization_stats(bpe, train_clean);
            rec.wer_after = after.wer;
            rec.cer_after = after.cer;
            rec.fertility = stats.fertility;
            rec.coverage = stats.coverage;
        } catch (const Error& e) {
            if (e.kind() != ErrKind::VocabTooSmall) throw;
            rec.status = "vocab_too_small";
        }
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::string sweep_csv(const std::vector<SweepRecord>& records) {
    std::string out =
        "vocab_size,max_token_len,corrector,wer_before,wer_after,cer_after,"
        "fertility,coverage,status\n";
    char line[256];
    for (const SweepRecord& rec : records) {
        if (rec.status == "ok") {
            std::snprintf(line, sizeof(line),
                          "%zu,%zu,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%s\n",
                          rec.vocab_size, rec.max_token_len,
                          rec.corrector.c_str(), rec.wer_before, rec.wer_after,
                          rec.cer_after, rec.fertility, rec.coverage,
                          rec.status.c_str());
        } else {
            std::snprintf(line, sizeof(line), "%zu,%zu,%s,%.6f,,,,,%s\n",
                          rec.vocab_size, rec.max_token_len,
                          rec.corrector.c_str(), rec.wer_before,
                          rec.status.c_str());
        }
        out += line;
    }
    return out;
}

// --- noising-method comparison ---

struct NoisingRow {
    std::string method;
    double wer_before = 0.0;
    double wer_after = 0.0;
};

struct NoisingConfig {
    std::size_t vocab_size = 2000;
    std::size_t max_token_len = 8;
    double bpe_dropout = 0.1;
    CorrectorConfig corrector;
    std::uint64_t seed = 0;
    int threads = 1;
};

// Fraction of words the sampler actually edited; the random baseline runs at
// this rate so the methods compare at matched noise levels.
inline double measured_edit_rate(const std::vector<SyntheticPair>& pairs) {
    std::uint64_t words = 0, edited = 0;
    for (const auto& pair : pairs) {
        const auto clean = split_words(pair.clean);
        const auto noisy = split_words(pair.noisy);
        for (std::size_t i = 0; i < clean.size(); ++i) {
            ++words;
            if (clean[i] != noisy[i]) ++edited;
        }
    }
    return words == 0 ? 0.0 : static_cast<double>(edited) /
                                  static_cast<double>(words);
}

// Trains one token-memory corrector per noising method — distribution-matched
// pairs, random-noise pairs at the matched edit rate, and distribution-matched
// pairs with BPE dropout while building the memory — and evaluates all three
// on held-out test sentences corrupted with the true model (seed + 1).
inline std::vector<NoisingRow> compare_noising(
    const std::vector<Sentence>& train_raw, const ErrorModel& true_model,
    const std::vector<Sentence>& test_clean, const NoisingConfig& config) {
    if (train_raw.empty() || test_clean.empty())
        throw Error(ErrKind::EmptyCorpus, "compare-noising corpus is empty");

    CorruptionConfig matched_cfg;
    matched_cfg.seed = config.seed;
    const auto matched = generate_dataset(train_raw, true_model, matched_cfg,
                                          config.threads);

    CorruptionConfig random_cfg;
    random_cfg.seed = config.seed;
    random_cfg.mode = CorruptMode::RandomBaseline;
    random_cfg.random_rate = measured_edit_rate(matched);
    const auto random_pairs = generate_dataset(train_raw, true_model, random_cfg,
                                               config.threads);

    CorruptionConfig test_cfg;
    test_cfg.seed = config.seed + 1;
    const auto test_pairs = generate_dataset(test_clean, true_model, test_cfg,
                                             config.threads);
    std::vector<Sentence> test_noisy;
    test_noisy.reserve(test_pairs.size());
    for (const auto& pair : test_pairs) test_noisy.push_back(pair.noisy);
    const double before = wer(test_clean, test_noisy).wer;

    const BpeModel bpe = train_bpe(train_raw, config.vocab_size,
                                   config.max_token_len);

    const auto evaluate = [&](const std::vector<SyntheticPair>& pairs,
                              double dropout) {
        CorrectorConfig cc = config.corrector;
        cc.memory_dropout = dropout;
        cc.seed = config.seed;
        const TokenMemory memory = build_memory(pairs, bpe, cc);
        std::vector<Sentence> corrected(test_noisy.size());
        parallel_for(test_noisy.size(), config.threads, [&](std::size_t i) {
            corrected[i] = correct_memory(test_noisy[i], memory, bpe);
        });
        return wer(test_clean, corrected).wer;
    };

    return {
        {"distribution_matched", before, evaluate(matched, 0.0)},
        {"random_baseline", before, evaluate(random_pairs, 0.0)},
        {"bpe_dropout", before, evaluate(matched, config.bpe_dropout)},
    };
}

inline std::string noising_csv(const std::vector<NoisingRow>& rows) {
    std::string out = "method,wer_before,wer_after\n";
    char line[128];
    for (const NoisingRow& row : rows) {
        std::snprintf(line, sizeof(line), "%s,%.6f,%.6f\n", row.method.c_str(),
                      row.wer_before, row.wer_after);
        out += line;
    }
    return out;
}

// --- data-amount ablation ---

struct AblationRecord {
    double extraction_fraction = 0.0;
    double model_l1 = 0.0;
    double wer_after = 0.0;
};

struct AblationConfig {
    double alpha = 0.0;
    std::vector<Sentence> raw;         // corruption corpus for synthetic pairs
    std::vector<Sentence> test_clean;  // held-out evaluation sentences
    std::size_t vocab_size = 2000;
    std::size_t max_token_len = 8;
    CorrectorConfig corrector;
    std::uint64_t seed = 0;
    int threads = 1;
};

// For each fraction f: extract a model from the first f*N labeled pairs,
// record its L1 distance to the full-data model, then run the downstream
// pipeline (corrupt raw text, build a memory, correct test data corrupted by
// the full model at seed + 1) and record wer_after.
inline std::vector<AblationRecord> ablate_data_amount(
    const ParallelCorpus& pairs, const std::vector<double>& fractions,
    const AblationConfig& config) {
    if (fractions.empty()) return {};
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        if (fractions[i] <= 0.0 || fractions[i] > 1.0 ||
            (i > 0 && fractions[i] < fractions[i - 1]))
            throw Error(ErrKind::Usage,
                        "fractions must be ascending and within (0, 1]");
    }
    if (pairs.pairs.empty())
        throw Error(ErrKind::EmptyCorpus, "ablation extraction corpus is empty");

    const ErrorModel full = estimate(extract_counts(pairs), config.alpha);

    CorruptionConfig test_cfg;
    test_cfg.seed = config.seed + 1;
    const auto test_pairs = generate_dataset(config.test_clean, full, test_cfg,
                                             config.threads);
    std::vector<Sentence> test_noisy;
    test_noisy.reserve(test_pairs.size());
    for (const auto& pair : test_pairs) test_noisy.push_back(pair.noisy);

    const BpeModel bpe = train_bpe(config.raw, config.vocab_size,
                                   config.max_token_len);

    std::vector<AblationRecord> records;
    records.reserve(fractions.size());
    for (const double fraction : fractions) {
        const std::size_t n = std::max<std::size_t>(
            1, static_cast<std::size_t>(fraction *
                                        static_cast<double>(pairs.pairs.size())));
        ParallelCorpus subset;
        subset.pairs.assign(pairs.pairs.begin(),
                            pairs.pairs.begin() + static_cast<std::ptrdiff_t>(
                                                      std::min(n, pairs.pairs.size())));
        const ErrorModel partial = estimate(extract_counts(subset), config.alpha);

        CorruptionConfig synth_cfg;
        synth_cfg.seed = config.seed;
        const auto synth = generate_dataset(config.raw, partial, synth_cfg,
                                            config.threads);
        const TokenMemory memory = build_memory(synth, bpe, config.corrector);
        std::vector<Sentence> corrected(test_noisy.size());
        parallel_for(test_noisy.size(), config.threads, [&](std::size_t i) {
            corrected[i] = correct_memory(test_noisy[i], memory, bpe);
        });

        AblationRecord rec;
        rec.extraction_fraction = fraction;
        rec.model_l1 = model_distance(partial, full);
        rec.wer_after = wer(config.test_clean, corrected).wer;
        records.push_back(rec);
    }
    return records;
}

inline std::string ablation_csv(const std::vector<AblationRecord>& records) {
    std::string out = "fraction,model_l1,wer_after\n";
    char line[128];
    for (const AblationRecord& rec : records) {
        std::snprintf(line, sizeof(line), "%.6f,%.6f,%.6f\n",
                      rec.extraction_fraction, rec.model_l1, rec.wer_after);
        out += line;
    }
    return out;
}

}  // namespace teco
