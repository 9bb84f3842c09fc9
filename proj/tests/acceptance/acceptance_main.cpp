// Acceptance gate. Each criterion is a self-contained scenario exercising the
// library (or the CLI) end to end against independently computed expectations,
// and prints exactly one line: "AC-n PASS (t)" or "AC-n FAIL: reason (t)".
// Run with no arguments for all criteria, or name them: `acceptance AC-3 AC-7`.
// Exit status is 0 only if every selected criterion passed.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "teco/charlm.hpp"
#include "teco/corrector.hpp"
#include "teco/eval.hpp"
#include "tests/helpers.hpp"

namespace {

using namespace teco;

struct Outcome {
    bool pass = true;
    std::string reason;
};

Outcome fail(std::string reason) { return {false, std::move(reason)}; }

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

// --- shared fixture builders -----------------------------------------------

std::vector<std::u32string> make_lexicon(std::mt19937_64& gen, std::size_t count,
                                         std::size_t min_len, std::size_t max_len,
                                         const std::u32string& alphabet) {
    std::set<std::u32string> words;
    while (words.size() < count)
        words.insert(testutil::random_word(gen, min_len, max_len, alphabet));
    return {words.begin(), words.end()};
}

std::vector<Sentence> lexicon_corpus(std::mt19937_64& gen,
                                     const std::vector<std::u32string>& lexicon,
                                     std::size_t sentences, std::size_t min_words,
                                     std::size_t max_words) {
    std::uniform_int_distribution<std::size_t> wc(min_words, max_words);
    std::uniform_int_distribution<std::size_t> pick(0, lexicon.size() - 1);
    std::vector<Sentence> out;
    out.reserve(sentences);
    for (std::size_t i = 0; i < sentences; ++i) {
        Sentence s;
        const std::size_t n = wc(gen);
        for (std::size_t w = 0; w < n; ++w) {
            if (w) s += U' ';
            s += lexicon[pick(gen)];
        }
        out.push_back(std::move(s));
    }
    return out;
}

// Character-wise perturbation with hard-coded rates, at most one change per
// word, driven by a plain mt19937_64. Deliberately written without the
// library's sampler so extraction fixtures come from independent code.
Sentence perturb_sentence(const Sentence& s, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Sentence out;
    bool changed = false;
    for (char32_t c : s) {
        if (c == U' ') {
            changed = false;
            out += c;
            continue;
        }
        if (changed) {
            out += c;
            continue;
        }
        const double u = unif(gen);
        if (c == U'h' && u < 0.20) {
            changed = true;  // deletion: emit nothing
        } else if (c == U'a' && u < 0.25) {
            out += U'u';
            changed = true;
        } else if (c == U'e' && u < 0.20) {
            out += U'i';
            changed = true;
        } else if (c == U'o' && u < 0.15) {
            out += U'u';
            changed = true;
        } else if (c == U't' && u < 0.10) {
            out += U'd';
            changed = true;
        } else {
            out += c;
        }
    }
    return out;
}

ParallelCorpus perturbed_pairs(const std::vector<Sentence>& clean,
                               std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    ParallelCorpus corpus;
    corpus.pairs.reserve(clean.size());
    for (const Sentence& s : clean) corpus.pairs.emplace_back(s, perturb_sentence(s, gen));
    return corpus;
}

std::string join_lines(const std::vector<Sentence>& sentences) {
    std::string out;
    for (const Sentence& s : sentences) {
        out += unicode::encode_utf8(s);
        out += '\n';
    }
    return out;
}

// --- AC-1: alignment vs an independent DP ----------------------------------

Outcome ac1() {
    const std::u32string alphabet = U"abcd";
    std::vector<std::u32string> all{U""};
    std::size_t block_start = 0;
    for (int len = 1; len <= 6; ++len) {
        const std::size_t block_end = all.size();
        for (std::size_t i = block_start; i < block_end; ++i)
            for (char32_t c : alphabet) all.push_back(all[i] + c);
        block_start = block_end;
    }
    if (all.size() != 5461)
        return fail("expected 5461 strings, got " + std::to_string(all.size()));

    for (const auto& a : all) {
        for (const auto& b : all) {
            const EditScript script = align_chars(a, b);
            const std::size_t oracle = testutil::oracle_distance(a, b);
            if (script.distance != oracle || script.ops.size() != oracle)
                return fail("distance mismatch on \"" +
                            unicode::encode_utf8(a) + "\" vs \"" +
                            unicode::encode_utf8(b) + "\"");
        }
    }

    std::mt19937_64 gen(4242);
    const std::u32string wide = U"abcdef";
    std::uniform_int_distribution<std::size_t> len(0, 12);
    for (int i = 0; i < 10000; ++i) {
        std::u32string a, b;
        {
            const std::size_t la = len(gen), lb = len(gen);
            std::uniform_int_distribution<std::size_t> chr(0, wide.size() - 1);
            for (std::size_t k = 0; k < la; ++k) a += wide[chr(gen)];
            for (std::size_t k = 0; k < lb; ++k) b += wide[chr(gen)];
        }
        const EditScript script = align_chars(a, b);
        if (script.distance != testutil::oracle_distance(a, b))
            return fail("random-pair distance mismatch at i=" + std::to_string(i));
        if (apply_script(a, script) != b)
            return fail("script replay mismatch at i=" + std::to_string(i));
    }
    return {};
}

// --- AC-2: extraction recovers a known model -------------------------------

// Independent re-implementation of the corruption protocol (left-to-right,
// one u per character, delete below p_del — suppressed when it would empty
// the word — else substitute within the stacked substitution masses, at most
// one change per word). Counts events the way extraction defines rates:
// numerator per character occurrence on the clean side.
struct SimCounts {
    std::map<char32_t, std::uint64_t> freq;
    std::map<char32_t, std::uint64_t> del;
    std::map<std::pair<char32_t, char32_t>, std::uint64_t> sub;
};

SimCounts simulate_protocol(const std::vector<Sentence>& corpus,
                            const ErrorModel& model, std::uint64_t seed) {
    struct Ev {
        double p_del = 0.0;
        std::vector<std::pair<char32_t, double>> sub_cum;
        double total = 0.0;
    };
    std::map<char32_t, Ev> events;
    for (const auto& [c, p] : model.p_del) events[c].p_del = p;
    for (const auto& [key, p] : model.p_sub)
        events[key.first].sub_cum.emplace_back(key.second, p);
    for (auto& [c, ev] : events) {
        double cum = ev.p_del;
        for (auto& [x, mass] : ev.sub_cum) {
            cum += mass;
            mass = cum;
        }
        ev.total = cum;
    }

    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SimCounts counts;
    for (const Sentence& s : corpus) {
        for (const std::u32string& word : split_words(s)) {
            bool changed = false;
            for (std::size_t k = 0; k < word.size(); ++k) {
                const char32_t c = word[k];
                ++counts.freq[c];
                if (changed) continue;
                const auto it = events.find(c);
                if (it == events.end()) continue;
                const Ev& ev = it->second;
                if (ev.total <= 0.0) continue;
                const double u = unif(gen);
                if (u < ev.p_del) {
                    if (word.size() > 1) {  // deleting the only char is suppressed
                        ++counts.del[c];
                        changed = true;
                    }
                } else if (u < ev.total) {
                    for (const auto& [x, cum] : ev.sub_cum) {
                        if (u < cum) {
                            ++counts.sub[{c, x}];
                            changed = true;
                            break;
                        }
                    }
                }
            }
        }
    }
    return counts;
}

Outcome ac2() {
    ErrorModel model;
    model.p_del = {{U'a', 0.03}, {U'b', 0.02}, {U'c', 0.01}, {U'd', 0.04}};
    model.p_sub = {{{U'a', U'b'}, 0.02}, {{U'a', U'e'}, 0.01},
                   {{U'b', U'c'}, 0.03}, {{U'c', U'f'}, 0.05},
                   {{U'e', U'a'}, 0.04}, {{U'f', U'b'}, 0.02}};

    std::mt19937_64 gen(31337);
    std::vector<Sentence> corpus;
    corpus.reserve(100000);
    const std::u32string alphabet = U"abcdef";
    for (std::size_t i = 0; i < 100000; ++i) {
        Sentence s;
        for (int w = 0; w < 10; ++w) {
            if (w) s += U' ';
            s += testutil::random_word(gen, 4, 8, alphabet);
        }
        corpus.push_back(std::move(s));
    }

    CorruptionConfig cfg;
    cfg.seed = 12345;
    const auto pairs = generate_dataset(corpus, model, cfg);

    ParallelCorpus parallel;
    parallel.pairs.reserve(pairs.size());
    for (const auto& p : pairs) parallel.pairs.emplace_back(p.clean, p.noisy);
    const ErrorModel recovered = estimate(extract_counts(parallel), 0.0);
    if (!recovered.p_ins.empty())
        return fail("recovered spurious insertions");

    // Adjusted targets from an independent simulation of the same protocol
    // with a different generator and seed.
    const SimCounts sim = simulate_protocol(corpus, model, 777);

    const auto tolerance = [](double target) {
        return std::max(0.2 * target, 0.005);
    };
    for (char32_t c : alphabet) {
        const auto freq_it = recovered.char_freq.find(c);
        const std::uint64_t freq =
            freq_it == recovered.char_freq.end() ? 0 : freq_it->second;
        if (freq < 10000)
            return fail("fixture character frequency below 10000");
        const auto sim_freq = sim.freq.find(c);
        if (sim_freq == sim.freq.end() || sim_freq->second != freq)
            return fail("simulation character frequency disagrees with extraction");

        const auto del_it = sim.del.find(c);
        const double del_target =
            del_it == sim.del.end()
                ? 0.0
                : static_cast<double>(del_it->second) / static_cast<double>(freq);
        const double del_rec = recovered.del_prob(c);
        if (std::fabs(del_rec - del_target) > tolerance(del_target))
            return fail(fmt("p_del off: recovered %.5f target %.5f", del_rec,
                            del_target) + " for char " +
                        unicode::encode_utf8(std::u32string(1, c)));

        std::set<char32_t> xs;
        for (const auto& [key, n] : sim.sub)
            if (key.first == c && n > 0) xs.insert(key.second);
        for (const auto& [key, p] : recovered.p_sub)
            if (key.first == c && p > 0) xs.insert(key.second);
        for (char32_t x : xs) {
            const auto sub_it = sim.sub.find({c, x});
            const double target =
                sub_it == sim.sub.end()
                    ? 0.0
                    : static_cast<double>(sub_it->second) / static_cast<double>(freq);
            const double rec = recovered.sub_prob(c, x);
            if (std::fabs(rec - target) > tolerance(target))
                return fail(fmt("p_sub off: recovered %.5f target %.5f", rec,
                                target) + " for pair " +
                            unicode::encode_utf8(std::u32string{c, x}));
        }
    }
    return {};
}

// --- AC-3: corruption respects the one-change-per-word protocol ------------

Outcome ac3() {
    ErrorModel model;
    model.p_del = {{U'a', 0.03}, {U'b', 0.02}, {U'c', 0.01}, {U'd', 0.04}};
    model.p_sub = {{{U'a', U'b'}, 0.02}, {{U'a', U'e'}, 0.01},
                   {{U'b', U'c'}, 0.03}, {{U'c', U'f'}, 0.05},
                   {{U'e', U'a'}, 0.04}, {{U'f', U'b'}, 0.02}};
    model.p_ins = {{{U'e', U'a', U'b'}, 0.05}, {{U'f', kBoundary, U'a'}, 0.04}};

    std::mt19937_64 gen(2024);
    std::vector<Sentence> corpus;
    corpus.reserve(100000);
    for (std::size_t i = 0; i < 100000; ++i)
        corpus.push_back(testutil::random_sentence(gen, 7, 7, U"abcdef"));

    CorruptionConfig cfg;
    cfg.seed = 98765;
    const auto pairs = generate_dataset(corpus, model, cfg);
    if (pairs.size() != corpus.size())
        return fail("pair count mismatch");

    std::uint64_t words = 0, changed = 0, insertions = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (pairs[i].clean != corpus[i]) return fail("clean side altered");
        const auto clean_words = split_words(pairs[i].clean);
        const auto noisy_words = split_words(pairs[i].noisy);
        if (clean_words.size() != noisy_words.size())
            return fail("word count changed at sentence " + std::to_string(i));
        for (std::size_t w = 0; w < clean_words.size(); ++w) {
            ++words;
            if (noisy_words[w].empty()) return fail("word emptied");
            const std::size_t d =
                testutil::oracle_distance(clean_words[w], noisy_words[w]);
            if (d > 1)
                return fail("word distance " + std::to_string(d) +
                            " exceeds 1 at sentence " + std::to_string(i));
            if (d == 1) ++changed;
            if (noisy_words[w].size() > clean_words[w].size()) ++insertions;
        }
    }
    if (words != 700000) return fail("fixture word count drifted");
    if (changed < words / 100) return fail("corruption produced too few edits");
    if (insertions == 0) return fail("insertion channel never fired");
    return {};
}

// --- AC-4: tokenizer limits and round-trip under dropout -------------------

Outcome ac4() {
    std::mt19937_64 gen(555);
    const auto lexicon = make_lexicon(gen, 12000, 3, 12, U"abcdefghij");
    std::vector<double> weights(lexicon.size());
    for (std::size_t r = 0; r < weights.size(); ++r)
        weights[r] = 1.0 / static_cast<double>(r + 1);
    std::discrete_distribution<std::size_t> zipf(weights.begin(), weights.end());

    std::map<std::u32string, std::uint64_t> freqs;
    std::vector<Sentence> sample;  // held out for encoding checks
    for (std::size_t i = 0; i < 100000; ++i) {
        for (int w = 0; w < 8; ++w) ++freqs[lexicon[zipf(gen)]];
    }

    // 1000 probe sentences mixing lexicon words, random words over a wider
    // alphabet, and characters the training corpus never saw.
    const std::u32string probe_alphabet = U"abcdefghijzq";
    const std::u32string exotics = U"éµ\U0001F600";
    std::uniform_int_distribution<std::size_t> pick(0, lexicon.size() - 1);
    std::uniform_int_distribution<int> flavor(0, 3);
    std::uniform_int_distribution<std::size_t> exotic(0, exotics.size() - 1);
    sample.reserve(1000);
    for (int i = 0; i < 1000; ++i) {
        Sentence s;
        for (int w = 0; w < 5; ++w) {
            if (w) s += U' ';
            switch (flavor(gen)) {
                case 0: s += lexicon[pick(gen)]; break;
                case 1: s += testutil::random_word(gen, 1, 10, probe_alphabet); break;
                case 2: {
                    std::u32string word = lexicon[pick(gen)];
                    word.insert(word.size() / 2, 1, exotics[exotic(gen)]);
                    s += word;
                    break;
                }
                default:
                    s += testutil::random_word(gen, 1, 6, probe_alphabet);
                    s += exotics[exotic(gen)];
                    break;
            }
        }
        sample.push_back(std::move(s));
    }

    const std::array<std::size_t, 4> vocab_sizes{500, 2000, 8000, 25000};
    const std::array<std::size_t, 4> token_lens{1, 4, 8, 16};
    const std::array<double, 3> dropouts{0.0, 0.1, 1.0};
    std::size_t cell = 0;
    for (std::size_t v : vocab_sizes) {
        for (std::size_t l : token_lens) {
            ++cell;
            const BpeModel bpe = train_bpe(freqs, v, l);
            if (bpe.vocab.size() > v)
                return fail(fmt("vocab %.0f over budget %.0f",
                                static_cast<double>(bpe.vocab.size()),
                                static_cast<double>(v)));
            for (std::size_t id = 1; id < bpe.vocab.size(); ++id)
                if (bpe.vocab[id].size() > l)
                    return fail("piece longer than the length limit");
            if (!bpe.vocab.empty() && !bpe.vocab[0].empty())
                return fail("id 0 is not the boundary marker");

            for (double d : dropouts) {
                for (std::size_t i = 0; i < sample.size(); ++i) {
                    rng::Stream stream(1000 + cell, i);
                    const TokenSeq seq = encode(bpe, sample[i], d, &stream);
                    if (decode(bpe, seq) != sample[i])
                        return fail(fmt("round-trip failed at cell V=%.0f L=%.0f",
                                        static_cast<double>(v),
                                        static_cast<double>(l)));
                }
            }
        }
    }
    return {};
}

// --- AC-5: both correctors reduce WER by at least 10% relative -------------

Outcome ac5() {
    std::mt19937_64 gen(7171);
    const auto lexicon = make_lexicon(gen, 300, 3, 9, U"abcdefghijklmnopqrstuvwxyz");
    const auto extraction_clean = lexicon_corpus(gen, lexicon, 3000, 6, 10);
    const auto train_clean = lexicon_corpus(gen, lexicon, 3000, 6, 10);
    const auto test_clean = lexicon_corpus(gen, lexicon, 600, 6, 10);

    const ParallelCorpus labeled = perturbed_pairs(extraction_clean, 9090);
    const ErrorModel model = estimate(extract_counts(labeled), 0.0);

    CorruptionConfig train_cfg;
    train_cfg.seed = 101;
    const auto train_pairs = generate_dataset(train_clean, model, train_cfg);
    CorruptionConfig test_cfg;
    test_cfg.seed = 202;
    const auto test_pairs = generate_dataset(test_clean, model, test_cfg);

    std::vector<Sentence> test_noisy;
    test_noisy.reserve(test_pairs.size());
    for (const auto& p : test_pairs) test_noisy.push_back(p.noisy);
    const double before = wer(test_clean, test_noisy).wer;
    if (before <= 0.05) return fail("fixture produced too little noise");

    CorrectorConfig cc;
    const BpeModel bpe = train_bpe(train_clean, 2000, 8);
    const TokenMemory memory = build_memory(train_pairs, bpe, cc);
    std::vector<Sentence> mem_out;
    mem_out.reserve(test_noisy.size());
    for (const Sentence& s : test_noisy)
        mem_out.push_back(correct_memory(s, memory, bpe));
    const double after_memory = wer(test_clean, mem_out).wer;

    const CharLm lm = train_ngram(train_clean, 5);
    std::vector<Sentence> chan_out;
    chan_out.reserve(test_noisy.size());
    for (const Sentence& s : test_noisy)
        chan_out.push_back(correct_channel(s, model, lm, cc));
    const double after_channel = wer(test_clean, chan_out).wer;

    if (after_memory > 0.9 * before)
        return fail(fmt("memory corrector: %.4f not <= 0.9 * %.4f", after_memory,
                        before));
    if (after_channel > 0.9 * before)
        return fail(fmt("channel corrector: %.4f not <= 0.9 * %.4f", after_channel,
                        before));
    return {};
}

// --- AC-6: matched noising beats the random baseline ------------------------

Outcome ac6() {
    ErrorModel model;
    model.p_sub = {{{U'a', U'b'}, 0.05}, {{U'b', U'a'}, 0.05},
                   {{U'c', U'd'}, 0.06}, {{U'd', U'c'}, 0.04},
                   {{U'e', U'f'}, 0.07}, {{U'f', U'e'}, 0.05},
                   {{U'g', U'h'}, 0.04}, {{U'h', U'g'}, 0.06}};
    if (model.p_sub.size() > 10 || !model.p_del.empty() || !model.p_ins.empty())
        return fail("fixture model mass is not concentrated");

    std::mt19937_64 gen(6262);
    const auto lexicon = make_lexicon(gen, 400, 3, 9, U"abcdefgh");
    const auto train_raw = lexicon_corpus(gen, lexicon, 4000, 6, 10);
    const auto test_clean = lexicon_corpus(gen, lexicon, 800, 6, 10);

    NoisingConfig cfg;
    cfg.vocab_size = 2000;
    cfg.max_token_len = 8;
    cfg.bpe_dropout = 0.1;
    cfg.seed = 7;
    const auto rows = compare_noising(train_raw, model, test_clean, cfg);

    if (rows.size() != 3 || rows[0].method != "distribution_matched" ||
        rows[1].method != "random_baseline")
        return fail("unexpected row layout");
    if (rows[0].wer_before <= 0.0) return fail("fixture produced no noise");
    if (rows[1].wer_after <= 0.0)
        return fail("random baseline reached zero WER, no margin to compare");
    if (rows[0].wer_after > 0.95 * rows[1].wer_after)
        return fail(fmt("matched %.4f not >=5%% below random %.4f",
                        rows[0].wer_after, rows[1].wer_after));
    return {};
}

// --- AC-7: model error shrinks with extraction data ------------------------

Outcome ac7() {
    std::mt19937_64 gen(8383);
    const auto lexicon = make_lexicon(gen, 200, 4, 10, U"abcdefghijklmnopqrstuvwxyz");
    const auto extraction_clean = lexicon_corpus(gen, lexicon, 50000, 6, 10);
    const ParallelCorpus labeled = perturbed_pairs(extraction_clean, 4545);

    AblationConfig cfg;
    cfg.alpha = 0.0;
    cfg.raw = lexicon_corpus(gen, lexicon, 300, 6, 10);
    cfg.test_clean = lexicon_corpus(gen, lexicon, 100, 6, 10);
    cfg.vocab_size = 500;
    cfg.max_token_len = 8;
    cfg.seed = 11;

    const std::vector<double> fractions{0.01, 0.05, 0.1, 0.25, 1.0};
    const auto records = ablate_data_amount(labeled, fractions, cfg);
    if (records.size() != fractions.size()) return fail("record count mismatch");
    if (records.back().model_l1 != 0.0)
        return fail("full-data model should match itself exactly");
    if (records.front().model_l1 <= 0.0)
        return fail("smallest fraction should disagree with the full model");

    int inversions = 0;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const double prev = records[i - 1].model_l1;
        const double cur = records[i].model_l1;
        if (cur > prev + 1e-12) {
            ++inversions;
            if (cur > 1.1 * prev)
                return fail(fmt("inversion %.5f -> %.5f exceeds 10%%", prev, cur));
        }
    }
    if (inversions > 1)
        return fail("more than one inversion in the L1 sequence");
    return {};
}

// --- AC-8: CLI pipeline determinism across reruns and thread counts --------

Outcome ac8() {
    std::mt19937_64 gen(9494);
    const auto lexicon = make_lexicon(gen, 100, 3, 8, U"abcdefghijklmnopqrstuvwxyz");
    const auto ref = lexicon_corpus(gen, lexicon, 200, 5, 9);
    const auto clean = lexicon_corpus(gen, lexicon, 300, 5, 9);
    const auto test_clean = lexicon_corpus(gen, lexicon, 80, 5, 9);

    std::mt19937_64 noise(1717);
    std::vector<Sentence> hyp;
    hyp.reserve(ref.size());
    for (const Sentence& s : ref) hyp.push_back(perturb_sentence(s, noise));

    const std::string ref_text = join_lines(ref);
    const std::string hyp_text = join_lines(hyp);
    const std::string clean_text = join_lines(clean);
    const std::string test_text = join_lines(test_clean);

    const std::vector<std::string> outputs{
        "model.json", "train.tsv", "test.tsv",  "bpe.json",
        "lm.json",    "mem.json",  "memcor.txt", "chancor.txt",
        "sweep.csv",  "cmp.csv",   "abl.csv"};

    const auto run_pipeline = [&](const std::filesystem::path& dir,
                                  int threads) -> std::string {
        testutil::write_file(dir / "ref.txt", ref_text);
        testutil::write_file(dir / "hyp.txt", hyp_text);
        testutil::write_file(dir / "clean.txt", clean_text);
        testutil::write_file(dir / "test_clean.txt", test_text);
        const std::string t = std::to_string(threads);
        const std::vector<std::string> steps{
            "extract --ref ref.txt --hyp hyp.txt --alpha 0.01 --out model.json",
            "corrupt --model model.json --in clean.txt --out train.tsv --seed 17"
            " --threads " + t,
            "corrupt --model model.json --in test_clean.txt --out test.tsv"
            " --seed 18 --threads " + t,
            "train-bpe --in clean.txt --vocab-size 200 --max-token-len 8"
            " --out bpe.json",
            "train-lm --in clean.txt --order 3 --out lm.json",
            "build-memory --in train.tsv --bpe bpe.json --out mem.json --seed 17",
            "correct --mode memory --memory mem.json --bpe bpe.json"
            " --in noisy.txt --out memcor.txt --threads " + t,
            "correct --mode channel --model model.json --lm lm.json"
            " --in noisy.txt --out chancor.txt --beam 8 --lambda 1.0 --threads " + t,
            "sweep --grid 64:4,128:8 --train train.tsv --test test.tsv"
            " --out sweep.csv --threads " + t,
            "compare-noising --model model.json --train clean.txt"
            " --test test_clean.txt --out cmp.csv --vocab-size 128"
            " --max-token-len 8 --dropout 0.1 --seed 17 --threads " + t,
            "ablate --ref ref.txt --hyp hyp.txt --raw clean.txt"
            " --test test_clean.txt --fractions 0.5,1.0 --alpha 0.01"
            " --vocab-size 128 --max-token-len 8 --seed 17 --out abl.csv"
            " --threads " + t};
        for (const std::string& step : steps) {
            if (step.rfind("correct ", 0) == 0 &&
                !std::filesystem::exists(dir / "noisy.txt")) {
                // derive plain noisy sentences from the corrupted test TSV
                std::string noisy;
                for (const std::string& line :
                     read_lines_file((dir / "test.tsv").string())) {
                    const std::size_t tab = line.find('\t');
                    noisy += line.substr(tab + 1);
                    noisy += '\n';
                }
                testutil::write_file(dir / "noisy.txt", noisy);
            }
            const auto res = testutil::run_cli(step, dir);
            if (res.exit_code != 0)
                return "step failed (" + step.substr(0, step.find(' ')) +
                       "): " + res.output;
        }
        return "";
    };

    const auto dir_a = testutil::temp_dir("ac8a");
    const auto dir_b = testutil::temp_dir("ac8b");
    const auto dir_c = testutil::temp_dir("ac8c");
    struct Cleanup {
        std::vector<std::filesystem::path> dirs;
        ~Cleanup() {
            for (const auto& d : dirs) {
                std::error_code ec;
                std::filesystem::remove_all(d, ec);
            }
        }
    } cleanup{{dir_a, dir_b, dir_c}};

    if (std::string err = run_pipeline(dir_a, 1); !err.empty()) return fail(err);
    if (std::string err = run_pipeline(dir_b, 1); !err.empty()) return fail(err);
    if (std::string err = run_pipeline(dir_c, 8); !err.empty()) return fail(err);

    for (const std::string& name : outputs) {
        const std::string a = testutil::read_file(dir_a / name);
        if (a.empty()) return fail(name + " is empty");
        if (a != testutil::read_file(dir_b / name))
            return fail(name + " differs between identical reruns");
        if (a != testutil::read_file(dir_c / name))
            return fail(name + " differs between 1 and 8 threads");
    }
    return {};
}

// --- AC-9: LM distributions are normalized and total ------------------------

Outcome ac9() {
    std::mt19937_64 gen(1212);
    std::vector<Sentence> corpus;
    corpus.reserve(60);
    for (int i = 0; i < 60; ++i)
        corpus.push_back(testutil::random_sentence(gen, 3, 7, U"abcde"));
    const CharLm lm = train_ngram(corpus, 4);

    const std::u32string pool = U"abcdexyz";
    std::uniform_int_distribution<std::size_t> len(0, 3);
    std::uniform_int_distribution<std::size_t> chr(0, pool.size() - 1);
    for (int i = 0; i < 100; ++i) {
        std::u32string ctx;
        const std::size_t n = len(gen);
        for (std::size_t k = 0; k < n; ++k) ctx += pool[chr(gen)];
        if (i % 5 == 0) ctx.insert(0, std::u32string(1, kBos));
        double sum = 0.0;
        for (char32_t w : lm.alphabet) sum += lm.prob(w, ctx);
        if (std::fabs(sum - 1.0) > 1e-9)
            return fail(fmt("context sum %.12f is off by more than 1e-9", sum));
    }

    const std::vector<Sentence> adversarial{
        U"", U"zzzzzz", U"\U0001F600\U0001F680", std::u32string(2000, U'q'),
        U"a b c", std::u32string(1, kBos) + U"ab"};
    for (const Sentence& s : adversarial)
        if (!std::isfinite(lm.log_prob(s)))
            return fail("non-finite log probability on adversarial input");
    return {};
}

// --- driver ------------------------------------------------------------------

struct Criterion {
    const char* name;
    Outcome (*fn)();
    double budget_seconds;
};

constexpr Criterion kCriteria[] = {
    {"AC-1", ac1, 60.0},  {"AC-2", ac2, 300.0}, {"AC-3", ac3, 600.0},
    {"AC-4", ac4, 600.0}, {"AC-5", ac5, 600.0}, {"AC-6", ac6, 600.0},
    {"AC-7", ac7, 600.0}, {"AC-8", ac8, 600.0}, {"AC-9", ac9, 600.0},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<const Criterion*> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string want = argv[i];
        const Criterion* found = nullptr;
        for (const Criterion& c : kCriteria)
            if (want == c.name) found = &c;
        if (!found) {
            std::fprintf(stderr, "unknown criterion: %s\n", want.c_str());
            return 2;
        }
        selected.push_back(found);
    }
    if (selected.empty())
        for (const Criterion& c : kCriteria) selected.push_back(&c);

    bool all_pass = true;
    for (const Criterion* c : selected) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c->fn();
        } catch (const std::exception& e) {
            outcome = fail(std::string("unexpected exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        if (outcome.pass && secs > c->budget_seconds)
            outcome = fail(fmt("runtime %.1fs exceeds %.0fs budget", secs,
                               c->budget_seconds));
        if (outcome.pass)
            std::printf("%s PASS (%.1fs)\n", c->name, secs);
        else
            std::printf("%s FAIL: %s (%.1fs)\n", c->name, outcome.reason.c_str(),
                        secs);
        std::fflush(stdout);
        if (!outcome.pass) all_pass = false;
    }
    return all_pass ? 0 : 1;
}
