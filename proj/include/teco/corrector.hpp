#pragma once

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "teco/bpe.hpp"
#include "teco/charlm.hpp"
#include "teco/corrupt.hpp"
#include "teco/errormodel.hpp"
#include "teco/jsonio.hpp"

namespace teco {

struct CorrectorConfig {
    std::size_t beam_width = 8;
    double lambda = 1.0;           // LM weight
    std::uint64_t min_count = 3;   // memory acceptance thresholds
    double min_ratio = 0.5;
    std::size_t token_span = 3;    // max noisy tokens per token_table key
    double memory_dropout = 0.0;   // BPE dropout while building the memory
    std::uint64_t seed = 0;        // drives memory_dropout draws
};

// Lookup tables from noisy words (and short noisy token spans) to observed
// clean replacements, learned from synthetic parallel data.
struct TokenMemory {
    std::uint64_t bpe_ref = 0;  // fingerprint of the tokenizer used
    std::uint64_t min_count = 3;
    double min_ratio = 0.5;
    std::size_t token_span = 3;
    std::map<std::u32string, std::map<std::u32string, std::uint64_t>> word_table;
    std::map<std::u32string, std::map<std::u32string, std::uint64_t>> token_table;

    bool operator==(const TokenMemory&) const = default;
};

namespace detail {

// token_table keys: token piece texts joined by U+001F (a control character,
// impossible in normalized text). Literal elements contribute their char.
inline constexpr char32_t kPieceSep = U'\x1f';

inline std::u32string span_key(const BpeModel& model, const TokenSeq& toks,
                               std::size_t begin, std::size_t count) {
    std::u32string key;
    for (std::size_t i = begin; i < begin + count; ++i) {
        if (i > begin) key.push_back(kPieceSep);
        if (toks[i].is_literal())
            key.push_back(toks[i].literal);
        else
            key.append(model.vocab[toks[i].id]);
    }
    return key;
}

inline std::u32string strip_sep(const std::u32string& key) {
    std::u32string out;
    out.reserve(key.size());
    for (char32_t c : key)
        if (c != kPieceSep) out.push_back(c);
    return out;
}

// Argmax clean entry when it clears both thresholds; ties break toward the
// lexicographically smallest clean key (map order).
inline const std::u32string* qualified_best(
    const std::map<std::u32string, std::uint64_t>& options,
    std::uint64_t min_count, double min_ratio) {
    const std::u32string* best = nullptr;
    std::uint64_t best_count = 0, total = 0;
    for (const auto& [clean, count] : options) {
        total += count;
        if (count > best_count) {
            best_count = count;
            best = &clean;
        }
    }
    if (!best || best_count < min_count) return nullptr;
    if (static_cast<double>(best_count) <
        min_ratio * static_cast<double>(total))
        return nullptr;
    return best;
}

}  // namespace detail

// Tallies word-level and token-level replacements from word-aligned pairs.
// Only differing words are recorded; the token table keys noisy spans of at
// most token_span content tokens.
inline TokenMemory build_memory(const std::vector<SyntheticPair>& pairs,
                                const BpeModel& bpe,
                                const CorrectorConfig& config) {
    TokenMemory memory;
    memory.bpe_ref = bpe.fingerprint;
    memory.min_count = config.min_count;
    memory.min_ratio = config.min_ratio;
    memory.token_span = config.token_span;

    TokenSeq noisy_toks, clean_toks;
    for (std::size_t pair_idx = 0; pair_idx < pairs.size(); ++pair_idx) {
        const SyntheticPair& pair = pairs[pair_idx];
        const auto clean_words = split_words(pair.clean);
        const auto noisy_words = split_words(pair.noisy);
        if (clean_words.size() != noisy_words.size()) continue;  // defensive
        rng::Stream stream(config.seed, pair_idx);
        for (std::size_t i = 0; i < clean_words.size(); ++i) {
            if (noisy_words[i] == clean_words[i]) continue;
            ++memory.word_table[noisy_words[i]][clean_words[i]];
            noisy_toks.clear();
            clean_toks.clear();
            detail::encode_word(bpe, noisy_words[i], config.memory_dropout,
                                &stream, noisy_toks);
            detail::encode_word(bpe, clean_words[i], config.memory_dropout,
                                &stream, clean_toks);
            if (noisy_toks.size() <= config.token_span)
                ++memory.token_table[detail::span_key(bpe, noisy_toks, 0,
                                                      noisy_toks.size())]
                                    [detail::span_key(bpe, clean_toks, 0,
                                                      clean_toks.size())];
        }
    }
    return memory;
}

// Per word: exact word-table replacement when thresholds pass; otherwise
// longest-match token-span replacement over the word's encoding; otherwise
// the word is left unchanged. Word count is always preserved.
inline Sentence correct_memory(const Sentence& sentence, const TokenMemory& memory,
                               const BpeModel& bpe) {
    if (bpe.fingerprint != memory.bpe_ref)
        throw Error(ErrKind::ModelMismatch,
                    "memory was built against a different bpe model");

    Sentence out;
    out.reserve(sentence.size());
    TokenSeq toks;
    for (const std::u32string& word : split_words(sentence)) {
        if (!out.empty()) out.push_back(U' ');
        if (auto it = memory.word_table.find(word); it != memory.word_table.end()) {
            if (const std::u32string* best = detail::qualified_best(
                    it->second, memory.min_count, memory.min_ratio)) {
                out.append(*best);
                continue;
            }
        }
        toks.clear();
        detail::encode_word(bpe, word, 0.0, nullptr, toks);
        std::u32string rebuilt;
        bool changed = false;
        std::size_t i = 0;
        while (i < toks.size()) {
            bool replaced = false;
            const std::size_t max_span = std::min(memory.token_span, toks.size() - i);
            for (std::size_t span = max_span; span >= 1; --span) {
                const std::u32string key = detail::span_key(bpe, toks, i, span);
                auto entry = memory.token_table.find(key);
                if (entry == memory.token_table.end()) continue;
                const std::u32string* best = detail::qualified_best(
                    entry->second, memory.min_count, memory.min_ratio);
                if (!best) continue;
                rebuilt.append(detail::strip_sep(*best));
                i += span;
                replaced = true;
                changed = true;
                break;
            }
            if (!replaced) {
                rebuilt.append(detail::strip_sep(detail::span_key(bpe, toks, i, 1)));
                ++i;
            }
        }
        out.append(changed ? rebuilt : word);
    }
    return out;
}

// --- noisy-channel corrector ---

namespace detail {

struct ChannelCandidate {
    std::u32string word;
    double channel_logp;
};

// Reverse index and per-character no-edit terms derived from an ErrorModel.
class ChannelScorer {
  public:
    explicit ChannelScorer(const ErrorModel& model) : model_(&model) {
        for (const auto& [key, p] : model.p_sub)
            if (p > 0) by_target_[key.second].emplace_back(key.first, p);
        for (const auto& [c, p] : model.p_del)
            no_edit_[c] = std::max(0.0, 1.0 - p - model.sub_total(c));
    }

    double no_edit_logp(char32_t c) const {
        auto it = no_edit_.find(c);
        if (it == no_edit_.end()) {
            // No deletion mass; substitutions alone may still be present.
            const double stay = std::max(0.0, 1.0 - model_->sub_total(c));
            return std::log(stay);
        }
        return std::log(it->second);
    }

    // Candidate set for one observed word: identity first (scored by the
    // probability that no edit fired under the corruption sampler), then all
    // single reverse-edits, deduplicated by text keeping the best channel
    // score. Deterministic order: identity, then lexicographic.
    std::vector<ChannelCandidate> candidates(const std::u32string& w) const {
        double identity = 0.0;
        for (char32_t c : w) identity += no_edit_logp(c);

        std::map<std::u32string, double> edits;
        auto offer = [&edits](std::u32string text, double logp) {
            auto [it, fresh] = edits.emplace(std::move(text), logp);
            if (!fresh && logp > it->second) it->second = logp;
        };

        // Re-insert a deleted character c at any position.
        for (const auto& [c, p] : model_->p_del) {
            if (p <= 0) continue;
            const double lp = std::log(p);
            for (std::size_t j = 0; j <= w.size(); ++j) {
                std::u32string cand = w;
                cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(j), c);
                offer(std::move(cand), lp);
            }
        }
        // Revert a substitution c -> w[j].
        for (std::size_t j = 0; j < w.size(); ++j) {
            auto it = by_target_.find(w[j]);
            if (it == by_target_.end()) continue;
            for (const auto& [c, p] : it->second) {
                std::u32string cand = w;
                cand[j] = c;
                offer(std::move(cand), std::log(p));
            }
        }
        // Remove an inserted character (never emptying the word).
        if (w.size() >= 2) {
            for (std::size_t j = 0; j < w.size(); ++j) {
                const char32_t x = j > 0 ? w[j - 1] : kBoundary;
                const char32_t y = j + 1 < w.size() ? w[j + 1] : kBoundary;
                const double p = model_->ins_prob(w[j], x, y);
                if (p <= 0) continue;
                std::u32string cand = w;
                cand.erase(j, 1);
                offer(std::move(cand), std::log(p));
            }
        }

        std::vector<ChannelCandidate> out;
        out.reserve(edits.size() + 1);
        out.push_back({w, identity});
        for (auto& [text, logp] : edits) out.push_back({text, logp});
        return out;
    }

  private:
    const ErrorModel* model_;
    std::map<char32_t, std::vector<std::pair<char32_t, double>>> by_target_;
    std::map<char32_t, double> no_edit_;
};

}  // namespace detail

// Noisy-channel correction: per word, candidates are the identity and all
// single reverse-edits under the error model, scored channel + lambda * LM
// with LM context carried across words by a beam. The identity path always
// survives pruning, so the result never scores below leaving the sentence
// unchanged. With beam_width at least the product of candidate counts the
// search is exhaustive.
inline Sentence correct_channel(const Sentence& sentence, const ErrorModel& model,
                                const CharLm& lm, const CorrectorConfig& config) {
    const auto words = split_words(sentence);
    if (words.empty()) return sentence;

    const detail::ChannelScorer scorer(model);
    const std::size_t ctx_len = static_cast<std::size_t>(lm.order - 1);

    struct State {
        double channel = 0.0;
        double lm = 0.0;
        std::u32string ctx;
        Sentence prefix;
    };
    const auto combined = [&config](const State& s) {
        return s.channel + config.lambda * s.lm;
    };
    const auto extend = [&](const State& st, const std::u32string& text,
                            double channel_lp, bool first_word) {
        State ns;
        ns.channel = st.channel + channel_lp;
        ns.lm = st.lm;
        ns.ctx = st.ctx;
        ns.prefix = st.prefix;
        std::u32string step;
        if (!first_word) step.push_back(U' ');
        step += text;
        for (char32_t c : step) {
            ns.lm += std::log(lm.prob(c, ns.ctx));
            ns.ctx.push_back(c);
            if (ns.ctx.size() > ctx_len) ns.ctx.erase(0, ns.ctx.size() - ctx_len);
        }
        if (!first_word) ns.prefix.push_back(U' ');
        ns.prefix += text;
        return ns;
    };

    State init;
    init.ctx.assign(ctx_len, kBos);
    std::vector<State> beam{init};
    State identity = init;

    for (std::size_t wi = 0; wi < words.size(); ++wi) {
        const auto cands = scorer.candidates(words[wi]);
        const bool first = wi == 0;
        std::vector<State> grown;
        grown.reserve(beam.size() * cands.size());
        for (const State& st : beam)
            for (const auto& cand : cands)
                grown.push_back(extend(st, cand.word, cand.channel_logp, first));
        std::stable_sort(grown.begin(), grown.end(),
                         [&](const State& a, const State& b) {
                             return combined(a) > combined(b);
                         });
        if (grown.size() > config.beam_width) grown.resize(config.beam_width);

        identity = extend(identity, cands.front().word,
                          cands.front().channel_logp, first);
        bool identity_alive = false;
        for (const State& st : grown)
            if (st.prefix == identity.prefix) {
                identity_alive = true;
                break;
            }
        if (!identity_alive) grown.push_back(identity);
        beam = std::move(grown);
    }

    const State* best = nullptr;
    double best_score = -std::numeric_limits<double>::infinity();
    for (const State& st : beam) {
        const double score =
            combined(st) + config.lambda * std::log(lm.prob(kEos, st.ctx));
        if (!best || score > best_score) {
            best = &st;
            best_score = score;
        }
    }
    return best->prefix;
}

// --- memory serialization ---

inline std::string serialize(const TokenMemory& memory) {
    Json doc;
    doc["version"] = 1;
    char ref[17];
    std::snprintf(ref, sizeof(ref), "%016" PRIx64, memory.bpe_ref);
    doc["bpe_ref"] = ref;
    doc["min_count"] = memory.min_count;
    doc["min_ratio"] = fmt12(memory.min_ratio);
    doc["token_span"] = memory.token_span;
    auto table_json = [](const auto& table) {
        Json out = Json::object();
        for (const auto& [noisy, cleans] : table) {
            Json inner = Json::object();
            for (const auto& [clean, count] : cleans)
                inner[encode_utf8(clean)] = count;
            out[encode_utf8(noisy)] = std::move(inner);
        }
        return out;
    };
    doc["word_table"] = table_json(memory.word_table);
    doc["token_table"] = table_json(memory.token_table);
    return doc.dump(2);
}

inline TokenMemory deserialize_memory(const std::string& text) {
    const Json doc = parse_json(text, "token memory");
    require_version(doc, 1, "token memory");
    TokenMemory memory;
    try {
        const std::string ref = doc.at("bpe_ref").get<std::string>();
        memory.bpe_ref = std::strtoull(ref.c_str(), nullptr, 16);
        memory.min_count = doc.at("min_count").get<std::uint64_t>();
        memory.min_ratio = parse12(doc.at("min_ratio").get<std::string>());
        memory.token_span = doc.at("token_span").get<std::size_t>();
        auto read_table = [](const Json& src, auto& table) {
            for (const auto& [noisy, cleans] : src.items()) {
                auto& inner = table[decode_utf8(noisy)];
                for (const auto& [clean, count] : cleans.items())
                    inner[decode_utf8(clean)] = count.template get<std::uint64_t>();
            }
        };
        read_table(doc.at("word_table"), memory.word_table);
        read_table(doc.at("token_table"), memory.token_table);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrKind::MalformedDocument,
                    std::string("token memory: ") + e.what());
    }
    return memory;
}

inline TokenMemory load_memory(const std::string& path) {
    return deserialize_memory(read_text_file(path));
}

}  // namespace teco
