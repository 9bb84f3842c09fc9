#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <unordered_map>
#include <vector>

#include "teco/corpus.hpp"
#include "teco/errormodel.hpp"
#include "teco/parallel.hpp"
#include "teco/rng.hpp"

namespace teco {

enum class CorruptMode { DistributionMatched, RandomBaseline };

namespace detail {

// One corruption draw, addressed by (seed; sentence, pass, clean position).
inline double corrupt_draw(std::uint64_t seed, std::uint64_t sentence,
                           std::uint32_t pass, std::size_t position) {
    return rng::uniform_at(seed, static_cast<std::uint32_t>(sentence),
                           static_cast<std::uint32_t>(sentence >> 32), pass,
                           static_cast<std::uint32_t>(position));
}

}  // namespace detail

struct CorruptionConfig {
    std::uint64_t seed = 0;
    std::size_t max_changes_per_word = 1;
    CorruptMode mode = CorruptMode::DistributionMatched;
    double random_rate = 0.0;                 // RandomBaseline only
    std::vector<char32_t> inventory;          // RandomBaseline alphabet, sorted
};

struct SyntheticPair {
    Sentence clean;
    Sentence noisy;
};

// Sorted non-space character inventory of a corpus (random-baseline alphabet).
inline std::vector<char32_t> corpus_inventory(const std::vector<Sentence>& corpus) {
    std::set<char32_t> chars;
    for (const Sentence& s : corpus)
        for (char32_t c : s)
            if (c != U' ') chars.insert(c);
    return {chars.begin(), chars.end()};
}

// Precomputed cumulative tables for the per-character event distribution and
// the per-context insertion masses. Built once per model, shared across
// sentences (read-only).
class CorruptionSampler {
  public:
    explicit CorruptionSampler(const ErrorModel& model) {
        for (const auto& [c, p] : model.p_del) events_[c].p_del = p;
        for (const auto& [key, p] : model.p_sub) {
            CharEvents& ev = events_[key.first];
            ev.sub_cum.emplace_back(key.second, 0.0);
            ev.sub_cum.back().second = p;  // raw mass, prefix-summed below
        }
        for (auto& [c, ev] : events_) {
            double cum = ev.p_del;
            for (auto& [x, mass] : ev.sub_cum) {
                cum += mass;
                mass = cum;
            }
            ev.edit_total = cum;
        }
        for (const auto& [key, p] : model.p_ins) {
            InsSlot& slot = ins_[context_key(key[1], key[2])];
            slot.total += p;
            slot.cum.emplace_back(key[0], slot.total);
        }
    }

    // Default (distribution-matched) corruption of one sentence. All draws are
    // keyed by (seed; sentence index, pass, clean-sentence position), so the
    // output is independent of processing order and thread count. Pass 1 scans
    // characters (delete/substitute); pass 2, only when pass 1 changed
    // nothing, scans insertion slots. The first triggered edit wins, up to
    // max_changes_per_word. Spaces are never touched, and a deletion that
    // would empty a word is suppressed to keep the word count stable.
    SyntheticPair corrupt(const Sentence& sentence, const CorruptionConfig& config,
                          std::uint64_t sentence_index) const {
        SyntheticPair pair{sentence, {}};
        Sentence& out = pair.noisy;
        out.reserve(sentence.size() + 2);

        const std::size_t cap = std::max<std::size_t>(1, config.max_changes_per_word);
        std::size_t pos = 0;
        const std::size_t n = sentence.size();
        while (pos < n) {
            if (sentence[pos] == U' ') {
                out.push_back(U' ');
                ++pos;
                continue;
            }
            std::size_t end = pos;
            while (end < n && sentence[end] != U' ') ++end;
            corrupt_word(sentence, pos, end, cap, config.seed, sentence_index, out);
            pos = end;
        }
        return pair;
    }

  private:
    struct CharEvents {
        double p_del = 0.0;
        double edit_total = 0.0;
        std::vector<std::pair<char32_t, double>> sub_cum;  // (x, cumulative)
    };
    struct InsSlot {
        double total = 0.0;
        std::vector<std::pair<char32_t, double>> cum;  // (c, cumulative)
    };

    static std::uint64_t context_key(char32_t x, char32_t y) {
        return (static_cast<std::uint64_t>(x) << 32) | y;
    }

    void corrupt_word(const Sentence& s, std::size_t begin, std::size_t end,
                      std::size_t cap, std::uint64_t seed,
                      std::uint64_t sentence_index, Sentence& out) const {
        const std::size_t len = end - begin;
        const std::size_t base = out.size();
        std::size_t changes = 0;

        for (std::size_t k = 0; k < len; ++k) {
            const char32_t c = s[begin + k];
            if (changes >= cap) {
                out.push_back(c);
                continue;
            }
            auto it = events_.find(c);
            if (it == events_.end()) {
                out.push_back(c);
                continue;
            }
            const CharEvents& ev = it->second;
            const double u = detail::corrupt_draw(seed, sentence_index, 1, begin + k);
            if (u < ev.p_del) {
                const bool would_empty = out.size() == base && k + 1 == len;
                if (would_empty) {
                    out.push_back(c);
                } else {
                    ++changes;  // char dropped
                }
            } else if (u < ev.edit_total) {
                for (const auto& [x, cum] : ev.sub_cum) {
                    if (u < cum) {
                        out.push_back(x);
                        break;
                    }
                }
                ++changes;
            } else {
                out.push_back(c);
            }
        }

        if (changes != 0 || ins_.empty()) return;

        // Insertion pass over the word as it stands (identical to the clean
        // word here, since pass 1 changed nothing).
        const std::u32string_view word(s.data() + begin, len);
        Sentence rebuilt;
        rebuilt.reserve(len + cap);
        for (std::size_t slot = 0; slot <= len; ++slot) {
            if (changes < cap) {
                const char32_t x = slot > 0 ? word[slot - 1] : kBoundary;
                const char32_t y = slot < len ? word[slot] : kBoundary;
                auto it = ins_.find(context_key(x, y));
                if (it != ins_.end()) {
                    const InsSlot& dist = it->second;
                    const double u =
                        detail::corrupt_draw(seed, sentence_index, 2, begin + slot);
                    if (u < std::min(dist.total, 1.0)) {
                        for (const auto& [c, cum] : dist.cum) {
                            if (u < cum) {
                                rebuilt.push_back(c);
                                break;
                            }
                        }
                        ++changes;
                    }
                }
            }
            if (slot < len) rebuilt.push_back(word[slot]);
        }
        out.resize(base);
        out.append(rebuilt);
    }

    std::unordered_map<char32_t, CharEvents> events_;
    std::unordered_map<std::uint64_t, InsSlot> ins_;
};

inline SyntheticPair corrupt_sentence(const Sentence& sentence,
                                      const ErrorModel& model,
                                      const CorruptionConfig& config,
                                      std::uint64_t sentence_index) {
    return CorruptionSampler(model).corrupt(sentence, config, sentence_index);
}

// Random-noise baseline: per word, with probability random_rate apply exactly
// one edit of uniformly chosen kind, position, and character. Deletion is
// offered only for words of length >= 2 and substitution never picks the
// original character, so the word count and the one-change cap hold exactly.
inline SyntheticPair corrupt_random(const Sentence& sentence,
                                    const CorruptionConfig& config,
                                    std::uint64_t sentence_index) {
    SyntheticPair pair{sentence, {}};
    Sentence& out = pair.noisy;
    out.reserve(sentence.size() + 2);
    const std::vector<char32_t>& inv = config.inventory;

    std::size_t pos = 0;
    const std::size_t n = sentence.size();
    while (pos < n) {
        if (sentence[pos] == U' ') {
            out.push_back(U' ');
            ++pos;
            continue;
        }
        std::size_t end = pos;
        while (end < n && sentence[end] != U' ') ++end;
        const std::size_t len = end - pos;
        std::u32string word(sentence, pos, len);

        const double u_rate = detail::corrupt_draw(config.seed, sentence_index, 3, pos);
        if (u_rate < config.random_rate && !inv.empty()) {
            const bool can_del = len >= 2;
            const std::size_t kinds = can_del ? 3 : 2;
            const double u_kind = detail::corrupt_draw(config.seed, sentence_index, 4, pos);
            std::size_t kind = std::min<std::size_t>(
                kinds - 1, static_cast<std::size_t>(u_kind * kinds));
            if (!can_del) ++kind;  // 0=delete only when available
            const double u_pos = detail::corrupt_draw(config.seed, sentence_index, 5, pos);
            const double u_char = detail::corrupt_draw(config.seed, sentence_index, 6, pos);
            if (kind == 0) {
                const std::size_t at = std::min<std::size_t>(
                    len - 1, static_cast<std::size_t>(u_pos * len));
                word.erase(at, 1);
            } else if (kind == 1) {
                const std::size_t at = std::min<std::size_t>(
                    len - 1, static_cast<std::size_t>(u_pos * len));
                const char32_t orig = word[at];
                auto lo = std::lower_bound(inv.begin(), inv.end(), orig);
                const bool present = lo != inv.end() && *lo == orig;
                const std::size_t choices = inv.size() - (present ? 1 : 0);
                if (choices > 0) {
                    std::size_t j = std::min<std::size_t>(
                        choices - 1, static_cast<std::size_t>(u_char * choices));
                    if (present &&
                        j >= static_cast<std::size_t>(lo - inv.begin()))
                        ++j;
                    word[at] = inv[j];
                }
            } else {
                const std::size_t at = std::min<std::size_t>(
                    len, static_cast<std::size_t>(u_pos * (len + 1)));
                const char32_t c = inv[std::min<std::size_t>(
                    inv.size() - 1, static_cast<std::size_t>(u_char * inv.size()))];
                word.insert(word.begin() + static_cast<std::ptrdiff_t>(at), c);
            }
        }
        out.append(word);
        pos = end;
    }
    return pair;
}

// Corrupts every sentence; pair i depends only on (seed, sentence i), so any
// parallel schedule yields identical output.
inline std::vector<SyntheticPair> generate_dataset(
    const std::vector<Sentence>& raw, const ErrorModel& model,
    const CorruptionConfig& config, int threads = 1) {
    std::vector<SyntheticPair> pairs(raw.size());
    if (config.mode == CorruptMode::RandomBaseline) {
        CorruptionConfig local = config;
        if (local.inventory.empty()) local.inventory = corpus_inventory(raw);
        parallel_for(raw.size(), threads, [&](std::size_t i) {
            pairs[i] = corrupt_random(raw[i], local, i);
        });
    } else {
        const CorruptionSampler sampler(model);
        parallel_for(raw.size(), threads, [&](std::size_t i) {
            pairs[i] = sampler.corrupt(raw[i], config, i);
        });
    }
    return pairs;
}

}  // namespace teco
