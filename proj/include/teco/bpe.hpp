#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "teco/corpus.hpp"
#include "teco/jsonio.hpp"
#include "teco/rng.hpp"

namespace teco {

// Word-boundary marker: token id 0, the only special. It closes every word in
// an encoded sequence, never participates in merges (training symbols are
// word-internal), and contributes 0 characters to token-length accounting.
inline constexpr std::uint32_t kMarkerId = 0;
inline const std::string kMarkerLabel = "</w>";

struct U32Hash {
    std::size_t operator()(const std::u32string& s) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (char32_t c : s) {
            h ^= static_cast<std::uint32_t>(c);
            h *= 0x100000001b3ull;
        }
        return static_cast<std::size_t>(h);
    }
};

// One element of an encoded sequence: a vocab token id, or a literal
// character for text outside the base inventory (literal != 0).
struct Element {
    std::uint32_t id = 0;
    char32_t literal = 0;

    static Element token(std::uint32_t id) { return {id, 0}; }
    static Element lit(char32_t c) { return {0, c}; }
    bool is_literal() const { return literal != 0; }
    bool operator==(const Element&) const = default;
};

using TokenSeq = std::vector<Element>;

struct BpeModel {
    std::vector<char32_t> base_inventory;  // sorted
    std::vector<std::pair<std::u32string, std::u32string>> merges;
    std::size_t vocab_limit = 0;    // V (counts base + specials + merge products)
    std::size_t max_token_len = 0;  // L, in characters; the marker is exempt

    // Derived on train/load: id 0 is the marker (empty piece), then the base
    // inventory in sorted order, then merge products in merge order.
    std::vector<std::u32string> vocab;
    std::unordered_map<std::u32string, std::uint32_t, U32Hash> piece_to_id;
    struct MergeRule {
        std::uint32_t rank;
        std::uint32_t product;
    };
    std::unordered_map<std::uint64_t, MergeRule> merge_rules;  // (l id, r id)
    std::uint64_t fingerprint = 0;

    std::size_t vocab_size() const { return vocab.size(); }
};

inline std::string serialize(const BpeModel& model);

namespace detail {

inline std::uint64_t pair_key(std::uint32_t l, std::uint32_t r) {
    return (static_cast<std::uint64_t>(l) << 32) | r;
}

// Builds the derived lookup structures; vocab, merges, and the scalar fields
// must already be in place.
inline void finalize_model(BpeModel& model) {
    model.piece_to_id.clear();
    model.piece_to_id.reserve(model.vocab.size());
    for (std::uint32_t id = 1; id < model.vocab.size(); ++id)
        model.piece_to_id.emplace(model.vocab[id], id);
    model.merge_rules.clear();
    for (std::uint32_t rank = 0; rank < model.merges.size(); ++rank) {
        const auto& [left, right] = model.merges[rank];
        const std::uint32_t l = model.piece_to_id.at(left);
        const std::uint32_t r = model.piece_to_id.at(right);
        const std::uint32_t p = model.piece_to_id.at(left + right);
        model.merge_rules.emplace(pair_key(l, r), BpeModel::MergeRule{rank, p});
    }
    model.fingerprint = fnv1a64(serialize(model));
}

// Adjacent-pair bookkeeping for the trainer: live counts, the words each pair
// occurs in (possibly stale; the executor re-checks), and an ordered
// candidate set realizing the tie-break (max count, then lexicographically
// smallest (left piece, right piece)). Only pairs whose merged length fits
// max_token_len are ever indexed.
class PairIndex {
  public:
    PairIndex(const std::vector<std::u32string>* pieces, std::size_t max_len)
        : pieces_(pieces), max_len_(max_len) {}

    bool eligible(std::uint32_t l, std::uint32_t r) const {
        return (*pieces_)[l].size() + (*pieces_)[r].size() <= max_len_;
    }

    void add(std::uint32_t l, std::uint32_t r, std::int64_t freq,
             std::uint32_t word) {
        if (!eligible(l, r)) return;
        const std::uint64_t key = pair_key(l, r);
        bump(key, l, r, freq);
        where_[key].insert(word);
    }

    void sub(std::uint32_t l, std::uint32_t r, std::int64_t freq) {
        if (!eligible(l, r)) return;
        bump(pair_key(l, r), l, r, -freq);
    }

    struct Best {
        std::uint32_t left, right;
        std::int64_t count;
    };

    std::optional<Best> best() const {
        if (cands_.empty()) return std::nullopt;
        const Cand& top = *cands_.begin();
        return Best{top.left, top.right, top.count};
    }

    // Word ids currently indexed for a pair (superset of true occurrences).
    std::vector<std::uint32_t> words_of(std::uint32_t l, std::uint32_t r) const {
        auto it = where_.find(pair_key(l, r));
        if (it == where_.end()) return {};
        std::vector<std::uint32_t> out(it->second.begin(), it->second.end());
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    struct Cand {
        std::int64_t count;
        std::uint32_t left, right;
    };
    struct CandCmp {
        const std::vector<std::u32string>* pieces;
        bool operator()(const Cand& a, const Cand& b) const {
            if (a.count != b.count) return a.count > b.count;
            if (a.left == b.left && a.right == b.right) return false;
            const std::u32string& al = (*pieces)[a.left];
            const std::u32string& bl = (*pieces)[b.left];
            if (al != bl) return al < bl;
            return (*pieces)[a.right] < (*pieces)[b.right];
        }
    };

    void bump(std::uint64_t key, std::uint32_t l, std::uint32_t r,
              std::int64_t delta) {
        auto it = counts_.find(key);
        const std::int64_t old = it == counts_.end() ? 0 : it->second;
        if (old > 0) cands_.erase(Cand{old, l, r});
        const std::int64_t now = old + delta;
        if (now > 0) {
            counts_[key] = now;
            cands_.insert(Cand{now, l, r});
        } else {
            if (it != counts_.end()) counts_.erase(it);
            where_.erase(key);
        }
    }

    const std::vector<std::u32string>* pieces_;
    std::size_t max_len_;
    std::unordered_map<std::uint64_t, std::int64_t> counts_;
    std::unordered_map<std::uint64_t, std::unordered_set<std::uint32_t>> where_;
    std::set<Cand, CandCmp> cands_{CandCmp{pieces_}};
};

}  // namespace detail

// Iteratively merges the most frequent adjacent symbol pair whose product
// stays within max_token_len characters, until the vocabulary budget V
// (base inventory + marker + products) is reached or no eligible pair
// remains. Blocked pairs are skipped, not terminal.
inline BpeModel train_bpe(const std::map<std::u32string, std::uint64_t>& word_freqs,
                          std::size_t V, std::size_t L) {
    BpeModel model;
    model.vocab_limit = V;
    model.max_token_len = L;

    std::set<char32_t> chars;
    for (const auto& [word, freq] : word_freqs)
        for (char32_t c : word) chars.insert(c);
    model.base_inventory.assign(chars.begin(), chars.end());

    if (V < model.base_inventory.size() + 1)
        throw Error(ErrKind::VocabTooSmall,
                    "vocab size " + std::to_string(V) + " < " +
                        std::to_string(model.base_inventory.size() + 1) +
                        " (base inventory + specials)");

    model.vocab.emplace_back();  // id 0: marker
    std::unordered_map<std::u32string, std::uint32_t, U32Hash> ids;
    for (char32_t c : model.base_inventory) {
        ids.emplace(std::u32string(1, c),
                    static_cast<std::uint32_t>(model.vocab.size()));
        model.vocab.emplace_back(1, c);
    }

    struct TrainWord {
        std::vector<std::uint32_t> syms;
        std::uint64_t freq;
    };
    std::vector<TrainWord> words;
    words.reserve(word_freqs.size());
    detail::PairIndex index(&model.vocab, L);
    for (const auto& [word, freq] : word_freqs) {
        TrainWord tw;
        tw.freq = freq;
        tw.syms.reserve(word.size());
        for (char32_t c : word) tw.syms.push_back(ids.at(std::u32string(1, c)));
        const auto word_id = static_cast<std::uint32_t>(words.size());
        for (std::size_t i = 0; i + 1 < tw.syms.size(); ++i)
            index.add(tw.syms[i], tw.syms[i + 1], static_cast<std::int64_t>(freq),
                      word_id);
        words.push_back(std::move(tw));
    }

    while (model.vocab.size() < V) {
        const auto best = index.best();
        if (!best) break;
        const std::uint32_t l = best->left, r = best->right;
        const std::u32string product = model.vocab[l] + model.vocab[r];

        std::uint32_t product_id;
        if (auto it = ids.find(product); it != ids.end()) {
            product_id = it->second;
        } else {
            product_id = static_cast<std::uint32_t>(model.vocab.size());
            ids.emplace(product, product_id);
            model.vocab.push_back(product);
        }
        model.merges.emplace_back(model.vocab[l], model.vocab[r]);

        for (std::uint32_t word_id : index.words_of(l, r)) {
            TrainWord& tw = words[word_id];
            auto& syms = tw.syms;
            bool found = false;
            for (std::size_t i = 0; i + 1 < syms.size(); ++i)
                if (syms[i] == l && syms[i + 1] == r) {
                    found = true;
                    break;
                }
            if (!found) continue;  // stale index entry

            const auto freq = static_cast<std::int64_t>(tw.freq);
            for (std::size_t i = 0; i + 1 < syms.size(); ++i)
                index.sub(syms[i], syms[i + 1], freq);
            std::vector<std::uint32_t> merged;
            merged.reserve(syms.size());
            for (std::size_t i = 0; i < syms.size();) {
                if (i + 1 < syms.size() && syms[i] == l && syms[i + 1] == r) {
                    merged.push_back(product_id);
                    i += 2;
                } else {
                    merged.push_back(syms[i]);
                    ++i;
                }
            }
            syms = std::move(merged);
            for (std::size_t i = 0; i + 1 < syms.size(); ++i)
                index.add(syms[i], syms[i + 1], freq, word_id);
        }
    }

    detail::finalize_model(model);
    return model;
}

inline BpeModel train_bpe(const std::vector<Sentence>& corpus, std::size_t V,
                          std::size_t L) {
    std::map<std::u32string, std::uint64_t> freqs;
    for (const Sentence& s : corpus)
        for (const std::u32string& w : split_words(s)) ++freqs[w];
    return train_bpe(freqs, V, L);
}

namespace detail {

// Rank-ordered merge replay over one word. Characters outside the base
// inventory become literal elements and block merges across themselves.
// With dropout, each candidate merge application is offered once per gap
// composition: a skipped gap stays skipped until one of its two symbols
// changes, and a draw is consumed only when a best candidate is selected.
inline void encode_word(const BpeModel& model, std::u32string_view word,
                        double dropout_p, rng::Stream* stream, TokenSeq& out) {
    struct Sym {
        std::uint32_t id;
        bool literal;
        char32_t ch;
    };
    std::vector<Sym> syms;
    syms.reserve(word.size());
    for (char32_t c : word) {
        auto it = model.piece_to_id.find(std::u32string(1, c));
        if (it != model.piece_to_id.end())
            syms.push_back({it->second, false, c});
        else
            syms.push_back({0, true, c});
    }

    std::vector<char> skipped(syms.empty() ? 0 : syms.size() - 1, 0);
    while (true) {
        std::uint32_t best_rank = UINT32_MAX;
        std::size_t best_gap = 0;
        std::uint32_t best_product = 0;
        for (std::size_t g = 0; g + 1 < syms.size(); ++g) {
            if (skipped[g] || syms[g].literal || syms[g + 1].literal) continue;
            auto it = model.merge_rules.find(pair_key(syms[g].id, syms[g + 1].id));
            if (it != model.merge_rules.end() && it->second.rank < best_rank) {
                best_rank = it->second.rank;
                best_gap = g;
                best_product = it->second.product;
            }
        }
        if (best_rank == UINT32_MAX) break;
        if (dropout_p > 0 && stream && stream->uniform() < dropout_p) {
            skipped[best_gap] = 1;
            continue;
        }
        syms[best_gap].id = best_product;
        syms.erase(syms.begin() + static_cast<std::ptrdiff_t>(best_gap) + 1);
        skipped.erase(skipped.begin() + static_cast<std::ptrdiff_t>(best_gap));
        if (best_gap > 0) skipped[best_gap - 1] = 0;
        if (best_gap < skipped.size()) skipped[best_gap] = 0;
    }

    for (const Sym& s : syms)
        out.push_back(s.literal ? Element::lit(s.ch) : Element::token(s.id));
}

}  // namespace detail

// Encodes a sentence word by word; every word is closed by the marker token.
// dropout_p = 0 never consumes randomness and is fully deterministic.
inline TokenSeq encode(const BpeModel& model, const Sentence& text,
                       double dropout_p = 0.0, rng::Stream* stream = nullptr) {
    TokenSeq out;
    out.reserve(text.size() + 2);
    std::size_t pos = 0;
    const std::size_t n = text.size();
    while (pos < n) {
        if (text[pos] == U' ') {
            ++pos;
            continue;
        }
        std::size_t end = pos;
        while (end < n && text[end] != U' ') ++end;
        detail::encode_word(model, std::u32string_view(text.data() + pos, end - pos),
                            dropout_p, stream, out);
        out.push_back(Element::token(kMarkerId));
        pos = end;
    }
    return out;
}

inline Sentence decode(const BpeModel& model, const TokenSeq& seq) {
    Sentence out;
    std::u32string word;
    bool word_open = false;
    auto flush = [&] {
        if (!out.empty()) out.push_back(U' ');
        out.append(word);
        word.clear();
        word_open = false;
    };
    for (const Element& el : seq) {
        if (el.is_literal()) {
            word.push_back(el.literal);
            word_open = true;
            continue;
        }
        if (el.id >= model.vocab.size())
            throw Error(ErrKind::UnknownTokenId,
                        "token id " + std::to_string(el.id) + " outside vocab of " +
                            std::to_string(model.vocab.size()));
        if (el.id == kMarkerId) {
            if (word_open) flush();
        } else {
            word.append(model.vocab[el.id]);
            word_open = true;
        }
    }
    if (word_open) flush();  // tolerate a missing final marker
    return out;
}

struct TokenStats {
    double fertility = 0.0;       // content tokens per word
    double coverage = 0.0;        // words encoded as a single content token
    double mean_token_len = 0.0;  // characters per content token
    std::uint64_t words = 0;
    std::uint64_t tokens = 0;
};

inline TokenStats tokenization_stats(const BpeModel& model,
                                     const std::vector<Sentence>& corpus) {
    std::map<std::u32string, std::uint64_t> freqs;
    for (const Sentence& s : corpus)
        for (const std::u32string& w : split_words(s)) ++freqs[w];

    TokenStats stats;
    std::uint64_t single = 0, chars = 0;
    TokenSeq buf;
    for (const auto& [word, freq] : freqs) {
        buf.clear();
        detail::encode_word(model, word, 0.0, nullptr, buf);
        stats.words += freq;
        stats.tokens += buf.size() * freq;
        chars += word.size() * freq;
        if (buf.size() == 1) single += freq;
    }
    if (stats.words > 0) {
        stats.fertility = static_cast<double>(stats.tokens) /
                          static_cast<double>(stats.words);
        stats.coverage = static_cast<double>(single) /
                         static_cast<double>(stats.words);
    }
    if (stats.tokens > 0)
        stats.mean_token_len = static_cast<double>(chars) /
                               static_cast<double>(stats.tokens);
    return stats;
}

inline std::string serialize(const BpeModel& model) {
    Json doc;
    doc["version"] = 1;
    doc["vocab_limit"] = model.vocab_limit;
    doc["max_token_len"] = model.max_token_len;
    Json base = Json::array();
    for (char32_t c : model.base_inventory) base.push_back(cp_key(c));
    doc["base_inventory"] = std::move(base);
    Json merges = Json::array();
    for (const auto& [l, r] : model.merges)
        merges.push_back(Json::array({encode_utf8(l), encode_utf8(r)}));
    doc["merges"] = std::move(merges);
    doc["specials"] = Json::array({kMarkerLabel});
    return doc.dump(2);
}

inline BpeModel deserialize_bpe(const std::string& text) {
    const Json doc = parse_json(text, "bpe model");
    require_version(doc, 1, "bpe model");
    BpeModel model;
    try {
        model.vocab_limit = doc.at("vocab_limit").get<std::size_t>();
        model.max_token_len = doc.at("max_token_len").get<std::size_t>();
        if (doc.at("specials") != Json::array({kMarkerLabel}))
            throw Error(ErrKind::MalformedDocument, "bpe model: unexpected specials");
        model.vocab.emplace_back();
        std::unordered_map<std::u32string, std::uint32_t, U32Hash> ids;
        for (const auto& entry : doc.at("base_inventory")) {
            const char32_t c = key_cp(entry.get<std::string>(), "bpe model");
            if (!model.base_inventory.empty() && c <= model.base_inventory.back())
                throw Error(ErrKind::MalformedDocument,
                            "bpe model: base inventory not sorted");
            model.base_inventory.push_back(c);
            ids.emplace(std::u32string(1, c),
                        static_cast<std::uint32_t>(model.vocab.size()));
            model.vocab.emplace_back(1, c);
        }
        for (const auto& entry : doc.at("merges")) {
            if (!entry.is_array() || entry.size() != 2)
                throw Error(ErrKind::MalformedDocument, "bpe model: bad merge entry");
            const std::u32string l = decode_utf8(entry[0].get<std::string>());
            const std::u32string r = decode_utf8(entry[1].get<std::string>());
            if (!ids.count(l) || !ids.count(r))
                throw Error(ErrKind::MalformedDocument,
                            "bpe model: merge references unknown piece");
            const std::u32string product = l + r;
            if (product.size() > model.max_token_len)
                throw Error(ErrKind::MalformedDocument,
                            "bpe model: merge product exceeds max_token_len");
            model.merges.emplace_back(l, r);
            if (!ids.count(product)) {
                ids.emplace(product,
                            static_cast<std::uint32_t>(model.vocab.size()));
                model.vocab.push_back(product);
            }
        }
        if (model.vocab.size() > model.vocab_limit)
            throw Error(ErrKind::MalformedDocument,
                        "bpe model: vocab exceeds vocab_limit");
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrKind::MalformedDocument, std::string("bpe model: ") + e.what());
    }
    detail::finalize_model(model);
    return model;
}

inline BpeModel load_bpe(const std::string& path) {
    return deserialize_bpe(read_text_file(path));
}

}  // namespace teco
