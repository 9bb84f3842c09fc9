#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "teco/bpe.hpp"  // U32Hash
#include "teco/corpus.hpp"
#include "teco/jsonio.hpp"

namespace teco {

// Sentence padding symbols. Both are control characters, which normalization
// strips, so they can never collide with corpus text.
inline constexpr char32_t kBos = U'\x01';
inline constexpr char32_t kEos = U'\x02';

// Character n-gram model with Witten-Bell smoothing and backoff:
//   P(w | h) = (c(h,w) + T(h) * P(w | h')) / (c(h) + T(h))
// where h' drops the oldest context character and T(h) is the number of
// distinct continuations of h. An unseen context backs off entirely. The
// base case is uniform 1/|A| over the alphabet, with 1/(|A|+1) floor mass for
// characters outside it, so log_prob is always finite and, for every context,
// the probabilities over the alphabet sum to exactly 1.
struct CharLm {
    struct Ctx {
        std::uint64_t total = 0;
        std::map<char32_t, std::uint64_t> next;
        bool operator==(const Ctx&) const = default;
    };

    int order = 5;
    std::set<char32_t> alphabet;  // seen characters + kEos (never kBos)
    std::vector<std::unordered_map<std::u32string, Ctx, U32Hash>> levels;

    bool operator==(const CharLm& other) const {
        return order == other.order && alphabet == other.alphabet &&
               levels == other.levels;
    }

    double base_prob(char32_t w) const {
        const double n = static_cast<double>(alphabet.size());
        return alphabet.count(w) ? 1.0 / n : 1.0 / (n + 1.0);
    }

    // context is the up-to-(order-1) characters preceding w, oldest first.
    double prob(char32_t w, std::u32string_view context) const {
        if (context.size() > static_cast<std::size_t>(order - 1))
            context = context.substr(context.size() - (order - 1));
        double p = base_prob(w);
        std::u32string key;
        for (std::size_t k = 0; k <= context.size(); ++k) {
            if (k >= levels.size()) break;
            key.assign(context.end() - k, context.end());
            auto it = levels[k].find(key);
            if (it == levels[k].end()) continue;  // back off unchanged
            const Ctx& ctx = it->second;
            const double t = static_cast<double>(ctx.next.size());
            std::uint64_t count = 0;
            if (auto n = ctx.next.find(w); n != ctx.next.end()) count = n->second;
            p = (static_cast<double>(count) + t * p) /
                (static_cast<double>(ctx.total) + t);
        }
        return p;
    }

    // Sum of per-character conditional log probabilities with begin padding
    // and the end marker. Always finite.
    double log_prob(const Sentence& text) const {
        const std::size_t h = static_cast<std::size_t>(order - 1);
        std::u32string padded(h, kBos);
        padded += text;
        padded.push_back(kEos);
        double lp = 0.0;
        for (std::size_t t = h; t < padded.size(); ++t)
            lp += std::log(prob(padded[t], std::u32string_view(padded).substr(t - h, h)));
        return lp;
    }
};

inline CharLm train_ngram(const std::vector<Sentence>& corpus, int order) {
    if (order < 1) throw Error(ErrKind::Usage, "lm order must be >= 1");
    if (corpus.empty()) throw Error(ErrKind::EmptyCorpus, "lm training corpus is empty");

    CharLm lm;
    lm.order = order;
    lm.levels.resize(static_cast<std::size_t>(order));
    lm.alphabet.insert(kEos);
    const std::size_t h = static_cast<std::size_t>(order - 1);
    for (const Sentence& s : corpus) {
        for (char32_t c : s) lm.alphabet.insert(c);
        std::u32string padded(h, kBos);
        padded += s;
        padded.push_back(kEos);
        for (std::size_t t = h; t < padded.size(); ++t) {
            const char32_t w = padded[t];
            for (std::size_t k = 0; k <= h; ++k) {
                CharLm::Ctx& ctx =
                    lm.levels[k][std::u32string(padded, t - k, k)];
                ++ctx.next[w];
                ++ctx.total;
            }
        }
    }
    return lm;
}

inline std::string serialize(const CharLm& lm) {
    Json doc;
    doc["version"] = 1;
    doc["order"] = lm.order;
    Json alpha = Json::array();
    for (char32_t c : lm.alphabet) alpha.push_back(cp_key(c));
    doc["alphabet"] = std::move(alpha);
    Json levels = Json::array();
    for (const auto& level : lm.levels) {
        std::map<std::string, Json> sorted;
        for (const auto& [ctx, entry] : level) {
            Json nexts = Json::object();
            for (const auto& [c, n] : entry.next) nexts[cp_key(c)] = n;
            sorted.emplace(encode_utf8(ctx), std::move(nexts));
        }
        Json obj = Json::object();
        for (auto& [k, v] : sorted) obj[k] = std::move(v);
        levels.push_back(std::move(obj));
    }
    doc["levels"] = std::move(levels);
    return doc.dump(2);
}

inline CharLm deserialize_lm(const std::string& text) {
    const Json doc = parse_json(text, "char lm");
    require_version(doc, 1, "char lm");
    CharLm lm;
    try {
        lm.order = doc.at("order").get<int>();
        if (lm.order < 1)
            throw Error(ErrKind::MalformedDocument, "char lm: order < 1");
        for (const auto& entry : doc.at("alphabet"))
            lm.alphabet.insert(key_cp(entry.get<std::string>(), "char lm"));
        const auto& levels = doc.at("levels");
        if (!levels.is_array() ||
            levels.size() != static_cast<std::size_t>(lm.order))
            throw Error(ErrKind::MalformedDocument, "char lm: bad level count");
        lm.levels.resize(static_cast<std::size_t>(lm.order));
        for (std::size_t k = 0; k < lm.levels.size(); ++k) {
            for (const auto& [ctx_key, nexts] : levels[static_cast<int>(k)].items()) {
                const std::u32string ctx = decode_utf8(ctx_key);
                if (ctx.size() != k)
                    throw Error(ErrKind::MalformedDocument,
                                "char lm: context length mismatch");
                CharLm::Ctx& entry = lm.levels[k][ctx];
                for (const auto& [c_key, n] : nexts.items()) {
                    const std::uint64_t count = n.get<std::uint64_t>();
                    entry.next[key_cp(c_key, "char lm")] = count;
                    entry.total += count;
                }
            }
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrKind::MalformedDocument, std::string("char lm: ") + e.what());
    }
    return lm;
}

inline CharLm load_lm(const std::string& path) {
    return deserialize_lm(read_text_file(path));
}

}  // namespace teco
