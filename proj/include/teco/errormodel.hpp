#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "teco/align.hpp"
#include "teco/jsonio.hpp"

namespace teco {

namespace detail {

// Key part codec for model documents: the boundary sentinel is written as
// the two-character string "#B" so it can never collide with a real char.
inline std::string model_key_part(char32_t cp) {
    return cp == kBoundary ? "#B" : cp_key(cp);
}

inline char32_t parse_key_part(const std::u32string& part, const std::string& what) {
    if (part == U"#B") return kBoundary;
    if (part.size() != 1)
        throw Error(ErrKind::MalformedDocument, what + ": bad key part");
    return part[0];
}

inline std::vector<char32_t> parse_model_key(const std::string& key,
                                             std::size_t parts,
                                             const std::string& what) {
    std::vector<char32_t> out;
    std::u32string cur;
    for (char32_t cp : decode_utf8(key)) {
        if (cp == U'|') {
            out.push_back(parse_key_part(cur, what));
            cur.clear();
        } else {
            cur.push_back(cp);
        }
    }
    out.push_back(parse_key_part(cur, what));
    if (out.size() != parts)
        throw Error(ErrKind::MalformedDocument, what + ": bad key '" + key + "'");
    return out;
}

// All stored probabilities are quantized to their 12-significant-digit
// decimal representation at construction time, so serialize/deserialize is an
// exact round trip for every model the library can produce.
inline double quant12(double v) { return parse12(fmt12(v)); }

}  // namespace detail

// Per-character deletion/substitution probabilities and per-context insertion
// masses, with additive smoothing alpha on deletion and observed-substitution
// rates. Space never carries probability mass: the corruption protocol works
// strictly inside words.
struct ErrorModel {
    std::map<char32_t, double> p_del;
    std::map<std::pair<char32_t, char32_t>, double> p_sub;          // (c, x)
    std::map<std::array<char32_t, 3>, double> p_ins;                // (c, x, y)
    std::map<char32_t, std::uint64_t> char_freq;
    double alpha = 0.0;
    std::uint64_t dropped_space_ops = 0;

    double del_prob(char32_t c) const {
        auto it = p_del.find(c);
        return it == p_del.end() ? 0.0 : it->second;
    }
    double sub_prob(char32_t c, char32_t x) const {
        auto it = p_sub.find({c, x});
        return it == p_sub.end() ? 0.0 : it->second;
    }
    double ins_prob(char32_t c, char32_t x, char32_t y) const {
        auto it = p_ins.find({c, x, y});
        return it == p_ins.end() ? 0.0 : it->second;
    }
    double sub_total(char32_t c) const {
        double total = 0.0;
        for (auto it = p_sub.lower_bound({c, 0});
             it != p_sub.end() && it->first.first == c; ++it)
            total += it->second;
        return total;
    }

    bool operator==(const ErrorModel& other) const {
        return alpha == other.alpha && char_freq == other.char_freq &&
               dropped_space_ops == other.dropped_space_ops &&
               p_del == other.p_del && p_sub == other.p_sub &&
               p_ins == other.p_ins;
    }
};

// Rates: p_del(c) = del(c)/|c| + alpha; p_sub(c,x) = sub(c,x)/|c| + alpha for
// observed (c,x) only; p_ins(c,x,y) = ins(c,x,y)/|c| with no smoothing. If a
// character's deletion + substitution mass exceeds 1 it is rescaled to sum to
// 1, keeping the sampler's per-character event distribution coherent.
inline ErrorModel estimate(const ErrorCounts& counts, double alpha) {
    if (alpha < 0) throw Error(ErrKind::InvalidAlpha, "alpha must be >= 0");

    ErrorModel model;
    model.alpha = detail::quant12(alpha);
    model.char_freq = counts.char_freq;
    model.dropped_space_ops = counts.dropped_space_ops;

    auto freq_of = [&](char32_t c) -> std::uint64_t {
        auto it = counts.char_freq.find(c);
        return it == counts.char_freq.end() ? 0 : it->second;
    };

    for (const auto& [c, freq] : counts.char_freq) {
        if (c == U' ' || freq == 0) continue;
        std::uint64_t dels = 0;
        if (auto it = counts.del_counts.find(c); it != counts.del_counts.end())
            dels = it->second;
        const double p = static_cast<double>(dels) / static_cast<double>(freq) + alpha;
        if (p > 0) model.p_del[c] = p;
    }
    for (const auto& [key, n] : counts.sub_counts) {
        const auto [c, x] = key;
        const std::uint64_t freq = freq_of(c);
        if (freq == 0 || c == x) continue;
        model.p_sub[key] = static_cast<double>(n) / static_cast<double>(freq) + alpha;
    }
    for (const auto& [key, n] : counts.ins_counts) {
        const std::uint64_t freq = freq_of(key[0]);
        if (freq == 0) continue;  // char never seen on the reference side
        model.p_ins[key] = detail::quant12(static_cast<double>(n) /
                                           static_cast<double>(freq));
    }

    // Joint clamp, then quantize the stored deletion/substitution values.
    for (const auto& [c, freq] : counts.char_freq) {
        if (c == U' ') continue;
        double total = model.del_prob(c) + model.sub_total(c);
        const double scale = total > 1.0 ? 1.0 / total : 1.0;
        if (auto it = model.p_del.find(c); it != model.p_del.end())
            it->second = detail::quant12(it->second * scale);
        for (auto it = model.p_sub.lower_bound({c, 0});
             it != model.p_sub.end() && it->first.first == c; ++it)
            it->second = detail::quant12(it->second * scale);
    }
    return model;
}

inline std::string serialize(const ErrorModel& model) {
    Json doc;
    doc["version"] = 1;
    doc["alpha"] = fmt12(model.alpha);
    doc["dropped_space_ops"] = model.dropped_space_ops;
    Json freq = Json::object();
    for (const auto& [c, n] : model.char_freq) freq[cp_key(c)] = n;
    doc["char_freq"] = std::move(freq);
    Json dels = Json::object();
    for (const auto& [c, p] : model.p_del) dels[detail::model_key_part(c)] = fmt12(p);
    doc["p_del"] = std::move(dels);
    Json subs = Json::object();
    for (const auto& [key, p] : model.p_sub)
        subs[detail::model_key_part(key.first) + "|" +
             detail::model_key_part(key.second)] = fmt12(p);
    doc["p_sub"] = std::move(subs);
    Json inss = Json::object();
    for (const auto& [key, p] : model.p_ins)
        inss[detail::model_key_part(key[0]) + "|" + detail::model_key_part(key[1]) +
             "|" + detail::model_key_part(key[2])] = fmt12(p);
    doc["p_ins"] = std::move(inss);
    return doc.dump(2);
}

inline ErrorModel deserialize_model(const std::string& text) {
    const Json doc = parse_json(text, "error model");
    require_version(doc, 1, "error model");
    ErrorModel model;
    try {
        model.alpha = parse12(doc.at("alpha").get<std::string>());
        if (model.alpha < 0) throw Error(ErrKind::InvalidAlpha, "negative alpha in model");
        model.dropped_space_ops = doc.at("dropped_space_ops").get<std::uint64_t>();
        for (const auto& [key, value] : doc.at("char_freq").items())
            model.char_freq[key_cp(key, "error model")] = value.get<std::uint64_t>();
        auto check = [](double p, const std::string& key) {
            if (!(p >= 0.0 && p <= 1.0))
                throw Error(ErrKind::MalformedDocument,
                            "error model: probability out of range at '" + key + "'");
            return p;
        };
        for (const auto& [key, value] : doc.at("p_del").items()) {
            const auto parts = detail::parse_model_key(key, 1, "error model");
            model.p_del[parts[0]] = check(parse12(value.get<std::string>()), key);
        }
        for (const auto& [key, value] : doc.at("p_sub").items()) {
            const auto parts = detail::parse_model_key(key, 2, "error model");
            if (parts[0] == parts[1])
                throw Error(ErrKind::MalformedDocument,
                            "error model: identity substitution '" + key + "'");
            model.p_sub[{parts[0], parts[1]}] =
                check(parse12(value.get<std::string>()), key);
        }
        for (const auto& [key, value] : doc.at("p_ins").items()) {
            const auto parts = detail::parse_model_key(key, 3, "error model");
            model.p_ins[{parts[0], parts[1], parts[2]}] =
                check(parse12(value.get<std::string>()), key);
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrKind::MalformedDocument,
                    std::string("error model: ") + e.what());
    }
    return model;
}

inline ErrorModel load_model(const std::string& path) {
    return deserialize_model(read_text_file(path));
}

// L1 distance over the union of probability keys; absent keys read as 0.
inline double model_distance(const ErrorModel& a, const ErrorModel& b) {
    double total = 0.0;
    auto add_map = [&total](const auto& ma, const auto& mb) {
        for (const auto& [k, v] : ma) {
            auto it = mb.find(k);
            total += std::abs(v - (it == mb.end() ? 0.0 : it->second));
        }
        for (const auto& [k, v] : mb)
            if (!ma.count(k)) total += v;
    };
    add_map(a.p_del, b.p_del);
    add_map(a.p_sub, b.p_sub);
    add_map(a.p_ins, b.p_ins);
    return total;
}

}  // namespace teco
