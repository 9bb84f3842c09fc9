#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "teco/errors.hpp"
#include "teco/unicode.hpp"

namespace teco {

using Json = nlohmann::json;
using unicode::decode_utf8;
using unicode::encode_utf8;

// Probabilities are serialized as 12-significant-digit decimal strings so
// that dumps are platform-independent and value -> string -> value is the
// identity once a model has been through one round trip.
inline std::string fmt12(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

inline double parse12(const std::string& text) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw Error(ErrKind::MalformedDocument, "bad number: " + text);
        return value;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(ErrKind::MalformedDocument, "bad number: " + text);
    }
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrKind::Io, "cannot open " + path);
    Json doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded())
        throw Error(ErrKind::MalformedDocument, "invalid JSON in " + path);
    return doc;
}

inline Json parse_json(const std::string& text, const std::string& what) {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw Error(ErrKind::MalformedDocument, "invalid JSON in " + what);
    return doc;
}

inline void save_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrKind::Io, "cannot open " + path + " for writing");
    out << content;
    if (!out) throw Error(ErrKind::Io, "write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrKind::Io, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void require_version(const Json& doc, int expected, const std::string& what) {
    if (!doc.is_object() || !doc.contains("version") ||
        !doc["version"].is_number_integer())
        throw Error(ErrKind::MalformedDocument, what + ": missing version");
    if (doc["version"].get<int>() != expected)
        throw Error(ErrKind::SchemaVersionMismatch,
                    what + ": version " + std::to_string(doc["version"].get<int>()) +
                        ", expected " + std::to_string(expected));
}

// Single code point <-> UTF-8 JSON key.
inline std::string cp_key(char32_t cp) { return encode_utf8(std::u32string(1, cp)); }

inline char32_t key_cp(const std::string& key, const std::string& what) {
    const std::u32string cps = decode_utf8(key);
    if (cps.size() != 1)
        throw Error(ErrKind::MalformedDocument, what + ": bad char key '" + key + "'");
    return cps[0];
}

// Multi-part keys like "c|x" / "c|x|y"; '|' is punctuation and therefore
// never survives normalization, so it is safe as a separator.
inline std::string joined_key(std::initializer_list<char32_t> parts) {
    std::u32string key;
    for (char32_t cp : parts) {
        if (!key.empty()) key.push_back(U'|');
        key.push_back(cp);
    }
    return encode_utf8(key);
}

inline std::vector<char32_t> split_key(const std::string& key, std::size_t parts,
                                       const std::string& what) {
    const std::u32string cps = decode_utf8(key);
    std::vector<char32_t> out;
    std::u32string cur;
    for (char32_t cp : cps) {
        if (cp == U'|') {
            if (cur.size() != 1)
                throw Error(ErrKind::MalformedDocument, what + ": bad key '" + key + "'");
            out.push_back(cur[0]);
            cur.clear();
        } else {
            cur.push_back(cp);
        }
    }
    if (cur.size() != 1)
        throw Error(ErrKind::MalformedDocument, what + ": bad key '" + key + "'");
    out.push_back(cur[0]);
    if (out.size() != parts)
        throw Error(ErrKind::MalformedDocument, what + ": bad key '" + key + "'");
    return out;
}

// FNV-1a 64-bit; fingerprints serialized models so dependent artifacts can
// verify they were built against the same tokenizer.
inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char byte : data) {
        h ^= byte;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace teco
