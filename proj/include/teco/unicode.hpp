#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "teco/unicode_data.hpp"

namespace teco::unicode {

// ---------------------------------------------------------------------------
// UTF-8 <-> code points. Invalid byte sequences decode to U+FFFD, one
// replacement per offending byte, so decoding never fails.
// ---------------------------------------------------------------------------

inline constexpr char32_t kReplacement = 0xFFFD;

inline std::u32string decode_utf8(std::string_view in) {
    std::u32string out;
    out.reserve(in.size());
    std::size_t i = 0;
    const auto n = in.size();
    while (i < n) {
        const auto b0 = static_cast<unsigned char>(in[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
        else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
        else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
        else { out.push_back(kReplacement); ++i; continue; }
        if (i + len > n) { out.push_back(kReplacement); ++i; continue; }
        bool ok = true;
        for (int k = 1; k < len; ++k) {
            const auto bk = static_cast<unsigned char>(in[i + k]);
            if ((bk & 0xC0) != 0x80) { ok = false; break; }
            cp = (cp << 6) | (bk & 0x3F);
        }
        // Reject overlongs, surrogates and out-of-range values.
        if (!ok || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF) ||
            (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
            (len == 4 && cp < 0x10000)) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string encode_utf8(std::u32string_view in) {
    std::string out;
    out.reserve(in.size());
    for (char32_t cp : in) append_utf8(out, cp);
    return out;
}

// ---------------------------------------------------------------------------
// Classification against the pinned tables.
// ---------------------------------------------------------------------------

namespace detail {

inline bool in_ranges(const uint32_t (*ranges)[2], int len, char32_t cp) {
    int lo = 0, hi = len - 1;
    while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        if (cp < ranges[mid][0]) hi = mid - 1;
        else if (cp > ranges[mid][1]) lo = mid + 1;
        else return true;
    }
    return false;
}

inline uint32_t lookup_pair(const uint32_t (*table)[2], int len, char32_t cp,
                            uint32_t fallback) {
    int lo = 0, hi = len - 1;
    while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        if (cp < table[mid][0]) hi = mid - 1;
        else if (cp > table[mid][0]) lo = mid + 1;
        else return table[mid][1];
    }
    return fallback;
}

}  // namespace detail

inline bool is_punct_or_symbol(char32_t cp) {
    using namespace unicode_data;
    return detail::in_ranges(kPunctSym, kPunctSym_len, cp);
}

inline bool is_digit(char32_t cp) {
    using namespace unicode_data;
    return detail::in_ranges(kDigit, kDigit_len, cp);
}

inline bool is_space(char32_t cp) {
    using namespace unicode_data;
    return detail::in_ranges(kSpace, kSpace_len, cp);
}

// Control/format/surrogate/private-use characters (category C except Cn).
inline bool is_other(char32_t cp) {
    using namespace unicode_data;
    return detail::in_ranges(kOther, kOther_len, cp);
}

inline char32_t to_lower(char32_t cp) {
    using namespace unicode_data;
    return detail::lookup_pair(kLower, kLower_len, cp, cp);
}

inline int combining_class(char32_t cp) {
    using namespace unicode_data;
    return static_cast<int>(detail::lookup_pair(kCcc, kCcc_len, cp, 0));
}

// ---------------------------------------------------------------------------
// NFC. Canonical decomposition (precomputed full expansions + algorithmic
// Hangul), canonical reordering, then canonical composition.
// ---------------------------------------------------------------------------

namespace detail {

constexpr char32_t kHangulSBase = 0xAC00;
constexpr char32_t kHangulLBase = 0x1100;
constexpr char32_t kHangulVBase = 0x1161;
constexpr char32_t kHangulTBase = 0x11A7;
constexpr int kHangulLCount = 19, kHangulVCount = 21, kHangulTCount = 28;
constexpr int kHangulNCount = kHangulVCount * kHangulTCount;
constexpr int kHangulSCount = kHangulLCount * kHangulNCount;

inline void decompose_cp(char32_t cp, std::u32string& out) {
    using namespace unicode_data;
    if (cp >= kHangulSBase &&
        cp < kHangulSBase + static_cast<char32_t>(kHangulSCount)) {
        const int s = static_cast<int>(cp - kHangulSBase);
        out.push_back(kHangulLBase + s / kHangulNCount);
        out.push_back(kHangulVBase + (s % kHangulNCount) / kHangulTCount);
        if (s % kHangulTCount != 0) out.push_back(kHangulTBase + s % kHangulTCount);
        return;
    }
    int lo = 0, hi = kDecomp_len - 1;
    while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        if (cp < kDecomp[mid][0]) hi = mid - 1;
        else if (cp > kDecomp[mid][0]) lo = mid + 1;
        else {
            const uint32_t off = kDecomp[mid][1], len = kDecomp[mid][2];
            for (uint32_t k = 0; k < len; ++k)
                out.push_back(kDecompPool[off + k]);
            return;
        }
    }
    out.push_back(cp);
}

inline char32_t compose_pair(char32_t a, char32_t b) {
    using namespace unicode_data;
    // Hangul LV / LVT composition.
    if (a >= kHangulLBase && a < kHangulLBase + static_cast<char32_t>(kHangulLCount) &&
        b >= kHangulVBase && b < kHangulVBase + static_cast<char32_t>(kHangulVCount)) {
        return kHangulSBase +
               ((a - kHangulLBase) * kHangulVCount + (b - kHangulVBase)) *
                   kHangulTCount;
    }
    if (a >= kHangulSBase &&
        a < kHangulSBase + static_cast<char32_t>(kHangulSCount) &&
        (a - kHangulSBase) % kHangulTCount == 0 && b > kHangulTBase &&
        b < kHangulTBase + static_cast<char32_t>(kHangulTCount)) {
        return a + (b - kHangulTBase);
    }
    int lo = 0, hi = kComp_len - 1;
    while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        if (a < kComp[mid][0] || (a == kComp[mid][0] && b < kComp[mid][1]))
            hi = mid - 1;
        else if (a > kComp[mid][0] || b > kComp[mid][1])
            lo = mid + 1;
        else
            return kComp[mid][2];
    }
    return 0;
}

}  // namespace detail

inline std::u32string nfc(std::u32string_view in) {
    std::u32string d;
    d.reserve(in.size());
    for (char32_t cp : in) detail::decompose_cp(cp, d);

    // Canonical ordering: stable bubble of combining marks.
    for (std::size_t i = 1; i < d.size(); ++i) {
        const int cc = combining_class(d[i]);
        if (cc == 0) continue;
        std::size_t j = i;
        while (j > 0 && combining_class(d[j - 1]) > cc) {
            std::swap(d[j - 1], d[j]);
            --j;
        }
    }

    // Canonical composition.
    std::u32string out;
    out.reserve(d.size());
    std::ptrdiff_t last_starter = -1;
    int prev_cc = 0;
    for (char32_t cp : d) {
        const int cc = combining_class(cp);
        if (last_starter >= 0 && (prev_cc < cc || prev_cc == 0)) {
            if (const char32_t comp = detail::compose_pair(out[last_starter], cp)) {
                out[last_starter] = comp;
                continue;  // prev_cc unchanged: cp was absorbed
            }
        }
        if (cc == 0) {
            last_starter = static_cast<std::ptrdiff_t>(out.size());
            prev_cc = 0;
        } else {
            prev_cc = cc;
        }
        out.push_back(cp);
    }
    return out;
}

}  // namespace teco::unicode
