#!/usr/bin/env python3
"""Regenerates include/teco/unicode_data.hpp from Python's unicodedata.

The tables pin one Unicode version so text normalization is reproducible
across platforms. Rerun only when intentionally bumping the Unicode version:

    python3 scripts/gen_unicode_tables.py > include/teco/unicode_data.hpp
"""
import sys
import unicodedata

MAX_CP = 0x110000
HANGUL_S_BASE = 0xAC00
HANGUL_S_COUNT = 11172


def ranges_for(pred):
    out = []
    start = None
    for cp in range(MAX_CP):
        if pred(cp):
            if start is None:
                start = cp
        else:
            if start is not None:
                out.append((start, cp - 1))
                start = None
    if start is not None:
        out.append((start, MAX_CP - 1))
    return out


def cat(cp):
    return unicodedata.category(chr(cp))


def is_hangul_syllable(cp):
    return HANGUL_S_BASE <= cp < HANGUL_S_BASE + HANGUL_S_COUNT


def main():
    w = sys.stdout.write
    w("// Generated by scripts/gen_unicode_tables.py — do not edit by hand.\n")
    w("// Unicode version: %s\n" % unicodedata.unidata_version)
    w("#pragma once\n\n#include <cstdint>\n\nnamespace teco::unicode_data {\n\n")
    w("inline constexpr const char* kUnicodeVersion = \"%s\";\n\n"
      % unicodedata.unidata_version)

    def emit_ranges(name, rs):
        w("// %d ranges\n" % len(rs))
        w("inline constexpr uint32_t %s[][2] = {\n" % name)
        for i in range(0, len(rs), 6):
            row = rs[i:i + 6]
            w("    " + "".join("{0x%X,0x%X}," % r for r in row) + "\n")
        w("};\n")
        w("inline constexpr int %s_len = %d;\n\n" % (name, len(rs)))

    # Punctuation and symbols (general categories P* and S*).
    emit_ranges("kPunctSym", ranges_for(lambda cp: cat(cp)[0] in "PS"))
    # Decimal digits (Nd).
    emit_ranges("kDigit", ranges_for(lambda cp: cat(cp) == "Nd"))
    # Whitespace: separators Z* plus the ASCII/latin control whitespace.
    ws_controls = {0x09, 0x0A, 0x0B, 0x0C, 0x0D, 0x85}
    emit_ranges("kSpace",
                ranges_for(lambda cp: cat(cp)[0] == "Z" or cp in ws_controls))
    # Control/format/surrogate/private-use, minus whitespace controls.
    emit_ranges("kOther",
                ranges_for(lambda cp: cat(cp) in ("Cc", "Cf", "Co", "Cs")
                           and cp not in ws_controls))

    # Simple lowercase mappings.
    lower = []
    for cp in range(MAX_CP):
        lo = ord(chr(cp).lower()) if len(chr(cp).lower()) == 1 else cp
        if lo != cp:
            lower.append((cp, lo))
    w("// cp -> simple lowercase, sorted by cp (%d entries)\n" % len(lower))
    w("inline constexpr uint32_t kLower[][2] = {\n")
    for i in range(0, len(lower), 6):
        w("    " + "".join("{0x%X,0x%X}," % p for p in lower[i:i + 6]) + "\n")
    w("};\n")
    w("inline constexpr int kLower_len = %d;\n\n" % len(lower))

    # Canonical combining classes (nonzero only).
    ccc = [(cp, unicodedata.combining(chr(cp)))
           for cp in range(MAX_CP) if unicodedata.combining(chr(cp)) != 0]
    w("// cp -> canonical combining class, nonzero entries (%d)\n" % len(ccc))
    w("inline constexpr uint32_t kCcc[][2] = {\n")
    for i in range(0, len(ccc), 6):
        w("    " + "".join("{0x%X,%d}," % p for p in ccc[i:i + 6]) + "\n")
    w("};\n")
    w("inline constexpr int kCcc_len = %d;\n\n" % len(ccc))

    # Full canonical decompositions (NFD), Hangul excluded (algorithmic).
    pool = []
    decomp = []
    for cp in range(MAX_CP):
        if is_hangul_syllable(cp):
            continue
        nfd = unicodedata.normalize("NFD", chr(cp))
        if nfd != chr(cp):
            seq = [ord(ch) for ch in nfd]
            decomp.append((cp, len(pool), len(seq)))
            pool.extend(seq)
    w("// cp -> (offset,len) into kDecompPool; full canonical (NFD) expansion\n")
    w("inline constexpr uint32_t kDecomp[][3] = {\n")
    for i in range(0, len(decomp), 5):
        w("    " + "".join("{0x%X,%d,%d}," % d for d in decomp[i:i + 5]) + "\n")
    w("};\n")
    w("inline constexpr int kDecomp_len = %d;\n\n" % len(decomp))
    w("inline constexpr uint32_t kDecompPool[] = {\n")
    for i in range(0, len(pool), 10):
        w("    " + "".join("0x%X," % v for v in pool[i:i + 10]) + "\n")
    w("};\n\n")

    # Primary composites: (first, second) -> composed. These come from the
    # SINGLE-STEP canonical decomposition (UnicodeData field 5), not the full
    # NFD expansion — multi-step composites such as U+1EE3 -> U+01A1 U+0323
    # have a 3-codepoint NFD but still compose pairwise. Exclusions are
    # filtered by checking that NFC actually recomposes the character.
    comp = []
    for cp in range(MAX_CP):
        if is_hangul_syllable(cp):
            continue
        raw = unicodedata.decomposition(chr(cp))
        if not raw or raw.startswith("<"):
            continue
        parts = [int(h, 16) for h in raw.split()]
        if len(parts) != 2 or unicodedata.combining(chr(parts[0])) != 0:
            continue
        nfd = unicodedata.normalize("NFD", chr(cp))
        if unicodedata.normalize("NFC", nfd) == chr(cp):
            comp.append((parts[0], parts[1], cp))
    comp.sort()
    w("// (first,second) -> composed, sorted by (first,second) (%d)\n" % len(comp))
    w("inline constexpr uint32_t kComp[][3] = {\n")
    for i in range(0, len(comp), 5):
        w("    " + "".join("{0x%X,0x%X,0x%X}," % c for c in comp[i:i + 5]) + "\n")
    w("};\n")
    w("inline constexpr int kComp_len = %d;\n\n" % len(comp))

    w("}  // namespace teco::unicode_data\n")


if __name__ == "__main__":
    main()
