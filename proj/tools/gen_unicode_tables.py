#!/usr/bin/env python3
"""Regenerates src/unicode_data.cpp from the Python unicodedata module.

Emits three tables used by the NFC normalizer:
  - full canonical decompositions (NFD), Hangul excluded (algorithmic)
  - nonzero canonical combining classes
  - primary composites (canonical pairs that recompose under NFC)

Run from the repository root:  python3 tools/gen_unicode_tables.py
"""

import sys
import unicodedata

HANGUL_S_BASE = 0xAC00
HANGUL_S_COUNT = 11172


def is_hangul_syllable(cp: int) -> bool:
    return HANGUL_S_BASE <= cp < HANGUL_S_BASE + HANGUL_S_COUNT


def main() -> None:
    decomp = []  # (cp, [cp...]) full canonical decomposition
    ccc = []  # (cp, class)
    comp = []  # (a, b, composite)

    for cp in range(0x110000):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        ch = chr(cp)
        k = unicodedata.combining(ch)
        if k:
            ccc.append((cp, k))
        if is_hangul_syllable(cp):
            continue
        nfd = unicodedata.normalize("NFD", ch)
        if nfd != ch:
            decomp.append((cp, [ord(c) for c in nfd]))
            raw = unicodedata.decomposition(ch)
            if raw and not raw.startswith("<"):
                parts = [int(p, 16) for p in raw.split()]
                if len(parts) == 2 and unicodedata.combining(chr(parts[0])) == 0:
                    if unicodedata.normalize("NFC", nfd) == ch:
                        comp.append((parts[0], parts[1], cp))

    seq = []
    entries = []
    for cp, s in decomp:
        entries.append((cp, len(seq), len(s)))
        seq.extend(s)

    comp.sort(key=lambda t: (t[0] << 32) | t[1])

    out = sys.stdout
    out.write("// Generated by tools/gen_unicode_tables.py -- do not edit.\n")
    out.write('#include "corpuslm/unicode.hpp"\n\n')
    out.write("namespace corpuslm::unicode::detail {\n\n")

    out.write(f"const DecompEntry kDecomp[{len(entries)}] = {{\n")
    for cp, off, n in entries:
        out.write(f"  {{0x{cp:X}, {off}, {n}}},\n")
    out.write("};\n")
    out.write(f"const std::size_t kDecompCount = {len(entries)};\n\n")

    out.write(f"const char32_t kDecompSeq[{len(seq)}] = {{\n")
    for i in range(0, len(seq), 12):
        out.write("  " + ", ".join(f"0x{c:X}" for c in seq[i : i + 12]) + ",\n")
    out.write("};\n\n")

    out.write(f"const CccEntry kCcc[{len(ccc)}] = {{\n")
    for cp, k in ccc:
        out.write(f"  {{0x{cp:X}, {k}}},\n")
    out.write("};\n")
    out.write(f"const std::size_t kCccCount = {len(ccc)};\n\n")

    out.write(f"const CompEntry kComp[{len(comp)}] = {{\n")
    for a, b, c in comp:
        out.write(f"  {{0x{(a << 32) | b:X}ULL, 0x{c:X}}},\n")
    out.write("};\n")
    out.write(f"const std::size_t kCompCount = {len(comp)};\n\n")

    out.write("}  // namespace corpuslm::unicode::detail\n")


if __name__ == "__main__":
    main()
