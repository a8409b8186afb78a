#!/usr/bin/env python3
"""Convert a marked-up story into plain text plus a gold JSONL file.

Markup: ``[surface|Entity Key]`` for a name, ``[surface|Entity Key|ALIAS]``
for an alias and ``[surface|Entity Key|PRONOUN]`` for a pronoun. Paragraphs
are separated by blank lines. Offsets in the output are code-point offsets
relative to the trimmed paragraph, matching the engine's paragraph split.

usage: markup_to_gold.py story.marked.txt story.txt story.gold.jsonl
"""

import json
import re
import sys

MARK = re.compile(r"\[([^\[\]|]+)\|([^\[\]|]+)(?:\|(NAMED|ALIAS|PRONOUN))?\]")
PARAGRAPH_BREAK = re.compile(r"\n{2,}")


def convert(marked):
    paragraphs = [p.strip() for p in PARAGRAPH_BREAK.split(marked.strip("\n"))]
    paragraphs = [p for p in paragraphs if p]
    plain, records = [], []
    for index, para in enumerate(paragraphs):
        out, pos = [], 0
        length = 0
        for m in MARK.finditer(para):
            before = para[pos:m.start()]
            out.append(before)
            length += len(before)
            surface, key, kind = m.group(1), m.group(2).strip(), m.group(3) or "NAMED"
            records.append({
                "para_index": index,
                "start": length,
                "end": length + len(surface),
                "kind": kind,
                "entity_key": key,
            })
            out.append(surface)
            length += len(surface)
            pos = m.end()
        out.append(para[pos:])
        text = "".join(out)
        if "[" in text or "]" in text:
            raise SystemExit(f"paragraph {index}: unbalanced markup")
        plain.append(text)
    return "\n\n".join(plain) + "\n", records


def main(argv):
    if len(argv) != 4:
        raise SystemExit(__doc__)
    with open(argv[1], encoding="utf-8") as f:
        text, records = convert(f.read())
    with open(argv[2], "w", encoding="utf-8") as f:
        f.write(text)
    with open(argv[3], "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")
    print(f"{len(records)} records", file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv)
