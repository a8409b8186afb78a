#!/usr/bin/env python3
"""Convert a Brill-format lexicon (word TAG ...) into data/pos_lexicon.tsv.

Usage: build_pos_lexicon.py en-lexicon.txt > data/pos_lexicon.tsv

Only lowercase alphabetic entries are kept (hyphens and apostrophes allowed).
Penn tags collapse onto the six coarse classes used by the tagger.
"""
import re
import sys

PENN = {
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ",
    "VB": "VERB", "VBD": "VERB", "VBG": "VERB", "VBN": "VERB", "VBP": "VERB", "VBZ": "VERB",
    "NN": "NOUN", "NNS": "NOUN",
    "NNP": "PROPER", "NNPS": "PROPER",
    "PRP": "PRONOUN", "PRP$": "PRONOUN", "WP": "PRONOUN", "WP$": "PRONOUN",
}
WORD = re.compile(r"^[a-z][a-z'-]*$")

def main(path):
    print("# pos-lexicon v1")
    print("# word<TAB>class[,class...]; first class is the default reading")
    print("# derived from the Brill tagger lexicon (MIT, via TextBlob)")
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith(";;;"):
                continue
            parts = line.split()
            if len(parts) < 2 or not WORD.match(parts[0]) or parts[0] in seen:
                continue
            seen.add(parts[0])
            classes = []
            for tag in parts[1:]:
                cls = PENN.get(tag, "OTHER")
                if cls not in classes:
                    classes.append(cls)
            print(f"{parts[0]}\t{','.join(classes)}")

if __name__ == "__main__":
    main(sys.argv[1])
