"""Rebuild the shipped dictionary and trigram corpus from pyspellchecker's English list.

The word-frequency table bundled with pyspellchecker stands in for a Hunspell
English dictionary. Usage:

    pip install pyspellchecker
    python scripts/make_lexicon.py
"""

import gzip
import json
from importlib import resources
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "spatialhops" / "data" / "lexicon"
CORPUS_WORDS = 25_000


def main():
    src = resources.files("spellchecker") / "resources" / "en.json.gz"
    freq = json.loads(gzip.decompress(src.read_bytes()))
    words = sorted({w.lower() for w in freq if w.isascii() and w.isalpha()})
    OUT.mkdir(parents=True, exist_ok=True)
    with gzip.GzipFile(OUT / "dictionary_en.txt.gz", "wb", mtime=0) as fh:
        fh.write(("\n".join(words) + "\n").encode())
    common = sorted((w for w in freq if w.isascii() and w.isalpha() and w.islower() and len(w) > 2),
                    key=lambda w: (-freq[w], w))[:CORPUS_WORDS]
    lines = [" ".join(common[i:i + 12]) for i in range(0, len(common), 12)]
    (OUT / "corpus_en.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"dictionary: {len(words)} words; corpus: {len(common)} tokens")


if __name__ == "__main__":
    main()
