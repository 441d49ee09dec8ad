#!/usr/bin/env python3
"""Generate a small multi-way corpus for demos and manual testing.

Each record carries one sentence per requested language. Text is synthetic
but language-tagged and record-unique, so every downstream stage (expansion,
downsampling, mixing, filtering) has real variation to work with.
"""
import argparse
import json
import sys

WORDS = ["river", "stone", "lantern", "harvest", "window", "thread", "meadow", "signal"]


def sentence(lang: str, i: int) -> str:
    a = WORDS[i % len(WORDS)]
    b = WORDS[(i * 3 + 1) % len(WORDS)]
    return f"{lang} {a} {b} {i:05d}"


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", required=True)
    parser.add_argument("--records", type=int, default=200)
    parser.add_argument("--langs", default="en,zh,fr,de,bg,ar,ru,ja")
    args = parser.parse_args()

    langs = [code.strip() for code in args.langs.split(",") if code.strip()]
    if "en" not in langs and "zh" not in langs:
        print("need at least one of en, zh in --langs", file=sys.stderr)
        return 2

    with open(args.out, "w", encoding="utf-8") as f:
        for i in range(args.records):
            rec = {
                "id": f"toy{i:05d}",
                "sentences": {lang: sentence(lang, i) for lang in langs},
            }
            f.write(json.dumps(rec, ensure_ascii=False, separators=(",", ":")) + "\n")
    print(f"wrote {args.records} records over {len(langs)} languages to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
