#!/usr/bin/env python3
"""Deterministic toy quality scorer speaking the line protocol.

Reads {"id", "src_lang", "tgt_lang", "src", "tgt"} per line and answers
{"id", "qe_score"} with a hash-derived score in [0, 1]. The same pair
always gets the same score, so threshold filters built on top of this are
reproducible in tests and demos.

  --fail-substring S   items whose src or tgt contains S get an "error" response
"""
import argparse
import json
import sys

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    h = FNV64_OFFSET
    for byte in data:
        h = ((h ^ byte) * FNV64_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--fail-substring", default=None)
    args = parser.parse_args()

    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        req = json.loads(line)
        if args.fail_substring is not None and (
            args.fail_substring in req["src"] or args.fail_substring in req["tgt"]
        ):
            resp = {"id": req["id"], "error": "injected failure"}
        else:
            key = f"{req['src']}\x1f{req['tgt']}".encode("utf-8")
            resp = {"id": req["id"], "qe_score": fnv1a64(key) / 2.0**64}
        sys.stdout.write(json.dumps(resp, ensure_ascii=False) + "\n")
        sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
