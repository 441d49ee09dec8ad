#!/usr/bin/env python3
"""Deterministic toy translator speaking the line protocol.

Reads one JSON object per line ({"id", "src_lang", "tgt_lang", "text"}) and
answers each with {"id", "text"}. The "translation" just tags the text with
the target language, which is enough to test plumbing: it is deterministic,
reversible by eye, and never empty for non-empty input.

Failure injection for tests:
  --fail-substring S   items whose text contains S get an "error" response
  --fail-every N       every Nth item (1-based) gets an "error" response
  --crash-after N      exit abruptly after N responses
"""
import argparse
import json
import sys


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--fail-substring", default=None)
    parser.add_argument("--fail-every", type=int, default=0)
    parser.add_argument("--crash-after", type=int, default=0)
    args = parser.parse_args()

    seen = 0
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        req = json.loads(line)
        seen += 1
        fail = (args.fail_substring is not None and args.fail_substring in req["text"]) or (
            args.fail_every and seen % args.fail_every == 0
        )
        if fail:
            resp = {"id": req["id"], "error": "injected failure"}
        else:
            resp = {"id": req["id"], "text": f"[{req['tgt_lang']}] {req['text']}"}
        sys.stdout.write(json.dumps(resp, ensure_ascii=False) + "\n")
        sys.stdout.flush()
        if args.crash_after and seen >= args.crash_after:
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
