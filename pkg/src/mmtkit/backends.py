"""Translation and scoring backends.

Neural components stay out of process. A backend is any command speaking the
line protocol: one JSON request per stdin line, one JSON response per stdout
line, same order, flushed per line, with matching "id" fields.

  translator request  {"id", "src_lang", "tgt_lang", "text"}
  translator response {"id", "text"}  or  {"id", "error": "..."}
  scorer request      {"id", "src_lang", "tgt_lang", "src", "tgt"}
  scorer response     {"id", "qe_score"}

An "error" response marks a per-item failure (the caller may skip the item);
transport problems (early exit, unparseable output, id mismatch) raise
BackendError and abort the run. In-process mock backends cover tests and
offline pipelines.
"""
from __future__ import annotations

import json
import logging
import shlex
import subprocess
from typing import Iterable, Iterator

from .errors import BackendError
from .records import check_score, json_line

log = logging.getLogger(__name__)


class BackendItemError(BackendError):
    """A single item failed; the stream itself is still healthy."""


class Backend:
    """Translate one text. Implementations must be deterministic to keep
    synthesis runs reproducible."""

    def translate(self, item_id: str, src_lang: str, tgt_lang: str, text: str) -> str:
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False


class IdentityBackend(Backend):
    def translate(self, item_id: str, src_lang: str, tgt_lang: str, text: str) -> str:
        return text


class DictionaryBackend(Backend):
    """Word-by-word mapping backend for oracle tests.

    tables maps (src_lang, tgt_lang) to a word dictionary. Unknown direction
    or word raises BackendItemError, which callers count as an item failure.
    """

    def __init__(self, tables: dict[tuple[str, str], dict[str, str]]):
        self.tables = tables

    def translate(self, item_id: str, src_lang: str, tgt_lang: str, text: str) -> str:
        table = self.tables.get((src_lang, tgt_lang))
        if table is None:
            raise BackendItemError(f"no table for {src_lang}->{tgt_lang}")
        words = []
        for w in text.split():
            if w not in table:
                raise BackendItemError(f"item {item_id!r}: no {src_lang}->{tgt_lang} entry for {w!r}")
            words.append(table[w])
        return " ".join(words)


class _LineProtocolClient:
    """Lockstep line-protocol subprocess wrapper."""

    def __init__(self, cmd: str):
        self.cmd = cmd
        try:
            self.proc = subprocess.Popen(
                shlex.split(cmd),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as e:
            raise BackendError(f"cannot start backend {cmd!r}: {e}") from None

    def request(self, obj: dict) -> dict:
        proc = self.proc
        if proc.poll() is not None:
            raise BackendError(f"backend {self.cmd!r} exited with code {proc.returncode}")
        try:
            proc.stdin.write(json_line(obj) + "\n")
            proc.stdin.flush()
        except (BrokenPipeError, OSError):
            raise BackendError(f"backend {self.cmd!r} closed its stdin pipe") from None
        line = proc.stdout.readline()
        if not line:
            raise BackendError(f"backend {self.cmd!r} closed its stdout before responding")
        try:
            resp = json.loads(line)
        except json.JSONDecodeError:
            raise BackendError(f"backend {self.cmd!r} wrote invalid JSON: {line[:80]!r}") from None
        if not isinstance(resp, dict) or resp.get("id") != obj["id"]:
            raise BackendError(
                f"backend {self.cmd!r} response id mismatch: sent {obj['id']!r}, got {resp!r}"
            )
        return resp

    def close(self) -> None:
        proc = self.proc
        if proc.stdin:
            try:
                proc.stdin.close()
            except OSError:
                pass
        try:
            proc.wait(timeout=10)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()


class SubprocessBackend(Backend):
    def __init__(self, cmd: str):
        self.client = _LineProtocolClient(cmd)

    def translate(self, item_id: str, src_lang: str, tgt_lang: str, text: str) -> str:
        resp = self.client.request(
            {"id": item_id, "src_lang": src_lang, "tgt_lang": tgt_lang, "text": text}
        )
        if "error" in resp:
            raise BackendItemError(f"item {item_id!r}: {resp['error']}")
        out = resp.get("text")
        if not isinstance(out, str):
            raise BackendError(f"backend response for {item_id!r} lacks a 'text' string")
        return out

    def close(self) -> None:
        self.client.close()


class SubprocessScorer:
    def __init__(self, cmd: str):
        self.client = _LineProtocolClient(cmd)

    def score(self, item_id: str, src_lang: str, tgt_lang: str, src: str, tgt: str) -> float:
        resp = self.client.request(
            {"id": item_id, "src_lang": src_lang, "tgt_lang": tgt_lang, "src": src, "tgt": tgt}
        )
        if "error" in resp:
            raise BackendError(f"scorer failed on item {item_id!r}: {resp['error']}")
        if "qe_score" not in resp:
            raise BackendError(f"scorer response for {item_id!r} lacks 'qe_score'")
        return check_score(resp["qe_score"], item_id)

    def score_stream(self, pairs: Iterable) -> Iterator[tuple[str, float]]:
        for ex in pairs:
            yield ex.id, self.score(ex.id, ex.src_lang, ex.tgt_lang, ex.src, ex.tgt)

    def close(self) -> None:
        self.client.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False
