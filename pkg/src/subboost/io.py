"""On-disk formats: JSONL corpora, snapshot/table/model files, digests.

Every writer emits byte-stable output (sorted keys, compact separators, LF
line endings) so reruns over identical inputs produce identical files.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .types import InteractionEvent, Product, QueryJudgment


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def sha256_of_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def sha256_of_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_jsonl(path: str | Path, records: Iterable[Mapping]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(canonical_json(rec))
            fh.write("\n")


def read_jsonl(path: str | Path) -> Iterator[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)


def write_json(path: str | Path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(obj, sort_keys=True, indent=1))
        fh.write("\n")


def read_json(path: str | Path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


# -- typed corpora ------------------------------------------------------

def write_catalog(path: str | Path, products: Iterable[Product]) -> None:
    write_jsonl(path, (p.to_record() for p in products))


def read_catalog(path: str | Path) -> list[Product]:
    return [Product.from_record(rec) for rec in read_jsonl(path)]


def write_events(path: str | Path, events: Iterable[InteractionEvent]) -> None:
    write_jsonl(path, (e.to_record() for e in events))


def read_events(path: str | Path) -> list[InteractionEvent]:
    return [InteractionEvent.from_record(rec) for rec in read_jsonl(path)]


def write_judgments(path: str | Path, judgments: Iterable[QueryJudgment]) -> None:
    write_jsonl(path, (j.to_record() for j in judgments))


def read_judgments(path: str | Path) -> list[QueryJudgment]:
    return [QueryJudgment.from_record(rec) for rec in read_jsonl(path)]


def write_csv(path: str | Path, header: list[str], rows: Iterable[Iterable]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(x) for x in row) + "\n")
