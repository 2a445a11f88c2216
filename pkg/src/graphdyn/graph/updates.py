"""Edge update records, batches, and the on-disk update stream format."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence

from ..errors import MalformedInputError

ADD = "a"
DELETE = "d"


@dataclass(frozen=True)
class UpdateRecord:
    """One structural update: insert (kind 'a') or delete (kind 'd') of an edge."""

    kind: str
    src: int
    dst: int
    weight: int = 1

    def __post_init__(self):
        if self.kind not in (ADD, DELETE):
            raise MalformedInputError(f"unknown update kind {self.kind!r}")


class UpdateBatch:
    """An ordered slice of update records processed as one unit."""

    def __init__(self, records: Iterable[UpdateRecord]):
        self.records: List[UpdateRecord] = list(records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[UpdateRecord]:
        return iter(self.records)

    @property
    def deletes(self) -> List[UpdateRecord]:
        return [r for r in self.records if r.kind == DELETE]

    @property
    def adds(self) -> List[UpdateRecord]:
        return [r for r in self.records if r.kind == ADD]

    def only_deletes(self) -> "UpdateBatch":
        return UpdateBatch(self.deletes)

    def only_adds(self) -> "UpdateBatch":
        return UpdateBatch(self.adds)


class UpdateStream:
    """The full ordered update sequence, sliceable into fixed-size batches."""

    def __init__(self, records: Iterable[UpdateRecord]):
        self.records: List[UpdateRecord] = list(records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[UpdateRecord]:
        return iter(self.records)

    def batches(self, batch_size: int) -> Iterator[UpdateBatch]:
        if batch_size <= 0:
            raise ValueError("batch_size must be positive")
        for start in range(0, len(self.records), batch_size):
            yield UpdateBatch(self.records[start : start + batch_size])

    def as_batch(self) -> UpdateBatch:
        return UpdateBatch(self.records)


def parse_update_line(line: str, path: str | None = None, lineno: int | None = None) -> UpdateRecord | None:
    """Parse one update-stream line; returns None for blanks and comments."""
    text = line.split("#", 1)[0].strip()
    if not text:
        return None
    parts = text.split()
    kind = parts[0]
    if kind == ADD:
        if len(parts) not in (3, 4):
            raise MalformedInputError("expected 'a <src> <dst> [weight]'", path=path, line=lineno)
        weight = int(parts[3]) if len(parts) == 4 else 1
        return UpdateRecord(ADD, int(parts[1]), int(parts[2]), weight)
    if kind == DELETE:
        if len(parts) != 3:
            raise MalformedInputError("expected 'd <src> <dst>'", path=path, line=lineno)
        return UpdateRecord(DELETE, int(parts[1]), int(parts[2]))
    raise MalformedInputError(f"unknown update kind {kind!r}", path=path, line=lineno)


def load_update_stream(path: str) -> UpdateStream:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            try:
                rec = parse_update_line(line, path=path, lineno=lineno)
            except ValueError as exc:  # int() failures
                raise MalformedInputError(str(exc), path=path, line=lineno) from exc
            if rec is not None:
                records.append(rec)
    return UpdateStream(records)


def dump_update_stream(records: Sequence[UpdateRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            if rec.kind == ADD:
                fh.write(f"a {rec.src} {rec.dst} {rec.weight}\n")
            else:
                fh.write(f"d {rec.src} {rec.dst}\n")
