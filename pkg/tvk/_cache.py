"""Module with the persistent JSON-lines value cache."""
import json
import logging
import os
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple

from dateutil.parser import isoparse
from mpmath import mp

from ._helpers import JSONDict
from ._index import Index

log = logging.getLogger("tvk")

KINDS = ("ttilde", "apoly1", "lambda")
FILENAME = "values.jsonl"

CacheKey = Tuple[str, Tuple[int, ...], Optional[int]]


@dataclass
class CacheRecord:
    kind: str
    index: List[int]
    s: Optional[int]
    digits: int
    re: str
    im: str
    err: str
    method: str
    created: str

    @property
    def key(self) -> CacheKey:
        return self.kind, tuple(self.index), self.s

    @classmethod
    def from_line(cls, line: str) -> "CacheRecord":
        data = json.loads(line)
        record = cls(**data)
        if record.kind not in KINDS:
            raise ValueError(f"unknown record kind {record.kind!r}")
        isoparse(record.created)
        return record


class ValueCache:
    """Append-only JSON-lines file. On read, the record with the most digits per key
    wins; a record with fewer digits than requested is a miss.
    """

    def __init__(self, directory: os.PathLike) -> None:
        self.path = Path(directory) / FILENAME

    def records(self) -> Iterator[CacheRecord]:
        if not self.path.exists():
            return
        with self.path.open(encoding="utf-8") as f:
            for number, line in enumerate(f, 1):
                if not line.strip():
                    continue
                try:
                    yield CacheRecord.from_line(line)
                except (ValueError, TypeError):
                    log.warning(
                        "Skipping unreadable cache line %s in %s", number, self.path
                    )

    def _best(self) -> Dict[CacheKey, CacheRecord]:
        best: Dict[CacheKey, CacheRecord] = {}
        for record in self.records():
            current = best.get(record.key)
            if current is None or record.digits > current.digits:
                best[record.key] = record
        return best

    def get(
        self, kind: str, index: Index, s: Optional[int] = None, digits: int = 0
    ) -> Optional[CacheRecord]:
        record = self._best().get((kind, tuple(index), s))
        if record is None or record.digits < digits:
            return None
        return record

    def put(self, record: CacheRecord) -> None:
        """Append `record` as one line with a single write in append mode, so lines
        from concurrent writers never interleave or replace each other.
        """
        self.path.parent.mkdir(parents=True, exist_ok=True)
        line = json.dumps(asdict(record), ensure_ascii=False) + "\n"
        fd = os.open(self.path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
        try:
            if os.fstat(fd).st_size and not self._ends_with_newline():
                # the previous writer died mid-line
                line = "\n" + line
            os.write(fd, line.encode("utf-8"))
        finally:
            os.close(fd)

    def _ends_with_newline(self) -> bool:
        with self.path.open("rb") as f:
            f.seek(-1, os.SEEK_END)
            return f.read(1) == b"\n"

    def put_value(
        self, kind: str, index: Index, value: Any, digits: int,
        method: str, s: Optional[int] = None,
    ) -> CacheRecord:
        """Store a BigComplex-like `value` with `digits` significant digits."""
        number = mp.mpmathify(value.value)
        imag = number.imag if isinstance(number, mp.mpc) else 0
        record = CacheRecord(
            kind=kind,
            index=list(index),
            s=s,
            digits=digits,
            re=mp.nstr(mp.re(number), digits + 5, strip_zeros=False),
            im=mp.nstr(imag, digits + 5, strip_zeros=False),
            err=mp.nstr(value.err, 5),
            method=method,
            created=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )
        self.put(record)
        return record

    def stats(self) -> JSONDict:
        records = list(self.records())
        created = sorted(isoparse(r.created) for r in records)
        by_kind = {kind: sum(r.kind == kind for r in records) for kind in KINDS}
        return {
            "path": str(self.path),
            "records": len(records),
            "keys": len({r.key for r in records}),
            "by_kind": by_kind,
            "oldest": created[0].isoformat() if created else None,
            "newest": created[-1].isoformat() if created else None,
        }

    def clear(self) -> int:
        count = sum(1 for _ in self.records())
        if self.path.exists():
            self.path.unlink()
        return count
