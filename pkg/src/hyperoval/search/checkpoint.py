"""Append-only completed-prefix log.

    # hyperoval checkpoint task=<sha256>
    prefix=0x05,0x3f tested=131072 crc=9a1b2c3d
    prefix=0x06,0x00 tested=131072 crc=0badf00d survivors=0x01:0x00:0x00:0x00;...

``crc`` covers the task hash, prefix, count and survivors, so a line copied from
another task or edited by hand is rejected on load.
"""

from __future__ import annotations

import os
import re
import zlib
from dataclasses import dataclass
from pathlib import Path

HEADER = "# hyperoval checkpoint task="
_LINE = re.compile(
    r"prefix=(0x[0-9a-f]+),(0x[0-9a-f]+) tested=(\d+) crc=([0-9a-f]{8})(?: survivors=(\S+))?$"
)


class CheckpointError(RuntimeError):
    pass


@dataclass(frozen=True)
class PrefixRecord:
    prefix: tuple[int, int]
    tested: int
    survivors: tuple[tuple[int, ...], ...] = ()

    def _payload(self, task_hash: str) -> str:
        surv = ";".join(":".join(f"{v:#04x}" for v in s) for s in self.survivors)
        return f"{task_hash}|{self.prefix[0]:#04x},{self.prefix[1]:#04x}|{self.tested}|{surv}"

    def crc(self, task_hash: str) -> str:
        return f"{zlib.crc32(self._payload(task_hash).encode()):08x}"

    def line(self, task_hash: str) -> str:
        s = f"prefix={self.prefix[0]:#04x},{self.prefix[1]:#04x} tested={self.tested} crc={self.crc(task_hash)}"
        if self.survivors:
            s += " survivors=" + ";".join(":".join(f"{v:#04x}" for v in sv) for sv in self.survivors)
        return s


def load(path: Path, task_hash: str) -> dict[tuple[int, int], PrefixRecord]:
    """Completed prefixes from an existing log; empty if the file does not exist."""
    path = Path(path)
    if not path.exists():
        return {}
    lines = path.read_text().splitlines()
    if not lines or not lines[0].startswith(HEADER):
        raise CheckpointError(f"{path}: missing checkpoint header")
    found = lines[0][len(HEADER):].strip()
    if found != task_hash:
        raise CheckpointError(f"{path}: checkpoint belongs to task {found[:12]}, not {task_hash[:12]}")
    done = {}
    for no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        m = _LINE.match(line.strip())
        if not m:
            # a torn final line from a killed writer is dropped; anything else is corruption
            if no == len(lines):
                continue
            raise CheckpointError(f"{path}:{no}: malformed line")
        surv = ()
        if m.group(5):
            surv = tuple(tuple(int(v, 16) for v in s.split(":")) for s in m.group(5).split(";"))
        rec = PrefixRecord((int(m.group(1), 16), int(m.group(2), 16)), int(m.group(3)), surv)
        if rec.crc(task_hash) != m.group(4):
            raise CheckpointError(f"{path}:{no}: crc mismatch")
        done[rec.prefix] = rec
    return done


class Writer:
    """Single writer; each record is flushed and fsynced before the next one."""

    def __init__(self, path: Path, task_hash: str, existing=()):
        # Rewrite from validated records so a torn tail never prefixes a new line.
        self.path = Path(path)
        self.task_hash = task_hash
        tmp = self.path.with_name(self.path.name + ".tmp")
        with open(tmp, "w", encoding="ascii") as fh:
            fh.write(HEADER + task_hash + "\n")
            for rec in existing:
                fh.write(rec.line(task_hash) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, self.path)
        self._fh = open(self.path, "a", encoding="ascii")

    def _flush(self):
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def append(self, rec: PrefixRecord):
        self._fh.write(rec.line(self.task_hash) + "\n")
        self._flush()

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
