"""Plain-text file formats.

Matrix file::

    rows cols
    a00 a01 ...
    ...
    # field p^m            (optional, ignored by the integer reader)

Code file: a header line ``ambient n, field p^m, members k`` followed by k
matrix blocks in the format above, entries being field element indices.

Manifest: ``key=value`` lines; ``#`` starts a comment.
Partition file: one cell per line, zero-based indices.
Permutation file: one generator per line in image notation.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .codes import SubspaceCode
from .exactmat import FqMatrix, IntMatrix, Subspace
from .gf import Field, parse_field
from .partitions import EquitablePartition, orbit_partition

__all__ = [
    "FormatError",
    "format_matrix",
    "parse_matrix",
    "read_matrix",
    "write_matrix",
    "read_manifest",
    "write_manifest",
    "read_family",
    "write_code",
    "read_code",
    "read_partition",
    "write_partition",
    "read_permutations",
]


class FormatError(ValueError):
    def __init__(self, source: str, line: int | None, message: str):
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def format_matrix(m: IntMatrix | np.ndarray, field: Field | None = None) -> str:
    a = m.array if isinstance(m, (IntMatrix, FqMatrix)) else np.asarray(m)
    lines = [f"{a.shape[0]} {a.shape[1]}"]
    lines += [" ".join(str(int(x)) for x in row) for row in a]
    if field is not None:
        lines.append(f"# field {field.descriptor}")
    return "\n".join(lines) + "\n"


def _parse_block(lines: list[tuple[int, str]], pos: int, source: str) -> tuple[np.ndarray, int]:
    if pos >= len(lines):
        raise FormatError(source, None, "expected a 'rows cols' header, found end of file")
    no, head = lines[pos]
    parts = head.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise FormatError(source, no, f"expected 'rows cols', got {head!r}")
    rows, cols = int(parts[0]), int(parts[1])
    data = np.zeros((rows, cols), dtype=np.int64)
    for r in range(rows):
        if pos + 1 + r >= len(lines):
            raise FormatError(source, None, f"expected {rows} rows, found {r}")
        no, text = lines[pos + 1 + r]
        try:
            vals = [int(x) for x in text.split()]
        except ValueError:
            raise FormatError(source, no, f"non-integer entry in {text!r}") from None
        if len(vals) != cols:
            raise FormatError(source, no, f"expected {cols} entries, got {len(vals)}")
        data[r] = vals
    return data, pos + 1 + rows


def parse_matrix(text: str, source: str = "<string>") -> tuple[IntMatrix, Field | None]:
    lines = _content_lines(text)
    data, end = _parse_block(lines, 0, source)
    if end != len(lines):
        raise FormatError(source, lines[end][0], "trailing content after matrix")
    field = None
    match = re.search(r"^\s*#\s*field\s+(\S+)\s*$", text, flags=re.M)
    if match:
        field = parse_field(match.group(1))
    return IntMatrix(data), field


def read_matrix(path: str | Path) -> IntMatrix:
    path = Path(path)
    return parse_matrix(path.read_text(), str(path))[0]


def write_matrix(path: str | Path, m: IntMatrix | np.ndarray, field: Field | None = None) -> None:
    Path(path).write_text(format_matrix(m, field))


def read_manifest(path: str | Path) -> dict[str, str]:
    path = Path(path)
    out: dict[str, str] = {}
    for no, line in _content_lines(path.read_text()):
        if "=" not in line:
            raise FormatError(str(path), no, f"expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def write_manifest(path: str | Path, entries: dict[str, object]) -> None:
    Path(path).write_text("".join(f"{k}={v}\n" for k, v in entries.items()))


def _natural_key(name: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def read_family(directory: str | Path) -> tuple[list[IntMatrix], dict[str, str], list[str]]:
    """Matrices named by ``files=`` in manifest.txt, else every *.mat in natural order."""
    d = Path(directory)
    if not d.is_dir():
        raise FormatError(str(d), None, "family directory does not exist")
    manifest = read_manifest(d / "manifest.txt") if (d / "manifest.txt").exists() else {}
    if "files" in manifest:
        names = [n.strip() for n in manifest["files"].split(",") if n.strip()]
    else:
        names = sorted((p.name for p in d.glob("*.mat")), key=_natural_key)
    if not names:
        raise FormatError(str(d), None, "no matrix files found")
    mats = []
    for name in names:
        if not (d / name).exists():
            raise FormatError(str(d / "manifest.txt"), None, f"referenced file {name} does not exist")
        mats.append(read_matrix(d / name))
    return mats, manifest, names


def write_code(path: str | Path, code: SubspaceCode) -> None:
    parts = [f"ambient {code.ambient_dim}, field {code.field.descriptor}, members {len(code)}\n"]
    for u in code.members:
        parts.append(format_matrix(u.basis.array))
    Path(path).write_text("".join(parts))


_CODE_HEADER = re.compile(r"^ambient\s+(\d+)\s*,\s*field\s+(\S+)\s*,\s*members\s+(\d+)$")


def read_code(path: str | Path) -> SubspaceCode:
    path = Path(path)
    lines = _content_lines(path.read_text())
    if not lines:
        raise FormatError(str(path), None, "empty code file")
    match = _CODE_HEADER.match(lines[0][1])
    if not match:
        raise FormatError(str(path), lines[0][0], "expected 'ambient n, field p^m, members k'")
    n, field, k = int(match.group(1)), parse_field(match.group(2)), int(match.group(3))
    pos, members = 1, []
    for _ in range(k):
        block, pos = _parse_block(lines, pos, str(path))
        if block.shape[1] != n and block.size:
            raise FormatError(str(path), None, f"member has {block.shape[1]} columns, expected {n}")
        members.append(Subspace(FqMatrix(field, block.reshape(block.shape[0], n))))
    if pos != len(lines):
        raise FormatError(str(path), lines[pos][0], "trailing content after the last member")
    return SubspaceCode(field, n, tuple(members))


def read_partition(path: str | Path, n: int | None = None) -> EquitablePartition:
    path = Path(path)
    cells = []
    for no, line in _content_lines(path.read_text()):
        try:
            cells.append(tuple(int(x) for x in line.split()))
        except ValueError:
            raise FormatError(str(path), no, f"non-integer index in {line!r}") from None
    size = n if n is not None else sum(len(c) for c in cells)
    try:
        return EquitablePartition(size, tuple(cells))
    except ValueError as exc:
        raise FormatError(str(path), None, str(exc)) from None


def write_partition(path: str | Path, part: EquitablePartition) -> None:
    Path(path).write_text("".join(" ".join(map(str, c)) + "\n" for c in part.cells))


def read_permutations(path: str | Path) -> list[list[int]]:
    path = Path(path)
    gens = []
    for no, line in _content_lines(path.read_text()):
        try:
            gens.append([int(x) for x in line.split()])
        except ValueError:
            raise FormatError(str(path), no, f"non-integer image in {line!r}") from None
    return gens


def orbit_partition_from_file(path: str | Path, n: int) -> EquitablePartition:
    return orbit_partition(n, read_permutations(path))
