"""Tables of ordinates of the non-trivial zeros of zeta.

A table holds the positive ordinates tau_n of zeros 1/2 + i*tau_n in increasing
order.  Every table is treated as RH-consistent: ordinates are real, so the
summation condition Re(tau) > 0 reduces to tau > 0.  Zeros of higher
multiplicity are not modelled; duplicates are rejected on load.

Two on-disk formats are understood:

* plain text, one ordinate per line, ``#`` comments, LF or CRLF endings
  (the layout of the Odlyzko tables);
* a binary cache: ``b"ZRT1"``, a little-endian uint64 count, then ``count``
  little-endian binary64 ordinates.
"""

from __future__ import annotations

import math
import struct
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "CACHE_MAGIC",
    "ZeroTable",
    "ZeroTableError",
    "ValidationReport",
    "counting_estimate",
    "fetch_zeros",
    "load_zero_table",
    "validate",
    "write_cache",
]

CACHE_MAGIC = b"ZRT1"
TWO_PI = 2.0 * math.pi
_COUNTING_DOMAIN = TWO_PI * math.e
_FIRST_ZERO_WINDOW = (14.13, 14.14)


class ZeroTableError(ValueError):
    """Raised for unreadable, malformed or empty zero tables."""


@dataclass(frozen=True)
class ZeroTable:
    """Immutable table of zero ordinates.

    The constructor only checks that the ordinates are finite and positive;
    ordering and the counting-function checks are the job of :func:`validate`,
    so that deliberately broken tables can still be built and inspected.
    """

    ordinates: np.ndarray
    source: str = "<memory>"
    decimal_digits: int = 15

    def __post_init__(self):
        arr = np.array(self.ordinates, dtype=np.float64).ravel()
        if arr.size == 0:
            raise ZeroTableError("empty zero table")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
            raise ZeroTableError("ordinates must be finite and positive")
        if self.decimal_digits < 1:
            raise ZeroTableError("decimal_digits must be positive")
        arr.setflags(write=False)
        object.__setattr__(self, "ordinates", arr)

    @property
    def count(self) -> int:
        return int(self.ordinates.size)

    @property
    def first(self) -> float:
        return float(self.ordinates[0])

    @property
    def t_max(self) -> float:
        return float(self.ordinates[-1])

    def prefix(self, n: int) -> "ZeroTable":
        if n < 1:
            raise ZeroTableError("prefix length must be positive")
        return ZeroTable(self.ordinates[:n], f"{self.source}[:{n}]", self.decimal_digits)

    def suffix(self, start: int) -> "ZeroTable":
        return ZeroTable(self.ordinates[start:], f"{self.source}[{start}:]",
                         self.decimal_digits)

    def count_below(self, t: float) -> int:
        return int(np.searchsorted(self.ordinates, t, side="left"))

    def __len__(self) -> int:
        return self.count

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZeroTable):
            return NotImplemented
        return (self.source == other.source and self.decimal_digits == other.decimal_digits
                and np.array_equal(self.ordinates, other.ordinates))

    __hash__ = None


@dataclass
class ValidationReport:
    monotone_ok: bool
    first_zero_ok: bool
    max_counting_deviation: float
    duplicate_count: int
    checked_heights: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.monotone_ok and self.first_zero_ok and self.duplicate_count == 0
                and self.max_counting_deviation <= 2.0)


def counting_estimate(t: float) -> float:
    """Riemann-von Mangoldt main term for the number of zeros with ordinate <= t.

    Returns (t/2pi) log(t/2pi) - t/2pi + 7/8.  Defined for t > 2*pi*e.
    """
    if not t > _COUNTING_DOMAIN:
        raise ValueError(f"counting_estimate needs t > 2*pi*e, got {t!r}")
    return _counting_main_term(t)


def _counting_main_term(t: float) -> float:
    x = t / TWO_PI
    return x * math.log(x) - x + 0.875


def _parse_text(data: bytes, source: str) -> tuple[list[float], int]:
    values: list[float] = []
    digits = 1
    for lineno, raw in enumerate(data.decode("ascii", errors="replace").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = float(line)
        except ValueError:
            raise ZeroTableError(f"{source}: line {lineno}: cannot parse {line!r}") from None
        if not math.isfinite(value) or value <= 0.0:
            raise ZeroTableError(f"{source}: line {lineno}: not a positive number: {line!r}")
        if "." in line:
            digits = max(digits, len(line.split(".", 1)[1].rstrip()))
        values.append(value)
    return values, digits


def _parse_cache(data: bytes, source: str) -> list[float]:
    if len(data) < 12:
        raise ZeroTableError(f"{source}: truncated cache header")
    (count,) = struct.unpack_from("<Q", data, 4)
    if len(data) != 12 + 8 * count:
        raise ZeroTableError(f"{source}: cache size does not match count {count}")
    return np.frombuffer(data, dtype="<f8", count=count, offset=12).astype(np.float64)


def load_zero_table(path, limit: int | None = None) -> ZeroTable:
    """Load a text table or a ``ZRT1`` cache, sorted, optionally truncated to ``limit``."""
    if limit is not None and limit < 1:
        raise ZeroTableError("limit must be a positive integer")
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise ZeroTableError(f"cannot read zero table {path}: {exc}") from exc

    if data[:4] == CACHE_MAGIC:
        values = np.asarray(_parse_cache(data, str(path)))
        digits = 15
    else:
        values, digits = _parse_text(data, str(path))
        values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ZeroTableError(f"{path}: no ordinates found")

    values = np.sort(values, kind="stable")
    dups = int(np.count_nonzero(np.diff(values) == 0.0))
    if dups:
        raise ZeroTableError(f"{path}: {dups} duplicate ordinate(s); multiple zeros unsupported")
    if limit is not None:
        values = values[:limit]
    return ZeroTable(values, str(path), digits)


def write_cache(table: ZeroTable, path) -> Path:
    path = Path(path)
    payload = CACHE_MAGIC + struct.pack("<Q", table.count) \
        + table.ordinates.astype("<f8").tobytes()
    path.write_bytes(payload)
    return path


def validate(table: ZeroTable) -> ValidationReport:
    tau = table.ordinates
    diffs = np.diff(tau)
    monotone = bool(np.all(diffs > 0.0))
    lo, hi = _FIRST_ZERO_WINDOW
    first_ok = bool(lo < tau[0] < hi) and bool(np.all(tau > 14.0))

    # compare the exact count at the midpoint between consecutive zeros (k below,
    # nothing on the boundary) with the smooth estimate, at every decile
    srt = np.sort(tau)
    duplicates = int(np.count_nonzero(np.diff(srt) == 0.0))
    n = srt.size
    worst = 0.0
    heights = []
    if n >= 2:
        ks = sorted({min(max(round(j * n / 10), 1), n - 1) for j in range(1, 11)})
        for k in ks:
            t = 0.5 * (srt[k - 1] + srt[k])
            if t <= _COUNTING_DOMAIN:
                continue
            dev = abs(k - counting_estimate(t))
            heights.append(float(t))
            worst = max(worst, dev)
    return ValidationReport(monotone, first_ok, float(worst), duplicates, heights)


def fetch_zeros(url: str, destination, timeout: float = 60.0) -> Path:
    """Download ``url`` verbatim to ``destination`` (no parsing).

    Raises ``ConnectionError`` on network failures or non-success status and
    ``OSError`` when the destination cannot be written.  The parent directory
    is not created.
    """
    destination = Path(destination)
    if not destination.parent.is_dir():
        raise FileNotFoundError(f"destination directory does not exist: {destination.parent}")
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            status = getattr(resp, "status", None)
            if status is not None and not 200 <= status < 300:
                raise ConnectionError(f"{url}: HTTP status {status}")
            body = resp.read()
    except urllib.error.HTTPError as exc:
        raise ConnectionError(f"{url}: HTTP status {exc.code}") from exc
    except (urllib.error.URLError, TimeoutError, OSError) as exc:
        raise ConnectionError(f"{url}: {exc}") from exc
    destination.write_bytes(body)
    return destination
