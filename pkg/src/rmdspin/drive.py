"""Label sequences selecting H_z or H_x for each period.

Labels are stored as ``int8`` with ``Z = 0`` and ``X = 1``. Supported drives:

* ``rmd<n>``: random multipolar drive of order ``n``, a random concatenation
  of two mutually flipped blocks of length ``2**n`` (``rmd0`` is iid coin flips);
* ``thue-morse``: the deterministic limit ``n -> inf``;
* ``floquet``: strict alternation Z, X, Z, X, ...
"""

from __future__ import annotations

import copy
import enum
import re
from dataclasses import dataclass, field

import numpy as np

MAX_BLOCK_ORDER = 30

# block choices are drawn in fixed-size batches so the sequence does not
# depend on how many labels a caller pulls at once
_CHOICE_BATCH = 1024


class HamLabel(enum.IntEnum):
    Z = 0
    X = 1


class ResourceLimitError(ValueError):
    """Requested block order would not fit in memory."""


@dataclass(frozen=True)
class BlockPair:
    order: int
    plus_block: np.ndarray
    minus_block: np.ndarray

    @property
    def length(self) -> int:
        return self.plus_block.size


def build_blocks(n: int) -> BlockPair:
    """Recursive multipolar blocks of order ``n``.

    ``B0+ = (Z)``, ``B0- = (X)`` and ``Bn+ = B(n-1)+ ++ B(n-1)-``,
    ``Bn- = B(n-1)- ++ B(n-1)+``.
    """
    if n < 0:
        raise ValueError(f"block order must be non-negative, got {n}")
    if n > MAX_BLOCK_ORDER:
        raise ResourceLimitError(f"block order {n} exceeds limit {MAX_BLOCK_ORDER}")
    plus = np.array([HamLabel.Z], dtype=np.int8)
    minus = np.array([HamLabel.X], dtype=np.int8)
    for _ in range(n):
        plus, minus = np.concatenate([plus, minus]), np.concatenate([minus, plus])
    return BlockPair(n, plus, minus)


def _popcount_parity(k: np.ndarray) -> np.ndarray:
    x = k.astype(np.uint64, copy=True)
    for shift in (32, 16, 8, 4, 2, 1):
        x ^= x >> np.uint64(shift)
    return (x & np.uint64(1)).astype(np.int8)


def thue_morse_label(k: int) -> HamLabel:
    """Z if ``k`` has an even number of set bits, X otherwise."""
    if k < 0:
        raise ValueError(f"index must be non-negative, got {k}")
    return HamLabel(bin(k).count("1") & 1)


def thue_morse_labels(start: int, count: int) -> np.ndarray:
    return _popcount_parity(np.arange(start, start + count, dtype=np.uint64))


def labels_to_string(labels) -> str:
    return "".join("X" if int(v) else "Z" for v in labels)


@dataclass(frozen=True)
class DriveSpec:
    """Drive kind plus the seed for RMD block choices.

    ``kind`` is one of ``"rmd"``, ``"thue-morse"`` or ``"floquet"``.
    """

    kind: str
    order: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("rmd", "thue-morse", "floquet"):
            raise ValueError(f"unknown drive kind {self.kind!r}")
        if self.kind == "rmd" and self.order < 0:
            raise ValueError(f"RMD order must be non-negative, got {self.order}")

    @classmethod
    def parse(cls, name: str, seed: int = 0) -> DriveSpec:
        """Parse ``rmd<n>``, ``random``, ``thue-morse``/``tm`` or ``floquet``."""
        key = name.strip().lower()
        if key in ("tm", "thue-morse", "thuemorse"):
            return cls("thue-morse", seed=seed)
        if key == "floquet":
            return cls("floquet", seed=seed)
        if key == "random":
            return cls("rmd", 0, seed)
        m = re.fullmatch(r"rmd[-_:]?(\d+)", key)
        if m:
            return cls("rmd", int(m.group(1)), seed)
        raise ValueError(f"unknown drive {name!r}")

    @property
    def name(self) -> str:
        return f"rmd{self.order}" if self.kind == "rmd" else self.kind

    @property
    def block_length(self) -> int:
        """Natural recording stride: ``2**n`` for RMD, 1 otherwise."""
        return 1 << self.order if self.kind == "rmd" else 1


@dataclass
class DriveGenerator:
    """Stateful stream of labels for one drive realization.

    Successive :meth:`next_label` / :meth:`take` calls yield elements
    ``k = 0, 1, 2, ...`` of the sequence regardless of how they are batched.
    Use :meth:`clone` to branch a generator at its current cursor.
    """

    spec: DriveSpec
    cursor: int = 0
    _blocks: BlockPair | None = field(default=None, repr=False)
    _rng: np.random.Generator | None = field(default=None, repr=False)
    _choices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int8), repr=False)
    _choice_start: int = 0

    def __post_init__(self):
        if self.spec.kind == "rmd" and self._blocks is None:
            self._blocks = build_blocks(self.spec.order)
            self._rng = np.random.default_rng(self.spec.seed)

    @classmethod
    def from_name(cls, name: str, seed: int = 0) -> DriveGenerator:
        return cls(DriveSpec.parse(name, seed))

    def clone(self) -> DriveGenerator:
        return copy.deepcopy(self)

    def next_label(self) -> HamLabel:
        return HamLabel(int(self.take(1)[0]))

    def take(self, count: int) -> np.ndarray:
        """Next ``count`` labels as an ``int8`` array; advances the cursor."""
        if count < 0:
            raise ValueError("count must be non-negative")
        start = self.cursor
        kind = self.spec.kind
        if kind == "floquet":
            out = (np.arange(start, start + count, dtype=np.int64) & 1).astype(np.int8)
        elif kind == "thue-morse":
            out = thue_morse_labels(start, count)
        else:
            out = self._take_rmd(start, count)
        self.cursor += count
        return out

    def _take_rmd(self, start: int, count: int) -> np.ndarray:
        if count == 0:
            return np.zeros(0, dtype=np.int8)
        n = self.spec.order
        pos = np.arange(start, start + count, dtype=np.int64)
        block = pos >> n
        offset = pos & ((1 << n) - 1)
        first, last = int(block[0]), int(block[-1])
        # drop batches that lie wholly before the current block
        drop = (first - self._choice_start) // _CHOICE_BATCH * _CHOICE_BATCH
        if drop > 0:
            self._choices = self._choices[drop:]
            self._choice_start += drop
        while self._choice_start + self._choices.size <= last:
            batch = (self._rng.random(_CHOICE_BATCH) >= 0.5).astype(np.int8)
            self._choices = np.concatenate([self._choices, batch])
        flip = self._choices[block - self._choice_start]
        return self._blocks.plus_block[offset] ^ flip
