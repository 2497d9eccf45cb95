"""Threshold-pruned partial difference distribution tables.

The builder assigns bits of (a, b, c) from the LSB upward and prunes a
branch as soon as the probability of the partial differential falls
below the threshold.  Because the weight of a prefix only grows as bits
are appended, pruning is sound and the emitted set is exactly
{ valid triples with 2^-weight >= p_threshold }.

Internally the frontier of live prefixes is held in numpy arrays and
expanded one bit position at a time; a prefix is summarised by its
weight so far plus a three-way carry state (bits at the previous
position all equal with common value 0 or 1, or not all equal), which is
all the validity condition looks at.
"""

from __future__ import annotations

import logging
import os
import random
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor
from typing import Iterator, List, Optional, Tuple

import numpy as np

from .differential import (
    Differential,
    differential_weight,
    dyadic_str,
    is_valid_differential,
)
from .simon import ParameterError

log = logging.getLogger(__name__)

# carry states of a prefix
_EQ0 = 0  # previous bits of a,b,c all equal 0
_EQ1 = 1  # previous bits of a,b,c all equal 1
_NEQ = 2  # previous bits not all equal

DEFAULT_MAX_ELEMENTS = 1 << 28


class PddtOverflowError(RuntimeError):
    """Table grew past max_elements; carries the count reached."""

    def __init__(self, count: int, max_elements: int):
        super().__init__(f"PDDT exceeded max_elements={max_elements} (reached {count})")
        self.count = count
        self.max_elements = max_elements


@dataclass(frozen=True)
class PddtConfig:
    word_size: int
    p_threshold: float
    max_elements: int = DEFAULT_MAX_ELEMENTS

    def __post_init__(self):
        if not 0 < self.p_threshold <= 1:
            raise ParameterError(f"threshold {self.p_threshold} outside (0, 1]")
        if self.word_size < 1:
            raise ParameterError(f"word size {self.word_size} < 1")

    @property
    def max_weight(self) -> int:
        """Largest integer weight w with 2^-w >= p_threshold."""
        w = 0
        while 2.0 ** -(w + 1) >= self.p_threshold:
            w += 1
        return w


@dataclass(frozen=True)
class SampleSpec:
    fraction: float = 0.03
    quota_rule: bool = True
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.fraction <= 1:
            raise ParameterError(f"sample fraction {self.fraction} outside (0, 1]")


class Pddt:
    """Ordered, deduplicated table of differentials above a threshold.

    Entries are kept column-wise (a, b, c as uint64, hw as uint8) and
    sorted by (a, b, c); the table is immutable after construction.
    """

    def __init__(self, config: PddtConfig, a, b, c, hw):
        self.config = config
        self.a = np.asarray(a, dtype=np.uint64)
        self.b = np.asarray(b, dtype=np.uint64)
        self.c = np.asarray(c, dtype=np.uint64)
        self.hw = np.asarray(hw, dtype=np.uint8)

    def __len__(self) -> int:
        return len(self.a)

    def __iter__(self) -> Iterator[Differential]:
        n = self.config.word_size
        for i in range(len(self)):
            yield Differential(int(self.a[i]), int(self.b[i]), int(self.c[i]), int(self.hw[i]), n)

    def __getitem__(self, i: int) -> Differential:
        n = self.config.word_size
        return Differential(int(self.a[i]), int(self.b[i]), int(self.c[i]), int(self.hw[i]), n)

    def triples(self) -> set:
        return set(zip(self.a.tolist(), self.b.tolist(), self.c.tolist()))

    # --- serialization -------------------------------------------------

    def to_csv(self) -> bytes:
        """Canonical CSV: id,a,b,c,dp,hw with zero-padded lowercase hex."""
        n = self.config.word_size
        digits = -(-n // 4)
        lines = ["id,a,b,c,dp,hw"]
        for i in range(len(self)):
            hw = int(self.hw[i])
            lines.append(
                f"{i},0x{int(self.a[i]):0{digits}x},0x{int(self.b[i]):0{digits}x},"
                f"0x{int(self.c[i]):0{digits}x},{dyadic_str(hw)},{hw}"
            )
        return ("\n".join(lines) + "\n").encode("utf-8")

    @classmethod
    def from_csv(cls, data: bytes, p_threshold: Optional[float] = None) -> "Pddt":
        """Parse the canonical CSV; lines starting with '#' are skipped.

        The word size is recovered from the hex field width; if the
        threshold is not given, the smallest dp present is used.
        """
        rows: List[Tuple[int, int, int, int]] = []
        digits = 1
        for line in data.decode("utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("id,"):
                continue
            _i, a, b, c, _dp, hw = line.split(",")
            digits = max(digits, len(a) - 2)
            rows.append((int(a, 16), int(b, 16), int(c, 16), int(hw)))
        n = digits * 4
        if p_threshold is None:
            p_threshold = 2.0 ** -max((r[3] for r in rows), default=0)
        cfg = PddtConfig(n, p_threshold)
        rows.sort(key=lambda r: (r[0], r[1], r[2]))
        cols = list(zip(*rows)) if rows else ([], [], [], [])
        return cls(cfg, cols[0], cols[1], cols[2], cols[3])

    @classmethod
    def from_text_files(cls, texts: List[bytes], word_size: int,
                        p_threshold: Optional[float] = None) -> "Pddt":
        """Import shim for whitespace-delimited "a b c probability" files."""
        rows = []
        for text in texts:
            for line in text.decode("utf-8").splitlines():
                parts = line.split()
                if not parts or parts[0].startswith("#"):
                    continue
                a, b, c = (int(p, 0) for p in parts[:3])
                rows.append((a, b, c, differential_weight(a, b, c, word_size)))
        rows = sorted(set(rows), key=lambda r: (r[0], r[1], r[2]))
        if p_threshold is None:
            p_threshold = 2.0 ** -max((r[3] for r in rows), default=0)
        cols = list(zip(*rows)) if rows else ([], [], [], [])
        return cls(PddtConfig(word_size, p_threshold), cols[0], cols[1], cols[2], cols[3])


def partial_dp(a: int, b: int, c: int, k: int) -> float:
    """Probability of the k-LSB partial differential; 1.0 at k=0."""
    if k < 0:
        raise ParameterError(f"negative prefix length {k}")
    if k == 0:
        return 1.0
    if not 0 <= a < (1 << k) or not 0 <= b < (1 << k) or not 0 <= c < (1 << k):
        raise ParameterError(f"prefix ({a:#x},{b:#x},{c:#x}) does not fit in {k} bits")
    if not is_valid_differential(a, b, c, k):
        return 0.0
    return 2.0 ** -differential_weight(a, b, c, k)


def _expand_level(frontier, bit: int, max_weight: int):
    """One bit-assignment step; returns the surviving child frontier."""
    a, b, c, w, state = frontier
    shift = np.uint64(bit)
    children = []
    for x, y, z in ((x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)):
        if x == y == z:
            new_state = _EQ0 if x == 0 else _EQ1
        else:
            new_state = _NEQ
        parity = x ^ y ^ z
        # eq-state prefixes force the new xor to match the previous common
        # bit; neq-state prefixes accept any assignment but pay one weight
        keep = (state == _NEQ) | (state == (_EQ0 if parity == 0 else _EQ1))
        if not keep.any():
            continue
        wc = w[keep] + (state[keep] == _NEQ)
        alive = wc <= max_weight
        if not alive.any():
            continue
        idx = np.flatnonzero(keep)[alive]
        wc = wc[alive]
        children.append((
            a[idx] | (np.uint64(x) << shift),
            b[idx] | (np.uint64(y) << shift),
            c[idx] | (np.uint64(z) << shift),
            wc,
            np.full(len(idx), new_state, dtype=np.uint8),
        ))
    if not children:
        empty = np.empty(0, dtype=np.uint64)
        return empty, empty, empty, np.empty(0, dtype=np.uint16), np.empty(0, dtype=np.uint8)
    return tuple(np.concatenate(parts) for parts in zip(*children))


def _build_branch(root: Tuple[int, int, int], config: PddtConfig):
    """Expand one depth-1 branch over bit positions 1..n-1."""
    frontier = (
        np.array([root[0]], dtype=np.uint64),
        np.array([root[1]], dtype=np.uint64),
        np.array([root[2]], dtype=np.uint64),
        np.zeros(1, dtype=np.uint16),
        np.array([_EQ0 if root == (0, 0, 0) else (_EQ1 if root == (1, 1, 1) else _NEQ)],
                 dtype=np.uint8),
    )
    for bit in range(1, config.word_size):
        frontier = _expand_level(frontier, bit, config.max_weight)
        if len(frontier[0]) > config.max_elements:
            raise PddtOverflowError(len(frontier[0]), config.max_elements)
    return frontier[:4]


def resolve_workers(workers: Optional[int] = None) -> int:
    """Worker count from the argument or DIFFGRAPH_THREADS (0 = auto)."""
    if workers is None:
        workers = int(os.environ.get("DIFFGRAPH_THREADS", "0"))
    if workers == 0:
        workers = os.cpu_count() or 1
    return max(1, workers)


def build_pddt(config: PddtConfig, workers: Optional[int] = None) -> Pddt:
    """Build the full PDDT for the configured word size and threshold.

    The four bit-0 branches satisfying the LSB parity constraint are
    expanded independently (optionally in parallel) and merged in fixed
    order, so the result is identical for any worker count.
    """
    # bit 0 carries no weight and must satisfy a^b^c = 0
    roots = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
    if config.word_size == 1:
        cols = list(zip(*[(a, b, c, 0) for a, b, c in roots]))
        fragments = [tuple(np.array(col, dtype=np.uint64) for col in cols)]
    else:
        nworkers = resolve_workers(workers)
        if nworkers > 1:
            with ThreadPoolExecutor(max_workers=min(nworkers, len(roots))) as pool:
                fragments = list(pool.map(lambda r: _build_branch(r, config), roots))
        else:
            fragments = [_build_branch(r, config) for r in roots]
    a = np.concatenate([f[0] for f in fragments])
    b = np.concatenate([f[1] for f in fragments])
    c = np.concatenate([f[2] for f in fragments])
    hw = np.concatenate([f[3] for f in fragments])
    if len(a) > config.max_elements:
        raise PddtOverflowError(len(a), config.max_elements)
    order = np.lexsort((c, b, a))
    return Pddt(config, a[order], b[order], c[order], hw[order])


def sample_pddt(pddt: Pddt, spec: SampleSpec) -> Pddt:
    """Seeded quota sample: ~fraction of the table, proportional within
    each output-difference class, never dropping a class entirely."""
    if len(pddt) == 0:
        raise ParameterError("cannot sample an empty PDDT")
    if spec.fraction == 1.0:
        return pddt
    rng = random.Random(f"pddt-sample:{spec.seed}")
    by_output = {}
    for i in range(len(pddt)):
        by_output.setdefault(int(pddt.c[i]), []).append(i)
    floor_size = 1 if spec.quota_rule else 0
    if len(by_output) > spec.fraction * len(pddt) and spec.quota_rule:
        log.warning(
            "quota (%d output classes) exceeds the %.1f%% target of %d rows; "
            "sample will be larger than requested",
            len(by_output), 100 * spec.fraction, round(spec.fraction * len(pddt)),
        )
    chosen: List[int] = []
    for c in sorted(by_output):
        rows = by_output[c]
        take = max(floor_size, round(spec.fraction * len(rows)))
        chosen.extend(rng.sample(rows, min(take, len(rows))))
    chosen.sort()
    idx = np.array(chosen, dtype=np.int64)
    return Pddt(pddt.config, pddt.a[idx], pddt.b[idx], pddt.c[idx], pddt.hw[idx])


@dataclass(frozen=True)
class PddtStats:
    entries: int
    weight_histogram: dict  # hw -> count
    min_dp: Optional[float]
    max_dp: Optional[float]


def pddt_stats(pddt: Pddt) -> PddtStats:
    if len(pddt) == 0:
        return PddtStats(0, {}, None, None)
    weights, counts = np.unique(pddt.hw, return_counts=True)
    hist = {int(w): int(n) for w, n in zip(weights, counts)}
    return PddtStats(
        entries=len(pddt),
        weight_histogram=hist,
        min_dp=2.0 ** -int(max(weights)),
        max_dp=2.0 ** -int(min(weights)),
    )
