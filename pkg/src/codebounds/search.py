"""Exhaustive classification of codes with given parameters and size.

Enumeration is orderly: words are appended in strictly increasing
lexicographic order and a partial code survives only if it is the
canonical representative of its own equivalence class, so exactly one
representative of every class of the target size is emitted.  Deleting
the lexicographically last row of a canonical code leaves a canonical
code, which makes the rule complete.

Pruning is sound for any instance: pairwise distance at least d, column
symbol counts capped by the Plotkin bound of the column projection (and
by the forced balanced profile when the pair-count budget vanishes), and
a running count of pairs at distance other than d against that budget.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, replace
from functools import lru_cache
from multiprocessing import Pool

import numpy as np

from .bounds import pair_count_bounds, plotkin_bound
from .canonical import _decide_words, canonical_form
from .codes import Code, CodeParams, Word, hamming_distance
from .errors import BudgetError, ExtensionError, ScaleError

__all__ = [
    "EnumerationTask",
    "enumerate_codes",
    "classify",
    "codes_by_deletion",
    "extend_deficient",
    "AlphaStats",
    "alpha_stats",
    "candidate_count",
    "all_words",
]

DEFAULT_NODE_BUDGET = 10**9
DEFAULT_TIME_LIMIT = 600.0
SCALE_CAP = 200_000
SCAN_CAP = 2_000_000


@dataclass(frozen=True)
class EnumerationTask:
    """Parameters and budgets of one classification run.

    ``mode`` is "all" for the full set of classes or "exists" to stop at
    the first code found.  A node budget of None means the default, and
    instances with q**n beyond desk scale are refused unless a budget is
    given explicitly.
    """

    q: int
    n: int
    d: int
    target_size: int
    mode: str = "all"
    node_budget: int | None = None
    time_limit: float | None = DEFAULT_TIME_LIMIT

    def __post_init__(self):
        CodeParams(self.q, self.n, self.d)
        if self.target_size < 1:
            raise ValueError("target size must be positive")
        if self.mode not in ("all", "exists"):
            raise ValueError(f"unknown mode {self.mode!r}")


@lru_cache(maxsize=32)
def all_words(q: int, n: int) -> np.ndarray:
    """All q**n words in lexicographic order as a read-only array."""
    grid = np.array(list(itertools.product(range(q), repeat=n)), dtype=np.uint8)
    grid.flags.writeable = False
    return grid


class _Found(Exception):
    """Internal: existence mode found a code."""


class _Searcher:
    def __init__(self, task: EnumerationTask):
        self.q, self.n, self.d = task.q, task.n, task.d
        self.target = task.target_size
        self.mode = task.mode
        self.node_budget = (
            task.node_budget if task.node_budget is not None else DEFAULT_NODE_BUDGET
        )
        self.time_limit = task.time_limit
        self.start = time.monotonic()
        self.nodes = 0
        pc = pair_count_bounds(self.q, self.n, self.d, self.target)
        self.budget = pc.budget
        cap = self.target
        if self.n - 1 < self.d:
            cap = 1
        else:
            pb = plotkin_bound(self.q, self.n - 1, self.d)
            if pb is not None:
                cap = min(cap, pb)
        if pc.budget == 0:
            cap = min(cap, pc.m)
        self.cap = cap
        self.counts = np.zeros((self.n, self.q), dtype=np.int32)
        self.col_idx = np.arange(self.n)
        self.found: list[tuple[Word, ...]] = []

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise BudgetError(
                f"enumeration node budget {self.node_budget} exhausted",
                self.nodes,
                tuple(self.found),
            )
        if self.time_limit is not None and self.nodes % 256 == 0:
            if time.monotonic() - self.start > self.time_limit:
                raise BudgetError(
                    f"enumeration time limit {self.time_limit}s exhausted",
                    self.nodes,
                    tuple(self.found),
                )

    def initial_state(self):
        cand = all_words(self.q, self.n)
        nond = np.zeros(len(cand), dtype=np.int32)
        return [], cand, nond, 0

    def child_state(self, chosen, cand, nond, prefix_nond, i):
        """State after appending candidate i; counts are updated in place
        and must be rolled back by the caller."""
        w = cand[i]
        rest = cand[i + 1 :]
        restnond = nond[i + 1 :]
        dist = (rest != w).sum(axis=1)
        self.counts[self.col_idx, w] += 1
        sel = dist >= self.d
        if self.cap < self.target:
            sel &= (self.counts[self.col_idx[None, :], rest] + 1 <= self.cap).all(
                axis=1
            )
        new_prefix_nond = prefix_nond + int(nond[i])
        new_nond = restnond + (dist != self.d)
        sel &= new_prefix_nond + new_nond <= self.budget
        return (
            chosen + [tuple(int(x) for x in w)],
            rest[sel],
            new_nond[sel],
            new_prefix_nond,
        )

    def rollback(self, word):
        self.counts[self.col_idx, np.asarray(word, dtype=np.uint8)] -= 1

    def expand(self, chosen, cand, nond, prefix_nond, stop_size):
        """Depth-first orderly expansion up to stop_size words."""
        k = len(chosen)
        if k == stop_size:
            self.found.append(tuple(chosen))
            if self.mode == "exists":
                raise _Found
            return
        need = stop_size - k
        for i in range(len(cand) - need + 1):
            self._tick()
            if prefix_nond + int(nond[i]) > self.budget:
                continue
            wt = tuple(int(x) for x in cand[i])
            if not _decide_words(tuple(chosen) + (wt,), self.n, self.q):
                continue
            st = self.child_state(chosen, cand, nond, prefix_nond, i)
            self.expand(*st, stop_size)
            self.rollback(wt)

    def state_for_prefix(self, prefix):
        chosen, cand, nond, prefix_nond = self.initial_state()
        for w in prefix:
            warr = np.asarray(w, dtype=np.uint8)
            idx = int(np.nonzero((cand == warr).all(axis=1))[0][0])
            chosen, cand, nond, prefix_nond = self.child_state(
                chosen, cand, nond, prefix_nond, idx
            )
        return chosen, cand, nond, prefix_nond


def _expand_job(args):
    task, prefix = args
    s = _Searcher(task)
    st = s.state_for_prefix(prefix)
    try:
        s.expand(*st, task.target_size)
    except _Found:
        pass
    return s.found, s.nodes


def enumerate_codes(task: EnumerationTask, workers: int = 1) -> tuple[Code, ...]:
    """All equivalence classes of (n,d)_q codes of the target size, as
    canonical representatives in sorted order.

    The result does not depend on ``workers``; parallel runs split the
    search below the canonical two-word prefixes.
    """
    q, n, d, target = task.q, task.n, task.d, task.target_size
    if q**n > SCALE_CAP and task.node_budget is None:
        raise ScaleError(
            f"q**n = {q**n} exceeds desk scale {SCALE_CAP}; "
            "pass an explicit node budget to force the attempt"
        )
    if target > q**n or pair_count_bounds(q, n, d, target).budget < 0:
        return ()
    params = CodeParams(q, n, d)

    def as_codes(word_sets):
        return tuple(Code(params, ws) for ws in sorted(set(word_sets)))

    split = min(2, target)
    # the split phase always collects every canonical prefix
    searcher = _Searcher(replace(task, mode="all"))
    try:
        searcher.expand(*searcher.initial_state(), split)
    except BudgetError as exc:
        done = searcher.found if split == target else ()
        raise BudgetError(str(exc), exc.nodes, as_codes(done)) from None
    if split == target:
        out = searcher.found
        total_nodes = searcher.nodes
    else:
        prefixes = searcher.found
        jobs = [(task, p) for p in prefixes]
        if workers > 1 and task.mode == "all" and len(jobs) > 1:
            try:
                with Pool(workers) as pool:
                    results = pool.map(_expand_job, jobs)
            except BudgetError as exc:
                raise BudgetError(str(exc), exc.nodes, ()) from None
        else:
            results = []
            try:
                for j in jobs:
                    results.append(_expand_job(j))
                    if task.mode == "exists" and results[-1][0]:
                        break
            except BudgetError as exc:
                done = [c for found, _ in results for c in found]
                done += list(exc.partial)
                nodes = searcher.nodes + sum(n_ for _, n_ in results) + exc.nodes
                raise BudgetError(str(exc), nodes, as_codes(done)) from None
        out = [c for found, _ in results for c in found]
        total_nodes = searcher.nodes + sum(nodes for _, nodes in results)
        if total_nodes > searcher.node_budget:
            raise BudgetError(
                f"enumeration node budget {searcher.node_budget} exhausted",
                total_nodes,
                as_codes(out),
            )
    codes = tuple(Code(params, ws) for ws in sorted(out))
    if task.mode == "exists":
        return codes[:1]
    return codes


@lru_cache(maxsize=None)
def classify(q: int, n: int, d: int, target_size: int) -> tuple[Code, ...]:
    """Memoized full classification with default budgets."""
    return enumerate_codes(EnumerationTask(q, n, d, target_size))


def codes_by_deletion(parents) -> tuple[Code, ...]:
    """All classes obtained by deleting one word from the given codes,
    deduplicated by canonical form and sorted."""
    return _codes_by_deletion(tuple(parents))


@lru_cache(maxsize=None)
def _codes_by_deletion(parents: tuple[Code, ...]) -> tuple[Code, ...]:
    seen: dict[tuple[Word, ...], Code] = {}
    for parent in parents:
        for i in range(parent.size):
            rest = parent.words[:i] + parent.words[i + 1 :]
            child = canonical_form(Code(parent.params, rest))
            seen.setdefault(child.words, child)
    return tuple(seen[k] for k in sorted(seen))


def extend_deficient(code: Code) -> Code:
    """Append the unique word whose symbols complete every column to a
    balanced profile.

    Requires |C| + 1 divisible by q and, in every column, exactly one
    symbol occurring (|C|+1)/q - 1 times with the others at (|C|+1)/q.
    The appended word must respect the minimum distance; each failure is
    a distinct error.
    """
    q, n, d = code.params.q, code.params.n, code.params.d
    total = code.size + 1
    if total % q != 0:
        raise ExtensionError(
            "size", f"size {code.size} is not one below a multiple of q={q}"
        )
    cap = total // q
    beta = []
    for j in range(n):
        counts = [0] * q
        for w in code.words:
            counts[w[j]] += 1
        deficient = [s for s in range(q) if counts[s] == cap - 1]
        full = [s for s in range(q) if counts[s] == cap]
        if len(deficient) != 1 or len(full) != q - 1:
            raise ExtensionError(
                "profile",
                f"column {j} has counts {counts}, not one symbol at {cap - 1} "
                f"with the rest at {cap}",
            )
        beta.append(deficient[0])
    u = tuple(beta)
    for w in code.words:
        if hamming_distance(w, u) < d:
            raise ExtensionError(
                "distance", f"appended word {u} is at distance < {d} from {w}"
            )
    return Code(code.params, tuple(sorted(code.words + (u,))))


@dataclass(frozen=True)
class AlphaStats:
    """Distance-d neighbour statistics of the far-word set of a code.

    S holds every word of the ambient space at distance at least
    ``threshold`` from all code words; ``counts`` maps alpha, the number
    of code words at distance exactly d, to how many members of S attain
    it.
    """

    q: int
    n: int
    d: int
    threshold: int
    code_size: int
    counts: tuple[tuple[int, int], ...]

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)

    def count_eq(self, alpha: int) -> int:
        return dict(self.counts).get(alpha, 0)

    def count_le(self, alpha: int) -> int:
        return sum(c for a, c in self.counts if a <= alpha)


def alpha_stats(code: Code, threshold: int | None = None) -> AlphaStats:
    """Full-space scan; refuses instances with q**n beyond the scan cap."""
    q, n, d = code.params.q, code.params.n, code.params.d
    if threshold is None:
        threshold = d - 1
    if q**n > SCAN_CAP:
        raise ScaleError(f"q**n = {q**n} exceeds scan cap {SCAN_CAP}")
    grid = all_words(q, n)
    mask = np.ones(len(grid), dtype=bool)
    alpha = np.zeros(len(grid), dtype=np.int32)
    for w in code.words:
        dw = (grid != np.asarray(w, dtype=np.uint8)).sum(axis=1)
        mask &= dw >= threshold
        alpha += dw == d
    hist = np.bincount(alpha[mask])
    counts = tuple((a, int(c)) for a, c in enumerate(hist) if c)
    return AlphaStats(q, n, d, threshold, code.size, counts)


def candidate_count(code: Code, threshold: int) -> int:
    """Number of ambient words at distance >= threshold from every word."""
    return alpha_stats(code, threshold=threshold).total
