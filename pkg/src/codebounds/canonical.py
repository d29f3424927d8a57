"""Canonical representatives for code equivalence.

The canonical form of a code is the lexicographically least row-sorted
symbol matrix reachable by permuting columns and renaming symbols
independently within columns, rows compared as one concatenated tuple.

The search builds the target matrix one row at a time.  Committing to a
source row forces the cheapest extension of the partial column order and
partial symbol renamings, tracked as an ordered partition of columns
(cells of columns not yet distinguished) plus one partial symbol map per
column.  Columns in one cell always carry the same number of assigned
symbols, so the tentative value of an unassigned symbol is uniform per
cell.  Only rows achieving the minimal next image are branched on; ties
are collapsed further by automorphisms discovered whenever two branches
complete with identical matrices, and branches whose partial image
exceeds the best known matrix are pruned.

Deciding whether a code already is canonical takes a cheaper route: the
candidate image is compared against the code's own next row while it is
being built, so almost all source rows are discarded after a couple of
positions, and any row beating the target settles the question at once.
"""
from __future__ import annotations

from .codes import Code, Word
from .errors import BudgetError

__all__ = ["canonical_form", "is_canonical"]

_AUTO_CAP = 256
_DEFAULT_NODE_BUDGET = 20_000_000


class _Smaller(Exception):
    """Internal: a strictly smaller image exists, decision is done."""


def _greedy_row(u: Word, cells, maps, nfree):
    """Minimal achievable image of word u under the current partial state.

    Returns (img, plan): img is the image row read in cell order, plan
    lists the refined cells as (value, columns, fresh) groups.
    """
    img = []
    plan = []
    for cell in cells:
        if len(cell) == 1:
            j = cell[0]
            v = maps[j][u[j]]
            fresh = v < 0
            if fresh:
                v = nfree[j]
            img.append(v)
            plan.append((v, cell, fresh))
            continue
        byval: dict[int, list[int]] = {}
        tfresh = -1
        for j in cell:
            v = maps[j][u[j]]
            if v < 0:
                if tfresh < 0:
                    tfresh = nfree[j]
                v = tfresh
            g = byval.get(v)
            if g is None:
                byval[v] = [j]
            else:
                g.append(j)
        for v in sorted(byval):
            js = byval[v]
            img.extend([v] * len(js))
            plan.append((v, tuple(js), v == tfresh))
    return tuple(img), plan


def _greedy_vs(u: Word, cells, maps, nfree, target: Word):
    """Compare the minimal image of u against a target row positionally.

    Returns (-1, None) or (1, None) on the first divergence, or (0, plan)
    when the minimal image equals the target.
    """
    plan = []
    pos = 0
    for cell in cells:
        if len(cell) == 1:
            j = cell[0]
            v = maps[j][u[j]]
            fresh = v < 0
            if fresh:
                v = nfree[j]
            tv = target[pos]
            if v != tv:
                return (-1 if v < tv else 1), None
            pos += 1
            plan.append((v, cell, fresh))
            continue
        byval: dict[int, list[int]] = {}
        tfresh = -1
        for j in cell:
            v = maps[j][u[j]]
            if v < 0:
                if tfresh < 0:
                    tfresh = nfree[j]
                v = tfresh
            g = byval.get(v)
            if g is None:
                byval[v] = [j]
            else:
                g.append(j)
        for v in sorted(byval):
            js = byval[v]
            for _ in js:
                tv = target[pos]
                if v != tv:
                    return (-1 if v < tv else 1), None
                pos += 1
            plan.append((v, tuple(js), v == tfresh))
    return 0, plan


def _apply_plan(u: Word, maps, nfree, plan):
    """Refined cells and symbol maps after committing word u."""
    new_cells = tuple(js for (_, js, _) in plan)
    if not any(fresh for (_, _, fresh) in plan):
        return new_cells, maps, nfree
    ml = list(maps)
    nl = list(nfree)
    for v, js, fresh in plan:
        if fresh:
            for j in js:
                t = ml[j]
                s = u[j]
                ml[j] = t[:s] + (v,) + t[s + 1 :]
                nl[j] = v + 1
    return new_cells, tuple(ml), tuple(nl)


class _Engine:
    def __init__(self, words, n, q, node_budget):
        self.words = words
        self.m_count = len(words)
        self.n = n
        self.root_cells = (tuple(range(n)),)
        self.root_maps = ((-1,) * q,) * n
        self.root_nfree = (0,) * n
        self.node_budget = node_budget
        self.nodes = 0
        self.autos: list[tuple[int, ...]] = []
        self.best_path: tuple[int, ...] | None = None
        self.used: list[int] = []
        self.used_set: set[int] = set()

    def tick(self):
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise BudgetError("canonical-form search budget exhausted", self.nodes)

    def orbit_reps(self, cand_idx):
        if len(cand_idx) <= 1 or not self.autos:
            return cand_idx
        used = self.used
        fixing = [p for p in self.autos if all(p[i] == i for i in used)]
        if not fixing:
            return cand_idx
        cset = set(cand_idx)
        seen: set[int] = set()
        reps = []
        for c in cand_idx:
            if c in seen:
                continue
            reps.append(c)
            stack = [c]
            seen.add(c)
            while stack:
                x = stack.pop()
                for p in fixing:
                    y = p[x]
                    if y in cset and y not in seen:
                        seen.add(y)
                        stack.append(y)
        return reps

    def record_leaf(self):
        if self.best_path is None:
            self.best_path = tuple(self.used)
        elif len(self.autos) < _AUTO_CAP:
            p = [0] * self.m_count
            for a, b in zip(self.best_path, self.used):
                p[a] = b
            self.autos.append(tuple(p))


def _decide(words: tuple[Word, ...], n: int, q: int, node_budget: int) -> bool:
    """True when the sorted word tuple is its own least image."""
    m_count = len(words)
    if m_count == 1:
        return words[0] == (0,) * n
    if words[0] != (0,) * n:
        return False
    if m_count == 2:
        g = sum(a == b for a, b in zip(words[0], words[1]))
        return words[1] == (0,) * g + (1,) * (n - g)
    eng = _Engine(words, n, q, node_budget)

    def dfs(cells, maps, nfree):
        eng.tick()
        k = len(eng.used)
        if k == m_count:
            eng.record_leaf()
            return
        target = words[k]
        achievers = []
        plans = {}
        for i in range(m_count):
            if i in eng.used_set:
                continue
            cmp, plan = _greedy_vs(words[i], cells, maps, nfree, target)
            if cmp < 0:
                raise _Smaller
            if cmp == 0:
                achievers.append(i)
                plans[i] = plan
        for i in eng.orbit_reps(achievers):
            nc, nm, nf = _apply_plan(words[i], maps, nfree, plans[i])
            eng.used.append(i)
            eng.used_set.add(i)
            dfs(nc, nm, nf)
            eng.used.pop()
            eng.used_set.remove(i)

    try:
        dfs(eng.root_cells, eng.root_maps, eng.root_nfree)
    except _Smaller:
        return False
    return True


def _least_image(words: tuple[Word, ...], n: int, q: int, node_budget: int):
    """Least image matrix of a sorted word tuple."""
    m_count = len(words)
    eng = _Engine(words, n, q, node_budget)
    best = list(words)
    state = {"gen": 0}
    prefix: list[tuple[int, ...]] = []

    def dfs(cells, maps, nfree, tight):
        eng.tick()
        k = len(eng.used)
        if k == m_count:
            if tight:
                eng.record_leaf()
            else:
                best[:] = prefix
                eng.best_path = tuple(eng.used)
                eng.autos.clear()
                state["gen"] += 1
            return
        evals = []
        vmin = None
        for i in range(m_count):
            if i in eng.used_set:
                continue
            img, plan = _greedy_row(words[i], cells, maps, nfree)
            if vmin is None or img < vmin:
                vmin = img
            evals.append((img, i, plan))
        if tight:
            if vmin > best[k]:
                return
            now_tight = vmin == best[k]
        else:
            now_tight = False
        achievers = {i: plan for (img, i, plan) in evals if img == vmin}
        gen_seen = state["gen"]
        for i in eng.orbit_reps(list(achievers)):
            if state["gen"] != gen_seen:
                # best improved inside a sibling subtree below this very
                # prefix, so the shared prefix is now exactly tight
                now_tight = True
                gen_seen = state["gen"]
            nc, nm, nf = _apply_plan(words[i], maps, nfree, achievers[i])
            eng.used.append(i)
            eng.used_set.add(i)
            prefix.append(vmin)
            dfs(nc, nm, nf, now_tight)
            eng.used.pop()
            eng.used_set.remove(i)
            prefix.pop()

    dfs(eng.root_cells, eng.root_maps, eng.root_nfree, True)
    return best


def canonical_form(code: Code, node_budget: int = _DEFAULT_NODE_BUDGET) -> Code:
    """The least equivalent code; equal inputs up to equivalence give
    identical outputs."""
    if code.size == 0:
        return code
    rows = _least_image(code.words, code.params.n, code.params.q, node_budget)
    return Code(code.params, tuple(rows))


def is_canonical(code: Code, node_budget: int = _DEFAULT_NODE_BUDGET) -> bool:
    """True when the code equals its own canonical form.

    Cheaper than computing the form: the search compares candidate
    images against the code itself and stops at the first win.
    """
    if code.size == 0:
        return True
    return _decide(code.words, code.params.n, code.params.q, node_budget)


def _decide_words(words: tuple[Word, ...], n: int, q: int) -> bool:
    """Decision entry for callers that track words without a Code."""
    return _decide(words, n, q, _DEFAULT_NODE_BUDGET)
