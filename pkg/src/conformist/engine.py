"""Backtracking window search over forbidden patterns.

Windows are finite element sets; every fully-contained translate of a
forbidden pattern becomes a nogood clause over 0/1 cell variables, and a
depth-first search with unit propagation decides whether an admissible
assignment exists. Invariant search first identifies cells in the same
orbit of a subgroup's left action (union-find over generator moves that
stay inside the window) and then runs the same search on the quotient
variables; dropping out-of-window moves only under-constrains, so UNSAT
answers remain sound.

Search results are exactly reproducible: variable order is fixed by the
element order, node counts track decision tries only, and multi-worker runs
replay the sequential accounting over a speculative prefix tree, so status,
witness, node count, and depth do not depend on the worker count.
"""

from __future__ import annotations

import itertools
import json
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

import numpy as np

from . import _kernels
from ._kernels import BUDGET, M_DEC, M_MAXDEPTH, SAT, UNSAT
from .elements import Elem, elem_key, format_element, inverse, multiply
from .patterns import PartialConfig, SftSpec
from .unionfind import UnionFind

log = logging.getLogger(__name__)

__all__ = [
    "DEFAULT_NODE_CAP",
    "SearchLimits",
    "SearchOutcome",
    "complete_search",
    "invariant_search",
    "AuditFailure",
    "AuditReport",
    "tail_invariance_audit",
    "outcome_to_json",
]

DEFAULT_NODE_CAP = 10**8
PROGRESS_EVERY = 10**6

_ABORTED = -1  # driver-internal code for speculative work cut short


@dataclass(frozen=True)
class SearchLimits:
    node_cap: int = DEFAULT_NODE_CAP
    workers: int = 1
    kernel: Optional[str] = None

    def __post_init__(self):
        if self.node_cap < 0:
            raise ValueError("node_cap must be nonnegative")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass
class SearchOutcome:
    status: str  # SAT, UNSAT, or RESOURCE_LIMIT
    witness: Optional[PartialConfig]
    nodes: int
    max_depth: int
    wall_time_s: float
    kernel: str
    workers: int


def outcome_to_json(outcome: SearchOutcome) -> str:
    witness = None
    if outcome.witness is not None:
        witness = [
            {"elem": format_element(g), "bit": bit} for g, bit in outcome.witness.items()
        ]
    return json.dumps(
        {
            "status": outcome.status,
            "witness": witness,
            "nodes": outcome.nodes,
            "max_depth": outcome.max_depth,
            "wall_time_s": outcome.wall_time_s,
            "kernel": outcome.kernel,
            "workers": outcome.workers,
        },
        indent=2,
    )


class _Compiled:
    """Clause arrays for one window, plus the cell-to-variable maps."""

    __slots__ = (
        "table",
        "cells",
        "var_of",
        "reps",
        "n_vars",
        "n_clauses",
        "order",
        "first_val",
        "cl_off",
        "cl_var",
        "cl_bit",
        "adj_off",
        "adj_cl",
        "adj_bit",
    )

    def problem_arrays(self):
        return (
            self.order,
            self.first_val,
            self.cl_off,
            self.cl_var,
            self.cl_bit,
            self.adj_off,
            self.adj_cl,
            self.adj_bit,
        )


def _decision_key(g: Elem):
    return (abs(g.shift), g.shift, g.lamp)


def _compile(
    domain: list[Elem],
    spec: SftSpec,
    groups: Optional[list[list[Elem]]] = None,
    hint: Optional[Callable[[Elem], int]] = None,
) -> _Compiled:
    """Index cells, merge orbit groups, and materialize clause/adjacency arrays.

    Variables are decided inside-out: sorted by (|shift|, element order) of
    the orbit representative. A clause that mentions one variable with both
    bits can never fully match and is dropped; duplicate clauses collapse.
    """
    cp = _Compiled()
    cp.table = spec.table
    cells = sorted(set(domain), key=elem_key)
    cp.cells = cells
    root_of: dict[Elem, Elem] = {}
    if groups:
        for group in groups:
            rep = min(group, key=_decision_key)
            for cell in group:
                root_of[cell] = rep
    reps = sorted({root_of.get(c, c) for c in cells}, key=_decision_key)
    rep_id = {rep: i for i, rep in enumerate(reps)}
    cp.reps = reps
    cp.var_of = {c: rep_id[root_of.get(c, c)] for c in cells}
    n = len(reps)
    cp.n_vars = n
    cp.order = np.arange(n, dtype=np.int32)
    first = np.zeros(n, dtype=np.int8)
    if hint is not None:
        for i, rep in enumerate(reps):
            first[i] = 1 if hint(rep) else 0
    cp.first_val = first

    clauses: dict[tuple, None] = {}
    for pattern in spec.patterns:
        anchor_inv = inverse(pattern.cells[0][0])
        for d in cells:
            g = multiply(d, anchor_inv)
            lits = {}
            ok = True
            for cell, bit in pattern.cells:
                var = cp.var_of.get(multiply(g, cell))
                if var is None:
                    ok = False
                    break
                if lits.setdefault(var, bit) != bit:
                    # one variable both ways: the translate can never match
                    ok = False
                    break
            if ok:
                clauses[tuple(sorted(lits.items()))] = None
    clause_list = list(clauses)
    cp.n_clauses = len(clause_list)
    cl_off = np.zeros(len(clause_list) + 1, dtype=np.int64)
    cl_var = []
    cl_bit = []
    adj_lists: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for ci, clause in enumerate(clause_list):
        for var, bit in clause:
            cl_var.append(var)
            cl_bit.append(bit)
            adj_lists[var].append((ci, bit))
        cl_off[ci + 1] = len(cl_var)
    cp.cl_off = cl_off
    cp.cl_var = np.array(cl_var, dtype=np.int32)
    cp.cl_bit = np.array(cl_bit, dtype=np.int8)
    adj_off = np.zeros(n + 1, dtype=np.int64)
    adj_cl = []
    adj_bit = []
    for v in range(n):
        for ci, bit in adj_lists[v]:
            adj_cl.append(ci)
            adj_bit.append(bit)
        adj_off[v + 1] = len(adj_cl)
    cp.adj_off = adj_off
    cp.adj_cl = np.array(adj_cl, dtype=np.int32)
    cp.adj_bit = np.array(adj_bit, dtype=np.int8)
    return cp


class _State:
    """Mutable search state; owns every array the kernel writes."""

    __slots__ = (
        "assign",
        "trail",
        "sat_at",
        "unassigned_ct",
        "dec_var",
        "dec_tried",
        "dec_trail",
        "dec_cursor",
        "meta",
        "seed_var",
        "seed_val",
        "q_var",
        "q_val",
    )

    @classmethod
    def fresh(cls, cp: _Compiled, seeds: list[tuple[int, int]]) -> "_State":
        st = cls()
        n, c = cp.n_vars, cp.n_clauses
        st.assign = np.full(n, -1, dtype=np.int8)
        st.trail = np.zeros(n, dtype=np.int32)
        st.sat_at = np.full(c, -1, dtype=np.int32)
        st.unassigned_ct = (cp.cl_off[1:] - cp.cl_off[:-1]).astype(np.int32)
        st.dec_var = np.zeros(n, dtype=np.int32)
        st.dec_tried = np.zeros(n, dtype=np.int8)
        st.dec_trail = np.zeros(n, dtype=np.int32)
        st.dec_cursor = np.zeros(n, dtype=np.int32)
        st.meta = np.zeros(4, dtype=np.int64)
        st.seed_var = np.array([v for v, _ in seeds], dtype=np.int32)
        st.seed_val = np.array([b for _, b in seeds], dtype=np.int8)
        st.q_var = np.zeros(len(seeds) + 2 * c + n + 4, dtype=np.int32)
        st.q_val = np.zeros(len(seeds) + 2 * c + n + 4, dtype=np.int8)
        return st

    def kernel_args(self, cp: _Compiled, budget: int):
        return (
            self.assign,
            self.trail,
            self.sat_at,
            self.unassigned_ct,
            self.dec_var,
            self.dec_tried,
            self.dec_trail,
            self.dec_cursor,
            self.meta,
            *cp.problem_arrays(),
            self.seed_var,
            self.seed_val,
            self.q_var,
            self.q_val,
            np.int64(budget),
        )

    @property
    def max_depth(self) -> int:
        return int(self.meta[M_MAXDEPTH])


def _drive(
    step,
    cp: _Compiled,
    state: _State,
    budget: int,
    label: str = "search",
    abort: Optional[Callable[[], bool]] = None,
) -> tuple[int, int]:
    """Run the kernel in progress-sized chunks until done or out of budget."""
    used = 0
    while True:
        chunk = min(PROGRESS_EVERY, budget - used)
        code, n = step(*state.kernel_args(cp, chunk))
        used += int(n)
        if code != BUDGET:
            return int(code), used
        if used >= budget:
            return BUDGET, used
        if abort is not None and abort():
            return _ABORTED, used
        log.info("%s progress: %d nodes", label, used)


def _next_decision_var(cp: _Compiled, state: _State) -> int:
    for i in range(cp.n_vars):
        if state.assign[cp.order[i]] < 0:
            return int(cp.order[i])
    return -1


def _witness_from_state(cp: _Compiled, state: _State) -> PartialConfig:
    return PartialConfig((cell, int(state.assign[var])) for cell, var in cp.var_of.items())


def _run_sequential(step, cp, seeds, limits) -> tuple[int, int, int, Optional[_State]]:
    state = _State.fresh(cp, seeds)
    code, nodes = _drive(step, cp, state, limits.node_cap)
    return code, nodes, state.max_depth, state


def _run_parallel(step, cp, seeds, limits) -> tuple[int, int, int, Optional[_State]]:
    """Speculative prefix-tree execution with sequential replay of the stats.

    The prefix tree is expanded by fresh propagate-only kernel calls (unit
    propagation is confluent, so re-propagating a prefix from scratch lands
    in the same state sequential search reaches). Leaves run concurrently
    with the full node cap; the walk afterwards recombines them in DFS
    order, charging one node per prefix decision try, so every reported
    number matches the single-worker run.
    """
    depth_goal = max(1, (limits.workers - 1).bit_length())
    leaf_jobs: list[tuple[tuple, _State]] = []

    def expand(path: tuple[tuple[int, int], ...], depth: int):
        state = _State.fresh(cp, seeds + list(path))
        code, _ = _drive(step, cp, state, 0)
        if code == UNSAT:
            return ("closed",)
        if code == SAT:
            return ("sat_leaf", state)
        if depth == 0:
            node = ("leaf", len(leaf_jobs), len(path))
            leaf_jobs.append((path, state))
            return node
        var = _next_decision_var(cp, state)
        fv = int(cp.first_val[var])
        return (
            "branch",
            expand(path + ((var, fv),), depth - 1),
            expand(path + ((var, 1 - fv),), depth - 1),
        )

    tree = expand((), depth_goal)

    best_sat = [len(leaf_jobs)]
    lock = threading.Lock()
    results: list[Optional[tuple[int, int, _State]]] = [None] * len(leaf_jobs)

    def run_leaf(index: int):
        _, state = leaf_jobs[index]

        def abort() -> bool:
            with lock:
                return best_sat[0] < index

        code, nodes = _drive(step, cp, state, limits.node_cap, label=f"leaf {index}", abort=abort)
        if code == SAT:
            with lock:
                if index < best_sat[0]:
                    best_sat[0] = index
        results[index] = (code, nodes, state)

    if leaf_jobs:
        with ThreadPoolExecutor(max_workers=limits.workers) as pool:
            list(pool.map(run_leaf, range(len(leaf_jobs))))

    total = 0
    max_depth = 0
    cap = limits.node_cap

    def walk(node, depth: int):
        # returns (status, state) when the sequential replay stops here
        nonlocal total, max_depth
        kind = node[0]
        if kind == "sat_leaf":
            return SAT, node[1]
        if kind == "leaf":
            code, nodes, state = results[node[1]]
            remaining = cap - total
            if code in (BUDGET, _ABORTED) or nodes > remaining:
                # sequential search would cut this subtree at the remaining
                # budget; replay it exactly that far for the true depth
                path, _ = leaf_jobs[node[1]]
                replay = _State.fresh(cp, seeds + list(path))
                _drive(step, cp, replay, remaining, label="replay")
                max_depth = max(max_depth, depth + replay.max_depth)
                total = cap
                return BUDGET, None
            total += nodes
            max_depth = max(max_depth, depth + state.max_depth)
            if code == SAT:
                return SAT, state
            return None, None  # exhausted subtree, keep walking
        for child in (node[1], node[2]):
            if total >= cap:
                total = cap
                return BUDGET, None
            total += 1
            max_depth = max(max_depth, depth + 1)
            if child[0] == "closed":
                continue
            status, state = walk(child, depth + 1)
            if status is not None:
                return status, state
        return None, None

    if tree[0] == "sat_leaf":
        return SAT, 0, 0, tree[1]
    if tree[0] == "closed":
        return UNSAT, 0, 0, None
    status, state = walk(tree, 0)
    if status is None:
        return UNSAT, total, max_depth, None
    return status, total, max_depth, state


def _seed_ids(cp: _Compiled, seed: Optional[PartialConfig]) -> list[tuple[int, int]]:
    if seed is None:
        return []
    out = []
    for cell, bit in seed.items():
        var = cp.var_of.get(cell)
        if var is None:
            raise ValueError(f"seed cell {format_element(cell)!r} is outside the domain")
        out.append((var, bit))
    return out


def _finish(code, nodes, max_depth, state, cp, started, kernel, workers) -> SearchOutcome:
    status = {SAT: "SAT", UNSAT: "UNSAT", BUDGET: "RESOURCE_LIMIT"}[code]
    witness = _witness_from_state(cp, state) if code == SAT else None
    return SearchOutcome(
        status=status,
        witness=witness,
        nodes=nodes,
        max_depth=max_depth,
        wall_time_s=time.perf_counter() - started,
        kernel=kernel,
        workers=workers,
    )


def _normalize_hint(hint) -> Optional[Callable[[Elem], int]]:
    if hint is None:
        return None
    if isinstance(hint, PartialConfig):
        return lambda g: hint.get(g) or 0
    if isinstance(hint, Mapping):
        return lambda g: hint.get(g, 0)
    if callable(hint):
        return hint
    raise TypeError(f"hint must be a mapping or callable, got {type(hint)!r}")


def complete_search(
    spec: SftSpec,
    domain: Iterable[Elem],
    seed: Optional[PartialConfig] = None,
    limits: Optional[SearchLimits] = None,
    hint=None,
) -> SearchOutcome:
    """Search for an admissible completion of seed on the window.

    SAT comes with a witness on the full window; UNSAT means no assignment
    extending the seed satisfies every fully-contained pattern translate;
    RESOURCE_LIMIT reports the node cap was hit first.
    """
    limits = limits or SearchLimits()
    started = time.perf_counter()
    kernel = _kernels.resolve_kernel(limits.kernel)
    step = _kernels.search_step(kernel)
    cp = _compile(list(domain), spec, hint=_normalize_hint(hint))
    seeds = _seed_ids(cp, seed)
    if limits.workers == 1:
        code, nodes, depth, state = _run_sequential(step, cp, seeds, limits)
    else:
        code, nodes, depth, state = _run_parallel(step, cp, seeds, limits)
    return _finish(code, nodes, depth, state, cp, started, kernel, limits.workers)


def invariant_search(
    spec: SftSpec,
    subgroup_gens: Iterable[Elem],
    domain: Iterable[Elem],
    seed: Optional[PartialConfig] = None,
    limits: Optional[SearchLimits] = None,
    hint=None,
) -> SearchOutcome:
    """complete_search on the quotient by a subgroup's left action.

    Cells x and g*x are identified for each generator g whenever both lie
    in the window. Orbits truncated at the boundary under-constrain, so
    UNSAT is sound evidence against invariant configurations; SAT witnesses
    are constant on the computed orbit pieces but carry no global claim.
    """
    gens = list(subgroup_gens)
    if not gens:
        raise ValueError("invariant search needs at least one subgroup generator")
    limits = limits or SearchLimits()
    started = time.perf_counter()
    kernel = _kernels.resolve_kernel(limits.kernel)
    step = _kernels.search_step(kernel)
    cells = sorted(set(domain), key=elem_key)
    for g in gens:
        if g.table != spec.table:
            raise ValueError("subgroup generators live over a different lamp group")
    cell_set = set(cells)
    uf = UnionFind(cells)
    for g in gens:
        if g.is_identity:
            continue
        for x in cells:
            y = multiply(g, x)
            if y in cell_set:
                uf.union(x, y)
    cp = _compile(cells, spec, groups=uf.groups(), hint=_normalize_hint(hint))
    seeds = _seed_ids(cp, seed)
    if limits.workers == 1:
        code, nodes, depth, state = _run_sequential(step, cp, seeds, limits)
    else:
        code, nodes, depth, state = _run_parallel(step, cp, seeds, limits)
    return _finish(code, nodes, depth, state, cp, started, kernel, limits.workers)


# ---------------------------------------------------------------------------
# Tail-invariance audit: values must not change under lamps placed strictly
# below the shift level.


@dataclass(frozen=True)
class AuditFailure:
    g: Elem
    tail: Elem
    bit_g: int
    bit_gtail: int


@dataclass
class AuditReport:
    depth: int
    checked: int
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures


def tail_invariance_audit(cfg: PartialConfig, spec: SftSpec, depth: int) -> AuditReport:
    """Check cfg(g * mu) == cfg(g) for lamp words mu on positions -1..-depth.

    The caller supplies an admissible cfg; pairs with either endpoint
    outside the domain are skipped. For windows of the conformist system
    the equality is forced wherever the connecting role-model cosets are
    inside the window, so interior failures mean the configuration is not
    conformist.
    """
    if depth < 0:
        raise ValueError("audit depth must be nonnegative")
    table = spec.table
    tails = []
    for vals in itertools.product(range(table.order), repeat=depth):
        lamp = tuple(
            (pos, val)
            for pos, val in zip(range(-depth, 0), reversed(vals))
            if val != 0
        )
        if lamp:
            tails.append(Elem(table, lamp, 0))
    checked = 0
    failures = []
    for g, bit in cfg.items():
        for tail in tails:
            h = multiply(g, tail)
            other = cfg.get(h)
            if other is None:
                continue
            checked += 1
            if other != bit:
                failures.append(AuditFailure(g, tail, bit, other))
    return AuditReport(depth=depth, checked=checked, failures=failures)
