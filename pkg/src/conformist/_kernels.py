"""Hot kernels with numba and pure-Python twins.

The backtracking search step and the bulk digit-parity scan are the only
compute-bound loops in the library. Each is written once as a plain module
function over numpy arrays; the numba twin is njit applied to the same
function object, so the two paths cannot drift. Kernel choice comes from
the CONFORMIST_KERNEL environment variable ('numba' or 'python') or a
per-call override; the default is numba when importable.

Everything that needs arbitrary-precision integers (group arithmetic, the
coordinate map) deliberately stays outside these kernels.
"""

from __future__ import annotations

import logging
import os

import numpy as np

log = logging.getLogger(__name__)

__all__ = [
    "KERNEL_ENV_VAR",
    "SAT",
    "UNSAT",
    "BUDGET",
    "available_kernels",
    "resolve_kernel",
    "search_step",
    "digit_parity_bulk",
]

KERNEL_ENV_VAR = "CONFORMIST_KERNEL"

# search_step return codes
SAT = 0
UNSAT = 1
BUDGET = 2

# meta slots
M_TRAIL = 0
M_DEC = 1
M_INIT = 2
M_MAXDEPTH = 3


def _search_impl(
    assign,
    trail,
    sat_at,
    unassigned_ct,
    dec_var,
    dec_tried,
    dec_trail,
    dec_cursor,
    meta,
    order,
    first_val,
    cl_off,
    cl_var,
    cl_bit,
    adj_off,
    adj_cl,
    adj_bit,
    seed_var,
    seed_val,
    q_var,
    q_val,
    budget,
):
    """One resumable slice of the depth-first search over nogood clauses.

    A clause is the cell/bit list of one forbidden-pattern translate; an
    assignment matching every cell of a clause is a conflict. Unit
    propagation forces the negation of the last free cell of an
    otherwise-matched clause. Nodes are decision tries (first value or
    flip); propagation is free. The budget bounds nodes tried in this call;
    state lives in the argument arrays, so the caller can resume after a
    BUDGET return as if uninterrupted. Suspension only happens between
    decisions, never mid-propagation.
    """
    n_vars = order.shape[0]
    nodes = 0
    qh = 0
    qt = 0
    if meta[M_INIT] == 0:
        meta[M_INIT] = 1
        for i in range(seed_var.shape[0]):
            q_var[qt] = seed_var[i]
            q_val[qt] = seed_val[i]
            qt += 1
        for c in range(cl_off.shape[0] - 1):
            if cl_off[c + 1] - cl_off[c] == 1:
                p = cl_off[c]
                q_var[qt] = cl_var[p]
                q_val[qt] = 1 - cl_bit[p]
                qt += 1
    while True:
        # propagate until the queue drains or a clause fully matches
        conflict = False
        while qh < qt:
            x = q_var[qh]
            v = q_val[qh]
            qh += 1
            if assign[x] >= 0:
                if assign[x] != v:
                    conflict = True
                    break
                continue
            assign[x] = v
            t = meta[M_TRAIL]
            trail[t] = x
            meta[M_TRAIL] = t + 1
            for a in range(adj_off[x], adj_off[x + 1]):
                c = adj_cl[a]
                unassigned_ct[c] -= 1
                if sat_at[c] >= 0:
                    continue
                if adj_bit[a] != v:
                    sat_at[c] = t
                    continue
                u = unassigned_ct[c]
                if u == 0:
                    conflict = True
                elif u == 1:
                    for p in range(cl_off[c], cl_off[c + 1]):
                        y = cl_var[p]
                        if assign[y] < 0:
                            q_var[qt] = y
                            q_val[qt] = 1 - cl_bit[p]
                            qt += 1
                            break
            if conflict:
                break
        qh = 0
        qt = 0
        if conflict:
            # backtrack to the deepest decision still holding an untried value
            found_flip = False
            while meta[M_DEC] > 0:
                d = meta[M_DEC] - 1
                tgt = dec_trail[d]
                t = meta[M_TRAIL] - 1
                while t >= tgt:
                    y = trail[t]
                    assign[y] = -1
                    for a in range(adj_off[y], adj_off[y + 1]):
                        c = adj_cl[a]
                        unassigned_ct[c] += 1
                        if sat_at[c] == t:
                            sat_at[c] = -1
                    t -= 1
                meta[M_TRAIL] = tgt
                if dec_tried[d] == 0:
                    found_flip = True
                    break
                meta[M_DEC] = d
            if not found_flip:
                return UNSAT, nodes
        # decide: pending flip first, else the next unassigned variable
        if meta[M_DEC] > 0:
            d = meta[M_DEC] - 1
            v0 = dec_var[d]
            if assign[v0] < 0:
                # first branch of this decision is exhausted and undone
                if nodes >= budget:
                    return BUDGET, nodes
                nodes += 1
                dec_tried[d] = 1
                q_var[0] = v0
                q_val[0] = 1 - first_val[v0]
                qt = 1
                continue
        start = 0
        if meta[M_DEC] > 0:
            start = dec_cursor[meta[M_DEC] - 1] + 1
        pick = -1
        i = start
        while i < n_vars:
            if assign[order[i]] < 0:
                pick = order[i]
                break
            i += 1
        if pick < 0:
            return SAT, nodes
        if nodes >= budget:
            return BUDGET, nodes
        nodes += 1
        d = meta[M_DEC]
        dec_var[d] = pick
        dec_tried[d] = 0
        dec_trail[d] = meta[M_TRAIL]
        dec_cursor[d] = i
        meta[M_DEC] = d + 1
        if meta[M_DEC] > meta[M_MAXDEPTH]:
            meta[M_MAXDEPTH] = meta[M_DEC]
        q_var[0] = pick
        q_val[0] = first_val[pick]
        qt = 1


def _parity_impl(values, base, out):
    """out[i] = parity of the number of base-`base` digits of values[i] equal to 1."""
    for i in range(values.shape[0]):
        v = values[i]
        p = 0
        while v > 0:
            if v % base == 1:
                p ^= 1
            v //= base
        out[i] = p


try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    numba = None
    _HAVE_NUMBA = False

if _HAVE_NUMBA:
    _search_numba = numba.njit(cache=True, nogil=True)(_search_impl)
    _parity_numba = numba.njit(cache=True, nogil=True)(_parity_impl)
else:  # pragma: no cover
    _search_numba = None
    _parity_numba = None


def available_kernels() -> tuple[str, ...]:
    return ("numba", "python") if _HAVE_NUMBA else ("python",)


def resolve_kernel(override: str | None = None) -> str:
    """Pick the kernel: explicit override, else env var, else best available."""
    choice = override or os.environ.get(KERNEL_ENV_VAR, "").strip() or None
    if choice is None:
        return "numba" if _HAVE_NUMBA else "python"
    if choice not in ("numba", "python"):
        raise ValueError(f"unknown kernel {choice!r}, expected 'numba' or 'python'")
    if choice == "numba" and not _HAVE_NUMBA:
        raise RuntimeError("numba kernel requested but numba is not importable")
    return choice


def search_step(kernel: str):
    """The search-step callable for a resolved kernel name."""
    if kernel == "numba":
        if _search_numba is None:
            raise RuntimeError("numba kernel requested but numba is not importable")
        return _search_numba
    return _search_impl


def _parity_numpy(values: np.ndarray, base: int) -> np.ndarray:
    v = values.copy()
    out = np.zeros(v.shape[0], dtype=np.uint8)
    while bool((v > 0).any()):
        out ^= (v % base == 1).astype(np.uint8)
        v //= base
    return out


def digit_parity_bulk(values: np.ndarray, base: int, kernel: str | None = None) -> np.ndarray:
    """Vector digit-one parity; int64 inputs only, bigints stay on the scalar path."""
    values = np.ascontiguousarray(values, dtype=np.int64)
    if values.size and int(values.min()) < 0:
        raise ValueError("digit parity is defined for nonnegative values only")
    choice = resolve_kernel(kernel)
    if choice == "numba":
        out = np.empty(values.shape[0], dtype=np.uint8)
        _parity_numba(values, base, out)
        return out
    return _parity_numpy(values, base)
