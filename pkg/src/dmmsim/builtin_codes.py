"""Registry of deterministic fixture codes.

All LDPC fixtures are (dv, dc)-regular matrices grown by a seeded
progressive-edge-growth pass: each new edge attaches to the check node
farthest from the variable in the current graph (unreached checks first),
breaking ties by lowest degree and then by a seeded priority order.  The
construction is repeated with the next seed until the matrix has full row
rank, so every name maps to one fixed, reproducible code.

Lengths are desk scale (tens to a few thousand bits).  The rate-1/2 and
rate-1/4 families mirror the code-rate structure of the simulated scheme;
the rate-1/4 members are the bases for repetition-extended rate-1/8 and
rate-1/16 codes.
"""

from __future__ import annotations

import functools

import numpy as np

from .linear_code import BinaryCode, gf2_rank, generator_from_parity


def peg_parity(n: int, dv: int, dc: int, seed: int = 0) -> np.ndarray:
    """Grow a (dv, dc)-regular parity-check matrix by progressive edge growth."""
    if n * dv % dc != 0:
        raise ValueError(f"(n*dv) must be divisible by dc: {n}*{dv} % {dc} != 0")
    m = n * dv // dc
    priority = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed))).permutation(m)

    var_adj = np.full((n, dv), -1, dtype=np.int64)
    check_adj = np.full((m, dc), -1, dtype=np.int64)
    var_deg = np.zeros(n, dtype=np.int64)
    check_deg = np.zeros(m, dtype=np.int64)

    for v in range(n):
        for _ in range(dv):
            # BFS over the current bipartite graph, levels recorded per check
            reached_c = np.zeros(m, dtype=bool)
            level_c = np.full(m, -1, dtype=np.int64)
            reached_v = np.zeros(n, dtype=bool)
            reached_v[v] = True
            frontier = np.array([v], dtype=np.int64)
            depth = 0
            while frontier.size:
                depth += 1
                nbr_c = var_adj[frontier].ravel()
                nbr_c = nbr_c[nbr_c >= 0]
                new_c = np.zeros(m, dtype=bool)
                new_c[nbr_c] = True
                new_c &= ~reached_c
                if not new_c.any():
                    break
                reached_c |= new_c
                level_c[new_c] = depth
                nbr_v = check_adj[np.nonzero(new_c)[0]].ravel()
                nbr_v = nbr_v[nbr_v >= 0]
                new_v = np.zeros(n, dtype=bool)
                new_v[nbr_v] = True
                new_v &= ~reached_v
                reached_v |= new_v
                frontier = np.nonzero(new_v)[0]

            open_slot = check_deg < dc
            cand = ~reached_c & open_slot
            if not cand.any():
                # everything reachable: take the farthest level with a free slot
                for lev in range(level_c.max(), 0, -1):
                    cand = (level_c == lev) & open_slot
                    if cand.any():
                        break
                else:
                    cand = open_slot
            idx = np.nonzero(cand)[0]
            pick = idx[np.lexsort((priority[idx], check_deg[idx]))[0]]

            var_adj[v, var_deg[v]] = pick
            check_adj[pick, check_deg[pick]] = v
            var_deg[v] += 1
            check_deg[pick] += 1

    h = np.zeros((m, n), dtype=np.uint8)
    h[var_adj.ravel(), np.repeat(np.arange(n), dv)] = 1
    return h


def _full_rank_peg(n: int, dv: int, dc: int, seed: int, name: str) -> BinaryCode:
    for attempt in range(16):
        h = peg_parity(n, dv, dc, seed=seed + attempt)
        if gf2_rank(h) == h.shape[0]:
            return generator_from_parity(h, name=name)
    raise RuntimeError(f"no full-rank PEG matrix found for {name} near seed {seed}")


def _hamming_7_4() -> BinaryCode:
    h = np.array(
        [
            [1, 0, 1, 0, 1, 0, 1],
            [0, 1, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1, 1],
        ],
        dtype=np.uint8,
    )
    return generator_from_parity(h, name="hamming_7_4")


_FACTORIES = {
    "hamming_7_4": _hamming_7_4,
    "ldpc_r12_n24": lambda: _full_rank_peg(24, 3, 6, seed=11, name="ldpc_r12_n24"),
    "ldpc_r14_n64": lambda: _full_rank_peg(64, 3, 4, seed=21, name="ldpc_r14_n64"),
    "ldpc_r12_n256": lambda: _full_rank_peg(256, 3, 6, seed=31, name="ldpc_r12_n256"),
    "ldpc_r14_n512": lambda: _full_rank_peg(512, 3, 4, seed=41, name="ldpc_r14_n512"),
    "ldpc_r14_n1024": lambda: _full_rank_peg(1024, 3, 4, seed=51, name="ldpc_r14_n1024"),
    "ldpc_r12_n2048": lambda: _full_rank_peg(2048, 3, 6, seed=61, name="ldpc_r12_n2048"),
}

BUILTIN_CODE_NAMES = tuple(sorted(_FACTORIES))


@functools.lru_cache(maxsize=None)
def builtin_code(name: str) -> BinaryCode:
    """Construct (once per process) the named fixture code."""
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise KeyError(
            f"unknown builtin code {name!r}; available: {', '.join(BUILTIN_CODE_NAMES)}"
        ) from None
    return factory()


def resolve_code(ref: str) -> BinaryCode:
    """Map a config reference to a code: builtin name or path to .alist file."""
    if ref in _FACTORIES:
        return builtin_code(ref)
    if ref.endswith(".alist"):
        from .linear_code import load_alist

        return load_alist(ref)
    raise ValueError(
        f"code reference {ref!r} is neither a builtin name nor an .alist path; "
        f"builtins: {', '.join(BUILTIN_CODE_NAMES)}"
    )
