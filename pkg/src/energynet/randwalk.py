"""Conductance-weighted random walk: exact escape probabilities by linear
algebra and seeded Monte Carlo estimation.

The headline identity tying the walk to the operator theory is
c(x) R(x) P[x -> o] = 1, checked in the tests for every vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapHit, UnknownVertex
from .numkernel import SymMatrix, spd_solve


@dataclass(frozen=True)
class WalkEstimate:
    x: object
    exact: float
    mc_estimate: float
    mc_stderr: float
    samples: int
    seed: int
    cap_hits: int = 0

    def to_json_dict(self):
        return {
            "x": self.x,
            "exact": self.exact,
            "mc_estimate": self.mc_estimate,
            "mc_stderr": self.mc_stderr,
            "samples": self.samples,
            "seed": self.seed,
            "cap_hits": self.cap_hits,
        }


def transition_prob(net, x, y):
    """p(x, y) = c_xy / c(x); rows sum to one."""
    xi, yi = net.index(x), net.index(y)
    hits = np.flatnonzero(net.neighbor_idx[xi] == yi)
    w = net.neighbor_w[xi][hits[0]] if hits.size else 0.0
    return float(w / net.conductance[xi])


def escape_prob_exact(net, x):
    """P[x -> o]: probability the walk from x hits o before returning to x.

    Computed from the harmonic extension h on G \\ {o, x} with h(o) = 1 and
    h(x) = 0, then P = sum_y p(x, y) h(y).
    """
    xi = net.index(x)
    oi = net.origin_index
    if xi == oi:
        raise UnknownVertex("escape probability from the origin is undefined")
    interior = [i for i in range(net.n) if i not in (oi, xi)]
    h = np.zeros(net.n)
    h[oi] = 1.0
    if interior:
        L = net.laplacian_matrix()
        sub = L[np.ix_(interior, interior)]
        rhs = -L[np.ix_(interior, [oi])].ravel()  # h(o) = 1 boundary term
        h[interior] = spd_solve(SymMatrix.from_array(sub), rhs)
    p_row = net.neighbor_w[xi] / net.conductance[xi]
    return float(np.dot(p_row, h[net.neighbor_idx[xi]]))


def escape_prob_mc(net, x, samples, seed, max_steps=10**9):
    """Monte Carlo excursion estimate of P[x -> o], reproducible per seed.

    Excursions exceeding max_steps raise CapHit carrying the partial
    estimate over the decided excursions.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    xi = net.index(x)
    oi = net.origin_index
    if xi == oi:
        raise UnknownVertex("escape probability from the origin is undefined")

    cum = [np.cumsum(w) / w.sum() for w in net.neighbor_w]
    nbr = net.neighbor_idx
    rng = np.random.Generator(np.random.Philox(key=seed))

    state = np.full(samples, xi, dtype=np.intp)
    outcome = np.full(samples, -1, dtype=np.int8)  # -1 undecided, 0 fail, 1 success
    active = np.arange(samples)
    steps = 0
    while active.size:
        steps += 1
        if steps > max_steps:
            break
        cur = state[active]
        u = rng.random(cur.size)
        nxt = np.empty_like(cur)
        for s in np.unique(cur):
            mask = cur == s
            pos = np.searchsorted(cum[s], u[mask], side="right")
            nxt[mask] = nbr[s][np.minimum(pos, len(nbr[s]) - 1)]
        escaped = nxt == oi
        returned = nxt == xi
        outcome[active[escaped]] = 1
        outcome[active[returned]] = 0
        undecided = ~(escaped | returned)
        state[active] = nxt
        active = active[undecided]

    cap_hits = int(active.size)
    decided = samples - cap_hits
    successes = int(np.sum(outcome == 1))
    phat = successes / decided if decided else float("nan")
    stderr = float(np.sqrt(phat * (1 - phat) / decided)) if decided else float("nan")
    est = WalkEstimate(
        x=x,
        exact=escape_prob_exact(net, x),
        mc_estimate=float(phat),
        mc_stderr=stderr,
        samples=samples,
        seed=seed,
        cap_hits=cap_hits,
    )
    if cap_hits:
        raise CapHit(
            f"{cap_hits} of {samples} excursions hit the {max_steps}-step cap",
            estimate=est,
        )
    return est
