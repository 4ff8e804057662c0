"""Combinatorial baseline algorithms.

These exist to seed the preclustering stage with a cheap starting
clustering and to give the experiment harness something to compare
against.  Neither carries an approximation guarantee here; empirically
they land within a small constant of optimal at the sizes we enumerate.
"""

from __future__ import annotations

import random

from .model import MINUS, ChromaticInstance, Clustering, iter_pairs


def singletons(inst: ChromaticInstance) -> Clustering:
    """Every vertex alone, first color everywhere.  Costs exactly |E+|."""
    return Clustering.singletons(inst.n, color=0)


def chromatic_pivot(inst: ChromaticInstance, rng_seed: int) -> Clustering:
    """Random-pivot clustering driven by plus edges.

    Repeatedly draw a uniformly random plus edge (u, v), say of color c,
    among pairs whose endpoints are both still unclustered.  The new
    cluster is {u, v} plus every unclustered w joined to both u and v by
    plus edges of that same color c; the cluster takes color c.  When no
    eligible plus edge remains, leftovers become singletons with the
    first color.
    """
    rng = random.Random(rng_seed)
    unclustered = set(range(inst.n))
    parts: list[frozenset[int]] = []
    part_color: list[int] = []
    while True:
        pool = [
            (u, v)
            for u, v in iter_pairs(inst.n)
            if u in unclustered and v in unclustered and inst.label(u, v) != MINUS
        ]
        if not pool:
            break
        u, v = pool[rng.randrange(len(pool))]
        ell = inst.label(u, v)
        members = {u, v}
        for w in unclustered:
            if w == u or w == v:
                continue
            if inst.label(u, w) == ell and inst.label(v, w) == ell:
                members.add(w)
        for w in members:
            if w not in (u, v):
                # construction guard: both pivot edges must be + with the pivot color
                assert inst.label(u, w) == ell and inst.label(w, v) == ell
        parts.append(frozenset(members))
        part_color.append(ell)
        unclustered -= members
    for w in sorted(unclustered):
        parts.append(frozenset((w,)))
        part_color.append(0)
    return Clustering(parts=tuple(parts), part_color=tuple(part_color))
