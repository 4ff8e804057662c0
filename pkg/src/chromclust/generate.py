"""Planted-partition instance generator.

Ground truth first, noise second: vertices go to k clusters round-robin,
each cluster takes a palette color, intra edges are positive with the
cluster color and inter edges negative.  Then each edge's sign flips
with probability p (a fresh positive edge draws a uniform color) and
each surviving positive edge is recolored uniformly with probability q.
Everything is a pure function of the model, seed included.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import StructuralError
from .model import MINUS, ChromaticInstance, Clustering, iter_pairs, pair_count


@dataclass(frozen=True)
class PlantedModel:
    n: int
    k: int
    n_colors: int
    flip_prob: float
    recolor_prob: float
    seed: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise StructuralError("n must be at least 1")
        if not 1 <= self.k <= self.n:
            raise StructuralError("cluster count must satisfy 1 <= k <= n")
        if self.n_colors < 1:
            raise StructuralError("palette must have at least one color")
        if not 0.0 <= self.flip_prob <= 1.0:
            raise StructuralError("flip probability must lie in [0, 1]")
        if not 0.0 <= self.recolor_prob <= 1.0:
            raise StructuralError("recolor probability must lie in [0, 1]")


def default_palette(n_colors: int) -> tuple[str, ...]:
    return tuple(f"c{i}" for i in range(n_colors))


def planted_solution(model: PlantedModel) -> Clustering:
    """The noiseless ground truth the generator starts from."""
    membership = [v % model.k for v in range(model.n)]
    colors = [j % model.n_colors for j in range(model.k)]
    return Clustering.from_membership(membership, colors)


def generate_planted(model: PlantedModel) -> ChromaticInstance:
    rng = random.Random(model.seed)
    cluster = [v % model.k for v in range(model.n)]
    cluster_color = [j % model.n_colors for j in range(model.k)]
    labels = np.empty(pair_count(model.n), dtype=np.int16)
    for i, (u, v) in enumerate(iter_pairs(model.n)):
        if cluster[u] == cluster[v]:
            lab = cluster_color[cluster[u]]
        else:
            lab = MINUS
        if rng.random() < model.flip_prob:
            lab = rng.randrange(model.n_colors) if lab == MINUS else MINUS
        labels[i] = lab
    for i in range(len(labels)):
        if labels[i] != MINUS and rng.random() < model.recolor_prob:
            labels[i] = rng.randrange(model.n_colors)
    return ChromaticInstance(
        n=model.n, colors=default_palette(model.n_colors), labels=labels
    )
