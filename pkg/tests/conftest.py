"""Shared helpers: random instances, independent oracles, dataset lookup."""

from __future__ import annotations

import os
import random
import urllib.request
from pathlib import Path

import pytest

from graphsumm import CountMinSketch, SummaryGraph, re_closed

DATA_DIR = Path(__file__).parent / "data"

DATASETS = {
    "facebook": ("facebook_combined.txt",
                 "https://snap.stanford.edu/data/facebook_combined.txt.gz"),
    "enron": ("email-Enron.txt",
              "https://snap.stanford.edu/data/email-Enron.txt.gz"),
}


# ----------------------------------------------------------------------
# random instances

def gnp_edges(n: int, p: float, rng: random.Random) -> list[tuple[int, int]]:
    """Erdos-Renyi edge list over vertices 0..n-1, guaranteed non-empty."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    if not edges:
        edges = [(rng.randrange(n - 1), n - 1)]
    return edges


def constant_degree_edges(n: int, avg_degree: int, rng: random.Random):
    """Random multigraph-ish edge list with ~avg_degree mean degree."""
    edges = []
    for _ in range(n * avg_degree // 2):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            edges.append((u, v))
    return edges


def random_partition(vertices, blocks: int, rng: random.Random) -> list[list[int]]:
    """Partition into at most `blocks` non-empty classes."""
    vertices = list(vertices)
    rng.shuffle(vertices)
    blocks = min(blocks, len(vertices))
    classes = [[vertices[i]] for i in range(blocks)]
    for v in vertices[blocks:]:
        classes[rng.randrange(blocks)].append(v)
    return classes


def merge_partition(g: SummaryGraph, partition) -> SummaryGraph:
    """Realize a partition by merging each class down to one supernode."""
    for block in partition:
        current = block[0]
        for v in block[1:]:
            current = g.merge(current, v)
    return g


# ----------------------------------------------------------------------
# independent oracles

def score_oracle(g: SummaryGraph, a: int, b: int) -> float:
    """RE drop from merging (a, b), by actually merging a copy."""
    before = re_closed(g)
    trial = g.copy()
    trial.merge(a, b)
    return before - re_closed(trial)


def linear_scan_leaf(items: list[tuple[int, float]], r: float) -> int:
    """Reference weighted draw: first leaf (in slot order) whose cumulative
    half-open range [cum, cum + weight) contains r."""
    cum = 0.0
    for vertex, weight in items:
        if r < cum + weight:
            return vertex
        cum += weight
    raise ValueError(f"r={r} beyond total weight {cum}")


def sparse_int_vector(rng: random.Random, universe: int,
                      lo: int, hi: int) -> dict[int, float]:
    """Sparse non-negative vector with small integer values (so that sums
    and products are exact in float64)."""
    support = rng.sample(range(universe), rng.randint(lo, hi))
    return {c: float(rng.randint(1, 8)) for c in support}


def exact_dot(va: dict[int, float], vb: dict[int, float]) -> float:
    return sum(value * vb[c] for c, value in va.items() if c in vb)


def sketch_of(vec: dict[int, float], width: int, depth: int, seeds) -> CountMinSketch:
    sk = CountMinSketch(width, depth, seeds)
    for c, value in vec.items():
        sk.update(c, value)
    return sk


# ----------------------------------------------------------------------
# SNAP datasets (for the benchmark-scale acceptance criteria)

def dataset_path(name: str) -> Path | None:
    """Locate (or try once to download) a SNAP dataset; None if unavailable."""
    filename, url = DATASETS[name]
    candidates = [DATA_DIR / filename, Path("/root/pkg/data") / filename]
    env_dir = os.environ.get("GRAPHSUMM_DATA_DIR")
    if env_dir:
        candidates.insert(0, Path(env_dir) / filename)
    for path in candidates:
        if path.is_file():
            return path
    target = DATA_DIR / filename
    try:
        DATA_DIR.mkdir(parents=True, exist_ok=True)
        import gzip
        with urllib.request.urlopen(url, timeout=20) as response:
            payload = gzip.decompress(response.read())
        target.write_bytes(payload)
        return target
    except OSError:
        return None


def require_dataset(name: str) -> Path:
    path = dataset_path(name)
    if path is None:
        pytest.skip(f"{DATASETS[name][0]} not available (no network to SNAP; "
                    f"place it under tests/data/ or set GRAPHSUMM_DATA_DIR)")
    return path
