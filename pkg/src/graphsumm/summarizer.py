"""Greedy pair-merge summarization with weighted candidate sampling.

Each iteration samples a handful of candidate supernode pairs (two weighted
draws per pair), scores every candidate by how much the l1 reconstruction
error would drop if the pair were merged, merges the best one, and patches
the sampling weights of the merged node and its neighbors. The score of a
pair has a closed form whose only non-constant part is a cross term over
common neighbors; in sketch mode that term is replaced by a count-min
inner-product estimate, making every scoring O(width * depth).

Scoring is read-only: the candidate scorings of one iteration may safely run
concurrently. Sampling, merging, and weight/sketch updates mutate shared
state and are sequential.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .cm_sketch import CountMinSketch, make_hash_seeds
from .sampling_tree import SamplingTree
from .summary_graph import SummaryGraph

SAMPLE_RULES = ("logn", "5logn", "log2n")  # plus "fixed:N"


@dataclass
class ScoredPair:
    """One scored merge candidate; a != b and both alive when scored."""
    a: int
    b: int
    score: float
    approx: bool


@dataclass
class SummarizerConfig:
    target_k: int
    sample_rule: str = "logn"
    score_mode: str = "exact"          # "exact" or "sketch"
    sketch_width: int = 100
    sketch_depth: int = 2
    seed: int = 0
    max_resample_attempts: int = 64

    def __post_init__(self):
        if self.target_k < 1:
            raise ValueError("target_k must be at least 1")
        if self.score_mode not in ("exact", "sketch"):
            raise ValueError(f"unknown score mode {self.score_mode!r}")
        if self.score_mode == "sketch" and (self.sketch_width < 1 or self.sketch_depth < 1):
            raise ValueError("sketch width and depth must be positive")
        if self.max_resample_attempts < 1:
            raise ValueError("max_resample_attempts must be positive")
        parse_sample_rule(self.sample_rule)  # validates


def parse_sample_rule(rule: str):
    """Split a sample-size rule into (kind, fixed size or None)."""
    if rule in SAMPLE_RULES:
        return rule, None
    if rule.startswith("fixed:"):
        try:
            size = int(rule.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad fixed sample rule {rule!r}") from None
        if size < 1:
            raise ValueError("fixed sample size must be at least 1")
        return "fixed", size
    raise ValueError(f"unknown sample rule {rule!r}")


def sample_size(rule: str, n_alive: int) -> int:
    """Candidate pairs to draw this iteration, as a function of n(t)."""
    kind, fixed = parse_sample_rule(rule)
    if kind == "fixed":
        return fixed
    log_n = math.log2(n_alive) if n_alive > 1 else 0.0
    if kind == "logn":
        return max(1, math.ceil(log_n))
    if kind == "5logn":
        return max(1, math.ceil(5.0 * log_n))
    return max(1, math.ceil(log_n * log_n))  # log2n


# ----------------------------------------------------------------------
# per-node weight and per-pair score

def _internal_sq_term(internal_e: int, size_n: int) -> float:
    """4*e^2 / C(n,2), with the n<2 case defined as 0 (e is 0 then)."""
    if size_n < 2 or internal_e == 0:
        return 0.0
    return 4.0 * internal_e * internal_e / (size_n * (size_n - 1) / 2.0)


def node_weight(g: SummaryGraph, a: int) -> float:
    """Sampling mass of a node: the negated reciprocal of its (non-positive)
    error-contribution value, or 0 for a node with no edges at all."""
    node = g.nodes[a]
    f = -_internal_sq_term(node.internal_e, node.size_n) \
        - 4.0 * node.d_value / node.size_n
    if f == 0.0:
        return 0.0
    return -1.0 / f


def _score_from_cross(g: SummaryGraph, a: int, b: int, cross: float) -> float:
    """Assemble the score given the cross term sum_{i != a,b} e_ai*e_bi/n_i."""
    node_a = g.nodes[a]
    node_b = g.nodes[b]
    size_a = node_a.size_n
    size_b = node_b.size_n
    size_z = size_a + size_b
    e_ab = g.cross_count(a, b)
    pair_sq = 4.0 * e_ab * e_ab / (size_a * size_b) if e_ab else 0.0
    # sum over i != a,b of e_ai^2/n_i, from the cached full sums
    sum_sq_a = node_a.d_value - (e_ab * e_ab / size_b if e_ab else 0.0)
    sum_sq_b = node_b.d_value - (e_ab * e_ab / size_a if e_ab else 0.0)
    merged_internal = node_a.internal_e + node_b.internal_e + e_ab
    return (-_internal_sq_term(node_a.internal_e, size_a)
            - 4.0 * node_a.d_value / size_a
            + pair_sq
            - _internal_sq_term(node_b.internal_e, size_b)
            - 4.0 * node_b.d_value / size_b
            + _internal_sq_term(merged_internal, size_z)
            + 4.0 / size_z * (sum_sq_a + sum_sq_b + 2.0 * cross))


def _check_pair(g: SummaryGraph, a: int, b: int) -> None:
    if a == b or not g.is_alive(a) or not g.is_alive(b):
        raise ValueError("invalid pair")


def score_exact(g: SummaryGraph, a: int, b: int) -> float:
    """Drop in l1 reconstruction error caused by merging a and b, exactly.

    Cost is O(min(deg a, deg b)) on top of constant-time terms: the cross
    term walks the shorter adjacency map and probes the longer one.
    """
    _check_pair(g, a, b)
    adj_a = g.adj[a]
    adj_b = g.adj[b]
    if len(adj_b) < len(adj_a):
        shorter, longer, skip = adj_b, adj_a, a
    else:
        shorter, longer, skip = adj_a, adj_b, b
    nodes = g.nodes
    cross = 0.0
    for x, edge in shorter.items():
        if x == skip:
            continue
        other = longer.get(x)
        if other is not None:
            cross += edge.cross_e * other.cross_e / nodes[x].size_n
    return _score_from_cross(g, a, b, cross)


def score_approx(g: SummaryGraph, a: int, b: int,
                 sketches: dict[int, CountMinSketch]) -> float:
    """Like score_exact but with the cross term estimated from the two
    nodes' sketches in O(width * depth).

    The pair's own coordinates (b inside a's vector and a inside b's) are
    excluded from the estimate using their exactly-known values, so the
    estimate targets the sum over i != a,b. The cross term only ever gets
    overestimated and enters the score positively, hence
    score_approx >= score_exact up to float rounding.
    """
    _check_pair(g, a, b)
    e_ab = g.cross_count(a, b)
    if e_ab:
        size_a = g.nodes[a].size_n
        size_b = g.nodes[b].size_n
        exclude = ((b, e_ab / math.sqrt(size_b), 0.0),
                   (a, 0.0, e_ab / math.sqrt(size_a)))
    else:
        exclude = ()
    cross = sketches[a].inner_product_estimate(sketches[b], exclude=exclude)
    return _score_from_cross(g, a, b, cross)


# ----------------------------------------------------------------------
# sampling

def sample_pairs(g: SummaryGraph, tree: SamplingTree, s: int,
                 rng: random.Random, max_attempts: int = 64) -> list[tuple[int, int]]:
    """Draw s candidate pairs, two independent weighted draws per pair,
    redrawing the partner while it equals the first draw.

    A zero total weight falls back to uniform sampling over alive nodes so
    the loop can always make progress; failing to produce a distinct partner
    within max_attempts raises (all mass concentrated on one node).
    """
    total = tree.total_weight
    if total <= 0.0:
        alive = sorted(g.alive_ids())
        if len(alive) < 2:
            raise ValueError("need at least 2 alive nodes to sample a pair")
        draw = lambda: alive[rng.randrange(len(alive))]
    else:
        draw = lambda: tree.get_leaf(rng.random() * tree.total_weight)
    pairs = []
    for _ in range(s):
        first = draw()
        partner = draw()
        attempts = 1
        while partner == first:
            if attempts >= max_attempts:
                raise ValueError("degenerate weight distribution")
            partner = draw()
            attempts += 1
        pairs.append((first, partner))
    return pairs


# ----------------------------------------------------------------------
# main loop

def build_sketches(g: SummaryGraph, width: int, depth: int,
                   seeds) -> dict[int, CountMinSketch]:
    """One neighbor-vector sketch per alive supernode, all sharing seeds."""
    sketches = {}
    nodes = g.nodes
    for a in g.alive_ids():
        sk = CountMinSketch(width, depth, seeds)
        for x, edge in g.adj[a].items():
            sk.update(x, edge.cross_e / math.sqrt(nodes[x].size_n))
        sketches[a] = sk
    return sketches


class Summarizer:
    """Drives the merge loop; exposes the tree and sketches for inspection."""

    def __init__(self, g: SummaryGraph, cfg: SummarizerConfig):
        if cfg.target_k > g.alive_count:
            raise ValueError(f"target_k={cfg.target_k} exceeds "
                             f"{g.alive_count} alive nodes")
        self.graph = g
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        self.tree = SamplingTree.build(
            [(a, node_weight(g, a)) for a in g.alive_ids()])
        self.sketches = None
        if cfg.score_mode == "sketch":
            seeds = make_hash_seeds(cfg.sketch_depth, cfg.seed)
            self.sketches = build_sketches(g, cfg.sketch_width,
                                           cfg.sketch_depth, seeds)
        self.iterations = 0
        self.last_candidates: list[ScoredPair] = []

    def score(self, a: int, b: int) -> float:
        if self.sketches is None:
            return score_exact(self.graph, a, b)
        return score_approx(self.graph, a, b, self.sketches)

    def step(self) -> int:
        """One iteration: sample, score, merge the argmax pair (first
        encountered wins ties), patch weights and sketches. Returns the
        merged node's id."""
        g = self.graph
        s = sample_size(self.cfg.sample_rule, g.alive_count)
        pairs = sample_pairs(g, self.tree, s, self.rng,
                             self.cfg.max_resample_attempts)
        approx = self.sketches is not None
        best = None
        candidates = []
        for a, b in pairs:
            candidate = ScoredPair(a, b, self.score(a, b), approx)
            candidates.append(candidate)
            if best is None or candidate.score > best.score:
                best = candidate
        self.last_candidates = candidates
        a, b = best.a, best.b

        if self.sketches is not None:
            snapshot = self._pre_merge_snapshot(a, b)
        z = g.merge(a, b)
        if self.sketches is not None:
            self._patch_sketches(z, *snapshot)

        tree = self.tree
        tree.delete(a)
        tree.delete(b)
        tree.insert(z, node_weight(g, z))
        for x in g.adj[z]:
            tree.update_weight(x, node_weight(g, x))
        self.iterations += 1
        return z

    def run(self) -> SummaryGraph:
        while self.graph.alive_count > self.cfg.target_k:
            self.step()
        return self.graph

    # ------------------------------------------------------------------

    def _pre_merge_snapshot(self, a, b):
        g = self.graph
        neighbors_a = [(x, edge.cross_e) for x, edge in g.adj[a].items() if x != b]
        neighbors_b = [(x, edge.cross_e) for x, edge in g.adj[b].items() if x != a]
        return (a, b, g.nodes[a].size_n, g.nodes[b].size_n,
                g.cross_count(a, b), neighbors_a, neighbors_b)

    def _patch_sketches(self, z, a, b, size_a, size_b, e_ab,
                        neighbors_a, neighbors_b):
        # The merged node's vector is the sum of its parents' vectors with
        # the mutual coordinates dropped (those edges became internal), and
        # every neighbor swaps its a/b coordinates for a single z coordinate.
        sketches = self.sketches
        sqrt_a = math.sqrt(size_a)
        sqrt_b = math.sqrt(size_b)
        inv_sqrt_z = 1.0 / math.sqrt(size_a + size_b)
        merged = CountMinSketch.combined(sketches[a], sketches[b])
        if e_ab:
            merged.update(b, -e_ab / sqrt_b)
            merged.update(a, -e_ab / sqrt_a)
        del sketches[a]
        del sketches[b]
        sketches[z] = merged
        affected: dict[int, list[int]] = {}
        for x, e_ax in neighbors_a:
            affected[x] = [e_ax, 0]
        for x, e_bx in neighbors_b:
            affected.setdefault(x, [0, 0])[1] = e_bx
        for x, (e_ax, e_bx) in affected.items():
            sk = sketches[x]
            if e_ax:
                sk.update(a, -e_ax / sqrt_a)
            if e_bx:
                sk.update(b, -e_bx / sqrt_b)
            sk.update(z, (e_ax + e_bx) * inv_sqrt_z)


def summarize(g: SummaryGraph, cfg: SummarizerConfig) -> SummaryGraph:
    """Merge the graph down to cfg.target_k supernodes in place."""
    return Summarizer(g, cfg).run()
