"""Ground-truth guess extraction from a known optimal tour.

Splitting an optimal tour at a bad/good vertex partition yields the bad
chains, the boundary edges joining the two sides, and the good segments.
These are exactly the objects the guessing solvers enumerate, so the
split supports strong audits: the guess consistent with the optimal tour
can be rebuilt explicitly, pushed through the same construction steps the
solvers use, and every weight bound the approximation arguments lean on
can be checked with zero tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .alg_p import ChainSet, build_cst, parity_matching_alg2, shortcut_alg2
from .alg_q import (
    ConnectGuess,
    ContractedForest,
    LimbGuess,
    OrderedChainGuess,
    _reflect,
    assemble_structure,
    contract_forest,
    gap_anchor_trees,
    leftover_trees,
    realize_connector,
    shortcut_alg4,
    slots_of,
    tree_parity_matchings,
)
from .errors import InvariantViolation
from .graph import WeightedGraph
from .prims import spanning_t_forest
from .structures import Forest

Edge = tuple[int, int, int]


@dataclass(frozen=True)
class TourSplit:
    """An optimal tour cut at a bad/good partition.

    ``order`` is the tour rotated to start a bad run; ``good_runs[i]``
    follows ``bad_runs[i]``.  Chain, boundary, and segment weights sum to
    the tour weight.
    """

    order: tuple[int, ...]
    bad_runs: tuple[tuple[int, ...], ...]
    good_runs: tuple[tuple[int, ...], ...]
    boundary_edges: tuple[Edge, ...]
    good_edges: tuple[Edge, ...]
    chain_weight: int
    boundary_weight: int
    good_weight: int


def split_tour(g: WeightedGraph, order: Sequence[int], bad: frozenset[int]) -> TourSplit:
    """Cut a tour into alternating bad and good runs with their edges."""
    if not bad or len(bad) >= len(order):
        raise ValueError("split needs both bad and good vertices on the tour")
    seq = list(order)
    n = len(seq)
    start = next(i for i in range(n) if seq[i] in bad and seq[i - 1] not in bad)
    seq = seq[start:] + seq[:start]

    bad_runs: list[tuple[int, ...]] = []
    good_runs: list[tuple[int, ...]] = []
    i = 0
    while i < n:
        j = i
        while j < n and seq[j] in bad:
            j += 1
        bad_runs.append(tuple(seq[i:j]))
        k = j
        while k < n and seq[k] not in bad:
            k += 1
        good_runs.append(tuple(seq[j:k]))
        i = k
    if any(not r for r in bad_runs) or any(not r for r in good_runs):
        raise InvariantViolation("tour split produced an empty run")

    m = len(bad_runs)
    boundary: list[Edge] = []
    for idx in range(m):
        a = bad_runs[idx][-1]
        b = good_runs[idx][0]
        boundary.append((min(a, b), max(a, b), g.w(a, b)))
        c = good_runs[idx][-1]
        d = bad_runs[(idx + 1) % m][0]
        boundary.append((min(c, d), max(c, d), g.w(c, d)))
    good_edges: list[Edge] = []
    for run in good_runs:
        for a, b in zip(run, run[1:]):
            good_edges.append((min(a, b), max(a, b), g.w(a, b)))
    chain_weight = sum(g.path_weight(run) for run in bad_runs)
    boundary_weight = sum(w for _, _, w in boundary)
    good_weight = sum(w for _, _, w in good_edges)
    if chain_weight + boundary_weight + good_weight != g.tour_weight(seq):
        raise InvariantViolation("tour split weights do not sum to the tour weight")
    return TourSplit(
        order=tuple(seq),
        bad_runs=tuple(bad_runs),
        good_runs=tuple(good_runs),
        boundary_edges=tuple(boundary),
        good_edges=tuple(good_edges),
        chain_weight=chain_weight,
        boundary_weight=boundary_weight,
        good_weight=good_weight,
    )


def true_chain_set(split: TourSplit) -> ChainSet:
    """The chain grouping an optimal tour induces, in canonical form."""
    return ChainSet.of(split.bad_runs)


@dataclass(frozen=True)
class TrueAlg4Guess:
    """The ordered guess an optimal tour induces, with its limbs.

    ``good_runs`` is rotated in step with the guess, so ``good_runs[i]``
    is the segment sitting in gap ``i``.
    """

    guess: OrderedChainGuess
    good_runs: tuple[tuple[int, ...], ...]
    limb: LimbGuess


def true_alg4_guess(g: WeightedGraph, split: TourSplit) -> TrueAlg4Guess:
    lowest = min(v for run in split.bad_runs for v in run)
    idx = next(i for i, run in enumerate(split.bad_runs) if lowest in run)
    runs = split.bad_runs[idx:] + split.bad_runs[:idx]
    gruns = split.good_runs[idx:] + split.good_runs[:idx]
    f = tuple(1 if len(r) == 1 else 2 for r in gruns)
    guess = OrderedChainGuess(chains=runs, gap_anchor_counts=f)
    anchors: list[int] = []
    for slot in slots_of(guess):
        run = gruns[slot.gap]
        anchors.append(run[0] if slot.kind in ("single", "pair_out") else run[-1])
    edges: list[Edge] = []
    weight = 0
    for slot, anchor in zip(slots_of(guess), anchors):
        edges.append((min(anchor, slot.y), max(anchor, slot.y), g.w(anchor, slot.y)))
        weight += g.w(anchor, slot.y)
        if slot.kind == "single":
            edges.append((min(anchor, slot.z), max(anchor, slot.z), g.w(anchor, slot.z)))
            weight += g.w(anchor, slot.z)
    limb = LimbGuess(anchors=tuple(anchors), edges=tuple(edges), weight=weight)
    return TrueAlg4Guess(guess=guess, good_runs=gruns, limb=limb)


def canonical_ordered_guess(guess: OrderedChainGuess) -> OrderedChainGuess:
    """The representative the enumeration would yield for this guess."""
    cand = (guess.chains, guess.gap_anchor_counts)
    refl = _reflect(*cand)
    chains, f = min(cand, refl)
    return OrderedChainGuess(chains=chains, gap_anchor_counts=f)


def true_alg4_connect(
    tg: TrueAlg4Guess,
    forest: Forest,
    contracted: ContractedForest,
    hk_cap: int = 20,
) -> ConnectGuess:
    """Connector for the assignment the optimal tour itself realizes.

    Each leftover tree holds a good vertex that is no anchor; that vertex
    sits inside some two-anchor gap's segment, and assigning the tree to
    that gap guarantees the segment visits every tree the gap must serve.
    """
    slots = slots_of(tg.guess)
    leftover = leftover_trees(forest, slots, tg.limb.anchors)
    gap_trees = gap_anchor_trees(slots, tg.limb.anchors, contracted)
    run_of = {v: i for i, run in enumerate(tg.good_runs) for v in run}
    anchor_set = set(tg.limb.anchors)
    assignment: list[int] = []
    for t_idx in leftover:
        witness = min(forest.trees[t_idx].vertices - anchor_set)
        gap = run_of[witness]
        if tg.guess.gap_anchor_counts[gap] != 2:
            raise InvariantViolation("leftover witness sits in a single-anchor gap")
        assignment.append(gap)
    out = realize_connector(contracted, gap_trees, leftover, assignment, hk_cap)
    if out is None:
        raise InvariantViolation("unpruned connector realization returned nothing")
    return out


@dataclass(frozen=True)
class BoundAudit:
    """Named boolean checks from one ground-truth guess."""

    checks: tuple[tuple[str, bool], ...]

    def violations(self) -> list[str]:
        return [name for name, ok in self.checks if not ok]


def audit_alg2(g: WeightedGraph, opt_order: Sequence[int], bad: frozenset[int]) -> BoundAudit:
    """Bound checks for the chain guess an optimal tour induces.

    The constrained spanning tree never outweighs the tour, the parity
    matching never outweighs half of it, and the shortcut of the combined
    structure lands within 3/2 of it.
    """
    opt = g.tour_weight(opt_order)
    split = split_tour(g, opt_order, bad)
    chains = true_chain_set(split)
    cst = build_cst(g, chains)
    pm = parity_matching_alg2(g, chains, cst)
    tour = shortcut_alg2(g, chains, cst, pm)
    checks = (
        ("cst_weight_le_opt", cst.total_weight <= opt),
        ("parity_matching_le_half_opt", 2 * pm.weight <= opt),
        ("shortcut_le_structure", tour.weight <= cst.total_weight + pm.weight),
        ("true_guess_tour_le_3_halves_opt", 2 * tour.weight <= 3 * opt),
    )
    return BoundAudit(checks=checks)


def audit_alg4(g: WeightedGraph, opt_order: Sequence[int], bad: frozenset[int]) -> BoundAudit:
    """Bound and structure checks for the ordered guess a tour induces.

    Covers the forest-versus-segments bound, the limb and connector
    budgets, spanning connectivity of the assembled structure, per-tree
    parity, the absence of odd bad vertices, the matching total against
    the forest, and the final three-times-optimal guarantee.
    """
    opt = g.tour_weight(opt_order)
    split = split_tour(g, opt_order, bad)
    good = sorted(set(range(g.n)) - bad)
    m = len(split.bad_runs)
    forest = spanning_t_forest(good, g.w, m)
    contracted = contract_forest(g, forest)
    tg = true_alg4_guess(g, split)
    connect = true_alg4_connect(tg, forest, contracted)
    structure = assemble_structure(g, tg.guess, tg.limb, connect, forest)
    degrees = structure.degrees()
    spans = set(degrees) == set(range(g.n))
    connected = spans and structure.is_connected()
    odd = set(structure.odd_vertices())
    parity_even = all(
        len(odd & tree.vertices) % 2 == 0 for tree in forest.trees
    )
    no_odd_bad = not (odd & bad)
    checks: list[tuple[str, bool]] = [
        ("forest_le_good_segments", forest.total_weight <= split.good_weight),
        ("limbs_le_boundary", tg.limb.weight <= split.boundary_weight),
        ("connector_le_good_segments", connect.weight <= split.good_weight),
        ("structure_spans_and_connected", connected),
        ("per_tree_parity_even", parity_even),
        ("no_odd_bad_vertices", no_odd_bad),
    ]
    if connected and parity_even and no_odd_bad:
        matchings = tree_parity_matchings(g, structure, forest)
        matching_weight = sum(mt.total_weight for mt in matchings)
        tour = shortcut_alg4(g, tg.guess, tg.limb, connect, forest, matchings)
        checks.append(("matchings_le_forest", matching_weight <= forest.total_weight))
        checks.append(("true_guess_tour_le_3_opt", tour.weight <= 3 * opt))
    else:
        checks.append(("matchings_le_forest", False))
        checks.append(("true_guess_tour_le_3_opt", False))
    return BoundAudit(checks=tuple(checks))
