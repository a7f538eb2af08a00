"""Tour construction parameterized by the minimum violating-set size.

The solver guesses, for some optimal tour: the cyclic order and direction
in which the bad vertices are traversed (as chains), how many distinct
good attachment vertices sit in each gap between consecutive chains (one
or two), which good vertices play those attachment roles (from small
ranked candidate pools), and which trees of a spanning forest of the good
side each gap's connector must pick up.  Each complete guess is assembled
into a connected even-degree multigraph whose Eulerian walk shortcuts to a
Hamiltonian tour.  Keeping the best tour over all guesses yields weight at
most three times optimal, because the guess matching the optimal tour is
always enumerated and every piece of its assembly is individually bounded
against the corresponding piece of the optimal tour.

Here the bad side is a minimum violating set, so unlike the larger
violating-triangle partition, only the good-good-good triangles are
guaranteed metric; every shortcut below is arranged to bypass good
vertices flanked by good vertices only.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from . import safety
from .errors import (
    CapExceeded,
    InvariantViolation,
    ParityViolated,
    StructureViolated,
)
from .graph import WeightedGraph, VertexPartition, bad_vertices_p, min_violating_set
from .metric import christofides
from .prims import (
    _hk_path,
    _hk_tour,
    eulerian_tour,
    held_karp_tour,
    min_weight_perfect_matching,
    spanning_t_forest,
)
from .report import SolveReport
from .structures import Forest, Matching, MultiEdgeSet, Tour
from .alg_p import _set_partitions

ORDERED_CHAIN_CAP = 5
"""Hard cap on the bad-vertex count for ordered-chain enumeration."""

Edge = tuple[int, int, int]


@dataclass(frozen=True)
class OrderedChainGuess:
    """One guessed cyclic arrangement of the bad vertices.

    ``chains`` lists the bad chains in traversal order, each oriented;
    ``gap_anchor_counts[i]`` is 1 or 2 and tells how many distinct good
    attachment vertices the tour uses between the end of ``chains[i]`` and
    the start of the next chain (cyclically).
    """

    chains: tuple[tuple[int, ...], ...]
    gap_anchor_counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.chains) != len(self.gap_anchor_counts):
            raise ValueError("one gap per chain required")
        if any(f not in (1, 2) for f in self.gap_anchor_counts):
            raise ValueError("gap anchor counts must be 1 or 2")

    def vertices(self) -> frozenset[int]:
        return frozenset(v for c in self.chains for v in c)

    def chain_edges(self, g: WeightedGraph) -> list[Edge]:
        out: list[Edge] = []
        for chain in self.chains:
            for a, b in zip(chain, chain[1:]):
                out.append((min(a, b), max(a, b), g.w(a, b)))
        return out

    def chain_weight(self, g: WeightedGraph) -> int:
        return sum(w for _, _, w in self.chain_edges(g))


@dataclass(frozen=True)
class Slot:
    """One anchor position to fill: a gap side and its bad endpoint(s).

    A ``single`` slot is one good vertex touching both surrounding chain
    ends; ``pair_out`` touches the end of the gap's left chain and
    ``pair_in`` the start of its right chain.
    """

    gap: int
    kind: str
    y: int
    z: int | None = None


@dataclass(frozen=True)
class LimbGuess:
    """Anchors chosen for every slot, with the implied good-bad edges.

    ``edges`` is a multiset: a single anchor bridging a one-vertex chain
    contributes the same edge twice.
    """

    anchors: tuple[int, ...]
    edges: tuple[Edge, ...]
    weight: int


@dataclass(frozen=True)
class ConnectGuess:
    """Connector edges for one assignment of leftover trees to gaps.

    ``assignment[i]`` is the gap index that must pick up the i-th tree
    (in sorted order) of the trees left unconnected by the limbs;
    ``edges`` realizes, per gap, a cheapest tour or path over the involved
    trees in the contracted graph, mapped back to concrete vertex pairs.
    """

    assignment: tuple[int, ...]
    edges: tuple[Edge, ...]
    weight: int


def _reflect(
    chains: tuple[tuple[int, ...], ...], f: tuple[int, ...]
) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    rev = [tuple(reversed(c)) for c in chains]
    out = (rev[0],) + tuple(rev[len(chains) - 1 : 0 : -1])
    return out, tuple(reversed(f))


def enumerate_ordered_chains(
    bad: Sequence[int], cap: int = ORDERED_CHAIN_CAP
) -> Iterator[OrderedChainGuess]:
    """All cyclic chain arrangements with gap counts, up to symmetry.

    The chain holding the smallest bad vertex is pinned first (killing
    rotations) and each arrangement is emitted only if it compares no
    larger than its reversal (killing reflections).  A single bad vertex
    yields exactly two guesses, one per gap count.
    """
    vs = sorted(bad)
    if len(vs) > cap:
        raise CapExceeded(f"{len(vs)} bad vertices exceed the ordered-chain cap {cap}")
    if not vs:
        yield OrderedChainGuess(chains=(), gap_anchor_counts=())
        return
    lowest = vs[0]
    for part in _set_partitions(vs):
        blocks = [sorted(b) for b in part]
        first_idx = next(i for i, b in enumerate(blocks) if lowest in b)
        first_block = blocks.pop(first_idx)
        for rest in itertools.permutations(blocks):
            ordered_blocks = [first_block, *rest]
            per_block = [
                sorted(itertools.permutations(b)) if len(b) >= 2 else [tuple(b)]
                for b in ordered_blocks
            ]
            for oriented in itertools.product(*per_block):
                for f in itertools.product((1, 2), repeat=len(ordered_blocks)):
                    if (oriented, f) <= _reflect(oriented, f):
                        yield OrderedChainGuess(chains=oriented, gap_anchor_counts=f)


def slots_of(guess: OrderedChainGuess) -> list[Slot]:
    """Anchor slots in traversal order: one per gap side."""
    m = len(guess.chains)
    slots: list[Slot] = []
    for i in range(m):
        left_end = guess.chains[i][-1]
        right_start = guess.chains[(i + 1) % m][0]
        if guess.gap_anchor_counts[i] == 1:
            slots.append(Slot(gap=i, kind="single", y=left_end, z=right_start))
        else:
            slots.append(Slot(gap=i, kind="pair_out", y=left_end))
            slots.append(Slot(gap=i, kind="pair_in", y=right_start))
    return slots


def _slot_cost(g: WeightedGraph, slot: Slot, v: int) -> int:
    if slot.kind == "single":
        return g.w(v, slot.y) + g.w(v, slot.z)
    return g.w(v, slot.y)


def _slot_pools(
    g: WeightedGraph, slots: list[Slot], forest: Forest, q: int
) -> list[list[tuple[int, int]]]:
    """Per slot: (cost, vertex) candidates, cheapest first.

    For each tree only its cheapest min(2q, tree size) vertices compete,
    which is enough to always contain a workable anchor, and keeps the
    per-tree potential sets within the 4q*q bound.
    """
    pools: list[list[tuple[int, int]]] = []
    per_tree_potential: dict[int, set[int]] = {}
    for slot in slots:
        pool: list[tuple[int, int]] = []
        for t_idx, tree in enumerate(forest.trees):
            n_x = min(2 * q, len(tree.vertices))
            ranked = sorted(tree.vertices, key=lambda v: (_slot_cost(g, slot, v), v))[:n_x]
            per_tree_potential.setdefault(t_idx, set()).update(ranked)
            pool.extend((_slot_cost(g, slot, v), v) for v in ranked)
        pool.sort()
        pools.append(pool)
    for t_idx, potential in per_tree_potential.items():
        if len(potential) > 4 * q * q:
            raise InvariantViolation("potential set exceeds its size bound")
    return pools


def limb_guesses(
    g: WeightedGraph,
    guess: OrderedChainGuess,
    forest: Forest,
    q: int,
    should_prune: Callable[[int], bool] | None = None,
) -> Iterator[LimbGuess]:
    """All ways to fill the slots with pairwise-distinct ranked candidates.

    Candidates are tried cheapest-first per slot.  ``should_prune`` sees a
    lower bound on the total limb weight of any completion of the current
    prefix and may cut the branch; since pools are sorted, a pruned
    candidate also cuts its more expensive siblings.
    """
    slots = slots_of(guess)
    pools = _slot_pools(g, slots, forest, q)
    suffix_min = [0] * (len(slots) + 1)
    for i in range(len(slots) - 1, -1, -1):
        if not pools[i]:
            return
        suffix_min[i] = suffix_min[i + 1] + pools[i][0][0]

    anchors: list[int] = []
    used: set[int] = set()

    def rec(i: int, acc: int) -> Iterator[LimbGuess]:
        if i == len(slots):
            edges: list[Edge] = []
            for slot, anchor in zip(slots, anchors):
                edges.append((min(anchor, slot.y), max(anchor, slot.y), g.w(anchor, slot.y)))
                if slot.kind == "single":
                    edges.append(
                        (min(anchor, slot.z), max(anchor, slot.z), g.w(anchor, slot.z))
                    )
            yield LimbGuess(anchors=tuple(anchors), edges=tuple(edges), weight=acc)
            return
        for cost, v in pools[i]:
            if v in used:
                continue
            if should_prune is not None and should_prune(acc + cost + suffix_min[i + 1]):
                break
            used.add(v)
            anchors.append(v)
            yield from rec(i + 1, acc + cost)
            anchors.pop()
            used.remove(v)

    yield from rec(0, 0)


@dataclass(frozen=True)
class ContractedForest:
    """Tree-level distances: cheapest concrete pair per tree pair."""

    closest_pair: dict[tuple[int, int], tuple[int, int, int]]
    tree_of: dict[int, int]

    def weight(self, s: int, t: int) -> int:
        return self.closest_pair[(s, t) if s < t else (t, s)][0]

    def realize(self, s: int, t: int) -> Edge:
        w, v, v2 = self.closest_pair[(s, t) if s < t else (t, s)]
        return (v, v2, w) if v < v2 else (v2, v, w)


def contract_forest(g: WeightedGraph, forest: Forest) -> ContractedForest:
    pairs: dict[tuple[int, int], tuple[int, int, int]] = {}
    trees = forest.trees
    for s in range(len(trees)):
        vs = sorted(trees[s].vertices)
        for t in range(s + 1, len(trees)):
            best: tuple[int, int, int] | None = None
            for v in vs:
                row = g.matrix[v]
                for v2 in sorted(trees[t].vertices):
                    cand = (row[v2], v, v2)
                    if best is None or cand < best:
                        best = cand
            pairs[(s, t)] = best
    tree_of = {v: i for i, tree in enumerate(trees) for v in tree.vertices}
    return ContractedForest(closest_pair=pairs, tree_of=tree_of)


def leftover_trees(forest: Forest, slots: list[Slot], anchors: Sequence[int]) -> list[int]:
    """Trees the limbs reach through single anchors only (or not at all)
    while still holding a vertex that is no anchor; these must be picked
    up by some two-anchor gap's connector."""
    anchor_set = set(anchors)
    single_anchors = {a for slot, a in zip(slots, anchors) if slot.kind == "single"}
    return [
        t_idx
        for t_idx, tree in enumerate(forest.trees)
        if (tree.vertices & anchor_set) <= single_anchors
        and (tree.vertices - anchor_set)
    ]


def gap_anchor_trees(
    slots: list[Slot], anchors: Sequence[int], contracted: ContractedForest
) -> dict[int, tuple[int, int]]:
    """Per two-anchor gap: the trees holding its out and in anchors."""
    halves: dict[int, list[int]] = {}
    for slot, anchor in zip(slots, anchors):
        if slot.kind == "pair_out":
            halves.setdefault(slot.gap, [-1, -1])[0] = contracted.tree_of[anchor]
        elif slot.kind == "pair_in":
            halves.setdefault(slot.gap, [-1, -1])[1] = contracted.tree_of[anchor]
    return {gap: (out, into) for gap, (out, into) in halves.items()}


def realize_connector(
    contracted: ContractedForest,
    gap_trees: dict[int, tuple[int, int]],
    leftover: Sequence[int],
    assignment: Sequence[int],
    hk_cap: int = 20,
    should_prune: Callable[[int], bool] | None = None,
) -> ConnectGuess | None:
    """Cheapest connector edges realizing one leftover-to-gap assignment.

    Per two-anchor gap this takes an exact minimum tour (both gap anchors
    in one tree) or path (two trees) over the assigned trees plus the
    anchor trees in the contracted graph and maps each hop back to its
    cheapest concrete vertex pair.  Returns None when pruned.
    """
    edges: list[Edge] = []
    total = 0
    for gap in sorted(gap_trees):
        t_out, t_in = gap_trees[gap]
        nodes = {t for t, a in zip(leftover, assignment) if a == gap}
        nodes.add(t_out)
        nodes.add(t_in)
        node_list = sorted(nodes)
        if t_out == t_in:
            if len(node_list) == 1:
                continue
            tour = _hk_tour(node_list, contracted.weight, hk_cap)
            hops = list(zip(tour.order, tour.order[1:])) + [
                (tour.order[-1], tour.order[0])
            ]
        else:
            path, _ = _hk_path(node_list, contracted.weight, t_out, t_in, hk_cap)
            hops = list(zip(path, path[1:]))
        for s, t in hops:
            e = contracted.realize(s, t)
            edges.append(e)
            total += e[2]
        if should_prune is not None and should_prune(total):
            return None
    return ConnectGuess(assignment=tuple(assignment), edges=tuple(edges), weight=total)


def connect_guesses(
    guess: OrderedChainGuess,
    limb: LimbGuess,
    forest: Forest,
    contracted: ContractedForest,
    hk_cap: int = 20,
    should_prune: Callable[[int], bool] | None = None,
) -> Iterator[ConnectGuess]:
    """Connector edge sets for every assignment of leftover trees to gaps."""
    slots = slots_of(guess)
    leftover = leftover_trees(forest, slots, limb.anchors)
    gap_trees = gap_anchor_trees(slots, limb.anchors, contracted)
    two_anchor_gaps = sorted(gap_trees)
    if leftover and not two_anchor_gaps:
        return
    assignments = (
        itertools.product(two_anchor_gaps, repeat=len(leftover)) if leftover else [()]
    )
    for assignment in assignments:
        out = realize_connector(
            contracted, gap_trees, leftover, assignment, hk_cap, should_prune
        )
        if out is not None:
            yield out


def assemble_structure(
    g: WeightedGraph,
    guess: OrderedChainGuess,
    limb: LimbGuess,
    connect: ConnectGuess,
    forest: Forest,
) -> MultiEdgeSet:
    """Chains plus limbs plus connectors plus forest, as one multigraph."""
    mg = MultiEdgeSet()
    for u, v, w in guess.chain_edges(g):
        mg.add(u, v, w)
    for u, v, w in limb.edges:
        mg.add(u, v, w)
    for u, v, w in connect.edges:
        mg.add(u, v, w)
    for u, v, w in forest.all_edges():
        mg.add(u, v, w)
    return mg


def tree_parity_matchings(
    g: WeightedGraph, structure: MultiEdgeSet, forest: Forest
) -> list[Matching]:
    """Per-tree minimum matchings on the odd-degree vertices.

    Odd vertices must all be good and split evenly across trees; within a
    tree the matching weight never beats the tree (the good side is
    metric), which the approximation bound leans on.
    """
    odd = set(structure.odd_vertices())
    if odd - forest.vertices():
        raise InvariantViolation("odd degree outside the good forest")
    matchings: list[Matching] = []
    for tree in forest.trees:
        members = sorted(odd & tree.vertices)
        if len(members) % 2 == 1:
            raise ParityViolated("tree holds an odd number of odd-degree vertices")
        matching = min_weight_perfect_matching(members, g.w)
        if matching.total_weight > tree.weight:
            raise InvariantViolation("tree matching outweighs its tree")
        matchings.append(matching)
    return matchings


def shortcut_alg4(
    g: WeightedGraph,
    guess: OrderedChainGuess,
    limb: LimbGuess,
    connect: ConnectGuess,
    forest: Forest,
    matchings: list[Matching],
) -> Tour:
    """Eulerian multigraph to Hamiltonian tour, respecting bad triangles.

    Single anchors are first made degree-two: a tree consisting solely of
    single anchors is stripped of its tree and matching edges (its anchors
    then behave like bad vertices); otherwise each single anchor's two
    limb edges move to a fresh stand-in vertex.  In the Eulerian walk of
    the result every repeated vertex is good with good flanks except at
    most one occurrence, so all splices happen inside the metric good
    side.  Stand-ins are merged back at the end by splicing the original's
    good-flanked occurrence.
    """
    slots = slots_of(guess)
    bad = set(guess.vertices())
    single_limb_ends: dict[int, tuple[int, int]] = {}
    for slot, anchor in zip(slots, limb.anchors):
        if slot.kind == "single":
            single_limb_ends[anchor] = (slot.y, slot.z)

    mg = assemble_structure(g, guess, limb, connect, forest)
    for matching in matchings:
        for u, v, w in matching:
            mg.add(u, v, w)
    budget = mg.total_weight

    marked: set[int] = set()
    copies: dict[int, int] = {}
    next_id = g.n
    connector_touch = {v for u, v, _ in connect.edges} | {u for u, v, _ in connect.edges}
    for t_idx, tree in enumerate(forest.trees):
        singles_here = sorted(v for v in tree.vertices if v in single_limb_ends)
        if not singles_here:
            continue
        if len(singles_here) == len(tree.vertices):
            if tree.vertices & connector_touch:
                raise InvariantViolation("connector edge reaches an all-anchor tree")
            for u, v, _ in tree.edges:
                mg.remove(u, v)
            for u, v, _ in matchings[t_idx]:
                mg.remove(u, v)
            marked.update(singles_here)
        else:
            for x in singles_here:
                y, z = single_limb_ends[x]
                stand_in = next_id
                next_id += 1
                copies[stand_in] = x
                mg.remove(x, y)
                mg.add(stand_in, y, g.w(x, y))
                if y == z:
                    mg.remove(x, y)
                    mg.add(stand_in, y, g.w(x, y))
                else:
                    mg.remove(x, z)
                    mg.add(stand_in, z, g.w(x, z))

    bad_like = bad | marked | set(copies)

    degrees = mg.degrees()
    if any(degrees.get(v, 0) != 2 for v in bad_like):
        raise StructureViolated("a bad-side vertex is not degree two")
    if any(d % 2 for d in degrees.values()):
        raise StructureViolated("odd degree after parity fix")
    expected = set(range(g.n)) | set(copies)
    if set(degrees) != expected:
        raise StructureViolated("structure does not span all vertices")
    if not mg.is_connected():
        raise StructureViolated("structure is disconnected")

    def resolve(v: int) -> int:
        return copies.get(v, v)

    def rw(a: int, b: int) -> int:
        return g.w(resolve(a), resolve(b))

    def remove_pos(walk: list[int], pos: int, context: str) -> list[int]:
        n = len(walk)
        prev, cur, nxt = walk[(pos - 1) % n], walk[pos], walk[(pos + 1) % n]
        delta = rw(prev, nxt) - rw(prev, cur) - rw(cur, nxt)
        safety.check_weight_nonincrease(delta, 0, context)
        out = walk[:pos] + walk[pos + 1 :]
        m = len(out)
        if m >= 2:
            j = pos % m
            if out[j] == out[j - 1]:
                out = out[:j] + out[j + 1 :] if j > 0 else out[1:]
        return out

    walk = list(eulerian_tour(mg).order)

    changed = True
    while changed:
        changed = False
        counts = Counter(walk)
        for v in sorted(x for x in counts if counts[x] > 1):
            if v in bad_like:
                raise InvariantViolation("degree-two vertex appears twice in the walk")
            positions = [i for i, x in enumerate(walk) if x == v]

            def flank_bad(pos: int) -> int:
                prev = walk[(pos - 1) % len(walk)]
                nxt = walk[(pos + 1) % len(walk)]
                return (prev in bad_like) + (nxt in bad_like)

            anchored = [pos for pos in positions if flank_bad(pos) > 0]
            if len(anchored) > 1:
                raise InvariantViolation("good vertex touches two bad-side edges")
            keep = anchored[0] if anchored else positions[0]
            drop = next(p for p in positions if p != keep)
            if flank_bad(drop) > 0:
                raise InvariantViolation("cannot splice next to the bad side")
            walk = remove_pos(walk, drop, "shortcut_alg4 good dedup")
            changed = True
            break

    for stand_in in sorted(copies):
        original = copies[stand_in]
        pos = walk.index(original)
        prev = walk[(pos - 1) % len(walk)]
        nxt = walk[(pos + 1) % len(walk)]
        if prev in bad_like or nxt in bad_like:
            raise InvariantViolation("original anchor is not flanked by good vertices")
        walk = remove_pos(walk, pos, "shortcut_alg4 stand-in merge")
        walk[walk.index(stand_in)] = original

    weight = g.tour_weight(walk)
    safety.check_weight_nonincrease(weight, budget, "shortcut_alg4 total")
    safety.check_hamiltonian(walk, g.n, "shortcut_alg4")
    return Tour.canonical(walk, weight)


def alg4(
    g: WeightedGraph,
    partition: VertexPartition | None = None,
    chain_cap: int = ORDERED_CHAIN_CAP,
    hk_cap: int = 20,
) -> SolveReport:
    """Best tour over all ordered chain, anchor, and connector guesses.

    The enumeration always contains a guess consistent with an optimal
    tour, and that guess assembles into a structure weighing at most three
    times the optimum, so the returned tour does too.  Branches whose
    partial weight already exceeds the best finished tour are pruned,
    which cannot break the bound.
    """
    t0 = time.perf_counter()
    if partition is None:
        partition = min_violating_set(g)
    if partition.kind != "byQ":
        raise ValueError("alg4 expects a byQ partition")
    p = bad_vertices_p(g).size
    q = partition.size
    evaluated = 0
    skipped = 0
    if q == 0:
        best = christofides(g)
        evaluated = 1
    elif not partition.good:
        best = held_karp_tour(g, cap=hk_cap)
        evaluated = 1
    else:
        good = sorted(partition.good)
        forests: dict[int, Forest] = {}
        contracts: dict[int, ContractedForest] = {}
        best: Tour | None = None
        for guess in enumerate_ordered_chains(sorted(partition.bad), cap=chain_cap):
            m = len(guess.chains)
            if m > len(good):
                skipped += 1
                continue
            if m not in forests:
                forests[m] = spanning_t_forest(good, g.w, m)
                contracts[m] = contract_forest(g, forests[m])
            forest = forests[m]
            contracted = contracts[m]
            base = guess.chain_weight(g) + forest.total_weight

            def over_budget(extra: int) -> bool:
                return best is not None and base + extra >= best.weight

            if over_budget(0):
                skipped += 1
                continue
            for limb in limb_guesses(g, guess, forest, q, should_prune=over_budget):

                def over_budget_connect(extra: int) -> bool:
                    return over_budget(limb.weight + extra)

                for connect in connect_guesses(
                    guess,
                    limb,
                    forest,
                    contracted,
                    hk_cap=hk_cap,
                    should_prune=over_budget_connect,
                ):
                    structure = assemble_structure(g, guess, limb, connect, forest)
                    expected = set(range(g.n))
                    if set(structure.degrees()) != expected or not structure.is_connected():
                        skipped += 1
                        continue
                    try:
                        matchings = tree_parity_matchings(g, structure, forest)
                        tour = shortcut_alg4(g, guess, limb, connect, forest, matchings)
                    except (ParityViolated, StructureViolated):
                        skipped += 1
                        continue
                    evaluated += 1
                    if best is None or (tour.weight, tour.order) < (best.weight, best.order):
                        best = tour
        if best is None:
            raise InvariantViolation("all ordered chain guesses failed")
    wall_ms = int((time.perf_counter() - t0) * 1000)
    return SolveReport(
        algorithm="alg4",
        tour=list(best.order),
        weight=best.weight,
        opt=None,
        ratio=None,
        p=p,
        q=q,
        guesses_evaluated=evaluated,
        guesses_skipped=skipped,
        wall_time_ms=wall_ms,
    )
