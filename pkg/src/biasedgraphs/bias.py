"""Biased graphs: theta-property validation, minors, isomorphism testing,
and antichain verification by exhaustive minor search at desk scale."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, permutations

from .errors import ResourceLimitError, UnbalancedLoopContractionError
from .graphs import (
    Multigraph,
    edge_set_degrees,
    is_cycle_edge_set,
    vertex_key,
)

DEFAULT_MINOR_NODE_CAP = 2_000_000


def _cycle_key(c):
    return (len(c), sorted(c))


@dataclass(frozen=True)
class BiasedGraph:
    """A multigraph plus its set of balanced cycles (edge-id sets)."""

    graph: Multigraph
    balanced: frozenset

    @classmethod
    def build(cls, graph: Multigraph, balanced, check: bool = True) -> "BiasedGraph":
        bal = frozenset(frozenset(c) for c in balanced)
        B = cls(graph, bal)
        if check:
            for c in bal:
                if not is_cycle_edge_set(graph, c):
                    raise ValueError(f"balanced set member {sorted(c)} is not a cycle")
            witness = validate_theta(B)
            if witness is not None:
                raise ValueError(f"theta property violated: {witness}")
        return B

    def is_balanced(self, cycle) -> bool:
        return frozenset(cycle) in self.balanced


@dataclass(frozen=True)
class ThetaViolation:
    """A theta subgraph with exactly two balanced constituent cycles."""

    cycles: tuple          # the three constituent cycles, balanced pair first
    balanced_count: int    # always 2

    def __str__(self):
        a, b, c = (sorted(x) for x in self.cycles)
        return f"theta with balanced {a} and {b} but unbalanced {c}"


def validate_theta(B: BiasedGraph) -> ThetaViolation | None:
    """None iff every theta subgraph has 0, 1 or 3 balanced cycles.

    A violating theta is the union of two balanced cycles meeting in a single
    nonempty path whose third cycle is unbalanced, so scanning balanced pairs
    finds a witness without enumerating thetas: the union of two distinct
    cycles sharing an edge is a theta exactly when its degree census is two
    3s and the rest 2s.
    """
    bal = sorted(B.balanced, key=_cycle_key)
    for c1, c2 in combinations(bal, 2):
        if not c1 & c2:
            continue
        degs = edge_set_degrees(B.graph, c1 | c2)
        census = Counter(degs.values())
        if census.get(3, 0) != 2 or census.get(2, 0) != len(degs) - 2:
            continue
        third = c1 ^ c2
        if third not in B.balanced:
            return ThetaViolation((c1, c2, third), 2)
    return None


def _delete_edge_raw(B: BiasedGraph, eid: int) -> BiasedGraph:
    g = B.graph.delete_edges({eid})
    return BiasedGraph(g, frozenset(c for c in B.balanced if eid not in c))


def _contract_edge_raw(B: BiasedGraph, eid: int) -> BiasedGraph:
    tail, head = B.graph.endpoints(eid)
    if tail == head:
        if frozenset((eid,)) not in B.balanced:
            raise UnbalancedLoopContractionError(
                f"edge {eid} is an unbalanced loop; its contraction is undefined here")
        return _delete_edge_raw(B, eid)
    g, _ = B.graph.contract(eid)
    bal = set()
    for c in B.balanced:
        if eid in c:
            rest = c - {eid}
            if rest:
                bal.add(rest)
        elif is_cycle_edge_set(g, c):
            bal.add(c)
    return BiasedGraph(g, frozenset(bal))


def delete_edge(B: BiasedGraph, eid: int) -> BiasedGraph:
    """Delete an edge; balanced cycles through it disappear."""
    out = _delete_edge_raw(B, eid)
    assert validate_theta(out) is None
    return out


def contract_edge(B: BiasedGraph, eid: int) -> BiasedGraph:
    """Contract an edge; a balanced loop contracts as a deletion.

    A cycle of the contraction is balanced iff it was balanced or becomes a
    balanced cycle once the contracted edge is added back.
    """
    out = _contract_edge_raw(B, eid)
    assert validate_theta(out) is None
    return out


@dataclass(frozen=True)
class BiasedIsomorphism:
    vertex_map: tuple  # ((v of A, v of B), ...)
    edge_map: tuple    # ((e of A, e of B), ...)

    def vertices(self) -> dict:
        return dict(self.vertex_map)

    def edges(self) -> dict:
        return dict(self.edge_map)


def _loop_count(G: Multigraph, v) -> int:
    return sum(1 for e in G.incident(v) if G.is_loop(e))


def _parallel_classes(G: Multigraph) -> dict:
    classes = {}
    for eid, t, h in G.edges:
        pair = (t, h) if vertex_key(t) <= vertex_key(h) else (h, t)
        classes.setdefault(pair, []).append(eid)
    return classes


def _balance_degree(B: BiasedGraph) -> dict:
    deg = {e: 0 for e in B.graph.edge_ids}
    for c in B.balanced:
        for e in c:
            deg[e] += 1
    return deg


def _cobalance(B: BiasedGraph) -> dict:
    table = {e: Counter() for e in B.graph.edge_ids}
    for c in B.balanced:
        for e in c:
            for f in c:
                if e != f:
                    table[e][f] += 1
    return table


def isomorphic(A: BiasedGraph, B: BiasedGraph) -> BiasedIsomorphism | None:
    """A bijection preserving incidence and mapping balanced sets onto each
    other, or None.  Backtracks over vertices, then over edges with
    balance-degree and pairwise co-balance pruning."""
    GA, GB = A.graph, B.graph
    if len(GA.vertices) != len(GB.vertices) or len(GA.edges) != len(GB.edges):
        return None
    if len(A.balanced) != len(B.balanced):
        return None
    if sorted(len(c) for c in A.balanced) != sorted(len(c) for c in B.balanced):
        return None
    if sorted(GA.degree(v) for v in GA.vertices) != sorted(GB.degree(v) for v in GB.vertices):
        return None
    bdeg_a, bdeg_b = _balance_degree(A), _balance_degree(B)
    if sorted(bdeg_a.values()) != sorted(bdeg_b.values()):
        return None
    cob_a, cob_b = _cobalance(A), _cobalance(B)

    def vertex_sig(G, bg, v):
        classes = sorted(
            len([e for e in G.incident(v) if not G.is_loop(e) and G.other_end(e, v) == w])
            for w in G.vertices if w != v
        )
        return (G.degree(v), _loop_count(G, v), tuple(classes))

    sig_b = {}
    for w in GB.vertices:
        sig_b.setdefault(vertex_sig(GB, B, w), []).append(w)

    verts_a = sorted(GA.vertices, key=lambda v: (-GA.degree(v), vertex_key(v)))
    edges_a = sorted(GA.edge_ids, key=lambda e: (-bdeg_a[e], e))

    def class_size(G, u, v):
        if u == v:
            return sum(1 for e in G.incident(u) if G.is_loop(e))
        return sum(1 for e in G.incident(u) if not G.is_loop(e) and G.other_end(e, u) == v)

    def match_edges(vmap):
        emap = {}
        used = set()
        bal_b = B.balanced

        def extend(i):
            if i == len(edges_a):
                image = frozenset(frozenset(emap[e] for e in c) for c in A.balanced)
                return image == bal_b
            e = edges_a[i]
            t, h = GA.endpoints(e)
            want = {vmap[t], vmap[h]}
            for f in GB.edge_ids:
                if f in used or bdeg_b[f] != bdeg_a[e]:
                    continue
                tf, hf = GB.endpoints(f)
                if {tf, hf} != want:
                    continue
                if any(cob_a[e][e2] != cob_b[f][f2] for e2, f2 in emap.items()):
                    continue
                emap[e] = f
                used.add(f)
                if extend(i + 1):
                    return True
                del emap[e]
                used.discard(f)
            return False

        if extend(0):
            return emap
        return None

    def assign(i, vmap, used):
        if i == len(verts_a):
            emap = match_edges(vmap)
            if emap is not None:
                return BiasedIsomorphism(
                    tuple(sorted(vmap.items(), key=lambda kv: vertex_key(kv[0]))),
                    tuple(sorted(emap.items())))
            return None
        v = verts_a[i]
        for w in sig_b.get(vertex_sig(GA, A, v), []):
            if w in used:
                continue
            if any(class_size(GA, v, u) != class_size(GB, w, x) for u, x in vmap.items()):
                continue
            if class_size(GA, v, v) != class_size(GB, w, w):
                continue
            vmap[v] = w
            used.add(w)
            out = assign(i + 1, vmap, used)
            if out is not None:
                return out
            del vmap[v]
            used.discard(w)
        return None

    return assign(0, {}, set())


@dataclass(frozen=True)
class MinorWitness:
    """A replayable witness that H is a minor of G."""

    operations: tuple          # (("delete"|"contract", edge id), ...) in order
    isomorphism: BiasedIsomorphism

    @property
    def deletions(self) -> frozenset:
        return frozenset(e for kind, e in self.operations if kind == "delete")

    @property
    def contractions(self) -> tuple:
        return tuple(e for kind, e in self.operations if kind == "contract")


def apply_minor_operations(G: BiasedGraph, operations) -> BiasedGraph:
    out = G
    for kind, eid in operations:
        if kind == "delete":
            out = _delete_edge_raw(out, eid)
        elif kind == "contract":
            out = _contract_edge_raw(out, eid)
        else:
            raise ValueError(f"unknown minor operation {kind!r}")
    return out


def is_minor(H: BiasedGraph, G: BiasedGraph, *,
             node_cap: int = DEFAULT_MINOR_NODE_CAP) -> MinorWitness | None:
    """Exhaustive search for H as a minor of G; absence is a proof here.

    Minor operations on distinct edges commute, so each candidate is visited
    once by scanning edges in ascending id order and choosing skip, delete or
    contract per edge.  Unbalanced loops are never contracted; contracting a
    balanced loop equals deleting it, so the contract branch only covers
    non-loops.  Pruning uses the vertex/edge budgets and the fact that the
    number of balanced cycles never grows under minor operations.
    """
    target_e = len(H.graph.edges)
    target_v = len(H.graph.vertices)
    target_b = len(H.balanced)
    edges = list(G.graph.edge_ids)
    nodes = 0

    def search(i, current: BiasedGraph, ops):
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise ResourceLimitError(f"minor search exceeded {node_cap} nodes")
        cur_e = len(current.graph.edges)
        cur_v = len(current.graph.vertices)
        need = cur_e - target_e
        if need < 0 or cur_v < target_v or cur_v - target_v > need:
            return None
        if len(current.balanced) < target_b:
            return None
        if need == 0:
            if cur_v != target_v:
                return None
            iso = isomorphic(current, H)
            if iso is not None:
                return MinorWitness(tuple(ops), iso)
            return None
        if i == len(edges) or len(edges) - i < need:
            return None
        eid = edges[i]
        # delete
        ops.append(("delete", eid))
        out = search(i + 1, _delete_edge_raw(current, eid), ops)
        if out is not None:
            return out
        ops.pop()
        # contract (non-loops only; balanced loops equal deletion)
        tail, head = current.graph.endpoints(eid)
        if tail != head:
            ops.append(("contract", eid))
            out = search(i + 1, _contract_edge_raw(current, eid), ops)
            if out is not None:
                return out
            ops.pop()
        # skip
        return search(i + 1, current, ops)

    witness = search(0, G, [])
    if witness is None:
        return None
    replayed = apply_minor_operations(G, witness.operations)
    check = isomorphic(replayed, H)
    assert check is not None, "witness replay failed"
    return witness


def verify_antichain(family) -> tuple | None:
    """None when no member is a minor of another; otherwise (i, j, witness)
    meaning family[i] is a minor of family[j]."""
    family = list(family)
    for i, h in enumerate(family):
        for j, g in enumerate(family):
            if i == j:
                continue
            witness = is_minor(h, g)
            if witness is not None:
                return (i, j, witness)
    return None
