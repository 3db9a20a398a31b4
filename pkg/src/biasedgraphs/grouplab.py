"""Free-group words, edge labellings and their induced balanced sets, the
spanning-tree presentation of the cycle structure, and the explicit
labellings for doubled cycles and for single-edge minors of the identified
planar constructions.

All labellings take values in a free group of finite rank: free generators
have no short coincidences, which is exactly what the constructions need,
and the word problem is plain reduction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bias import BiasedGraph, _contract_edge_raw
from .errors import (
    DisconnectedGraphError,
    HostMismatchError,
    NotSpanningTreeError,
)
from .graphs import (
    ClosedWalk,
    Multigraph,
    PlaneGraph,
    cycle_walk,
    enumerate_cycles,
    face_key,
    vertex_key,
    walk_vertices,
)


@dataclass(frozen=True)
class FreeWord:
    """A reduced word over free generators g_0, g_1, ...

    Letters are (generator index, sign) pairs with no adjacent cancelling
    pair; the empty word is the identity.
    """

    letters: tuple

    def __post_init__(self):
        for k, s in self.letters:
            if s not in (1, -1) or k < 0:
                raise ValueError(f"bad letter ({k}, {s})")
        for a, b in zip(self.letters, self.letters[1:]):
            if a[0] == b[0] and a[1] == -b[1]:
                raise ValueError("word is not reduced")

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return reduce_word(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((k, -s) for k, s in reversed(self.letters)))

    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return len(self.letters)


IDENTITY = FreeWord(())


def generator(k: int, sign: int = 1) -> FreeWord:
    return FreeWord(((k, sign),))


def reduce_word(letters) -> FreeWord:
    """The unique reduced word equal to the letter sequence in the free group."""
    stack = []
    for k, s in letters:
        if s not in (1, -1) or k < 0:
            raise ValueError(f"bad letter ({k}, {s})")
        if stack and stack[-1][0] == k and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((k, s))
    return FreeWord(tuple(stack))


@dataclass(frozen=True)
class GroupLabelling:
    """A free-group word per edge, taken with the edge's reference orientation."""

    host: Multigraph
    values: tuple  # ((edge id, FreeWord), ...) sorted by edge id

    def __post_init__(self):
        ids = tuple(e for e, _ in self.values)
        if ids != self.host.edge_ids:
            raise ValueError("labelling must cover every host edge exactly once")
        object.__setattr__(self, "_value", dict(self.values))

    @classmethod
    def build(cls, host: Multigraph, mapping) -> "GroupLabelling":
        vals = tuple(sorted(dict(mapping).items()))
        return cls(host, vals)

    def value(self, eid: int) -> FreeWord:
        return self._value[eid]


def walk_value(lab: GroupLabelling, walk: ClosedWalk) -> FreeWord:
    """Product of edge values along the walk, inverted on backward steps."""
    for eid, _ in walk.steps:
        if not lab.host.has_edge(eid):
            raise HostMismatchError(f"walk uses edge {eid} outside the labelled host")
    walk_vertices(lab.host, walk)
    letters = []
    for eid, direction in walk.steps:
        w = lab.value(eid)
        letters.extend(w.letters if direction == 1 else w.inverse().letters)
    return reduce_word(letters)


def balanced_set(lab: GroupLabelling) -> frozenset:
    """Cycles whose simple closed walk has identity value (traversal-independent)."""
    out = set()
    for cycle in enumerate_cycles(lab.host):
        if walk_value(lab, cycle_walk(lab.host, cycle)).is_identity():
            out.add(cycle)
    return frozenset(out)


def realizes(lab: GroupLabelling, B: BiasedGraph) -> bool:
    """True iff the labelling induces exactly B's balanced set."""
    if lab.host != B.graph:
        raise HostMismatchError("labelling host differs from the biased graph")
    return balanced_set(lab) == B.balanced


@dataclass(frozen=True)
class GroupPresentation:
    """Generators, one per non-tree edge, plus one relator per balanced cycle."""

    generators: tuple  # names
    relators: tuple    # words as ((generator index, sign), ...)

    def __post_init__(self):
        n = len(self.generators)
        for rel in self.relators:
            for k, s in rel:
                if not (0 <= k < n) or s not in (1, -1):
                    raise ValueError("relator mentions an undeclared generator")


def _check_spanning_tree(G: Multigraph, tree: frozenset) -> None:
    if not G.connected():
        raise DisconnectedGraphError("presentation requires a connected graph")
    for eid in tree:
        G.endpoints(eid)
    if len(tree) != len(G.vertices) - 1:
        raise NotSpanningTreeError(f"{len(tree)} edges cannot span {len(G.vertices)} vertices")
    seen = {min(G.vertices, key=vertex_key)}
    stack = list(seen)
    while stack:
        v = stack.pop()
        for eid in G.incident(v):
            if eid not in tree or G.is_loop(eid):
                continue
            w = G.other_end(eid, v)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(G.vertices):
        raise NotSpanningTreeError("edge set does not span the graph")


def presentation(B: BiasedGraph, tree) -> GroupPresentation:
    """Presentation with a generator per non-tree edge and a relator per
    balanced cycle, read off the cycle's walk with tree edges dropped."""
    tree = frozenset(tree)
    _check_spanning_tree(B.graph, tree)
    nontree = [e for e in B.graph.edge_ids if e not in tree]
    index = {e: i for i, e in enumerate(nontree)}
    relators = []
    for c in sorted(B.balanced, key=lambda c: (len(c), sorted(c))):
        walk = cycle_walk(B.graph, c)
        relators.append(tuple((index[e], d) for e, d in walk.steps if e not in tree))
    return GroupPresentation(tuple(f"e{e}" for e in nontree), tuple(relators))


def presentation_labelling(B: BiasedGraph, tree) -> tuple:
    """(labelling, presentation): tree edges map to the identity and each
    non-tree edge to its own generator, valued in the free group on the
    presentation's generators.  The relators are reported, not applied; the
    word problem of the presented group is never solved here."""
    pres = presentation(B, tree)
    tree = frozenset(tree)
    nontree = [e for e in B.graph.edge_ids if e not in tree]
    index = {e: i for i, e in enumerate(nontree)}
    mapping = {
        e: (IDENTITY if e in tree else generator(index[e])) for e in B.graph.edge_ids
    }
    return GroupLabelling.build(B.graph, mapping), pres


def doubled_cycle_labelling(n: int) -> GroupLabelling:
    """Labelling realizing the doubled cycle's two balanced cycles.

    The first cycle gets identity labels; the second gets fresh generators
    g_1 .. g_{n-1} with the closing edge labelled g_{n-1}^-1 ... g_1^-1 so
    the directed product around it telescopes to the identity.
    """
    from .constructions import doubled_cycle

    B = doubled_cycle(n)
    mapping = {}
    for i in range(n):
        mapping[i] = IDENTITY
    for i in range(n - 1):
        mapping[n + i] = generator(i + 1)
    mapping[2 * n - 1] = FreeWord(tuple((k, -1) for k in range(n - 1, 0, -1)))
    return GroupLabelling.build(B.graph, mapping)


def _colour_map(P: PlaneGraph) -> dict:
    colours = P.colouring
    missing = set(P.graph.vertices) - set(colours)
    if missing:
        raise ValueError(f"vertices without colour: {sorted(missing, key=vertex_key)}")
    return colours


def telescoping_labelling(P: PlaneGraph) -> GroupLabelling:
    """Labelling of the identified graph by g_tail^-1 g_head over per-vertex
    generators of the plane graph; every facial boundary telescopes to the
    identity, and any other cycle keeps an uncancelled highest generator."""
    from .constructions import identified_graph

    idx = {v: i for i, v in enumerate(sorted(P.graph.vertices, key=vertex_key))}
    host = identified_graph(P)
    mapping = {}
    for eid, t, h in P.graph.edges:
        mapping[eid] = reduce_word(((idx[t], -1), (idx[h], 1)))
    return GroupLabelling.build(host, mapping)


def minor_subgraph_faces(P: PlaneGraph, eid: int) -> tuple:
    """Finite facial walks of P whose boundary contains the edge (1 or 2)."""
    P.graph.endpoints(eid)
    return tuple(w for w in P.finite_faces() if eid in w.edge_set())


def contraction_labelling(P: PlaneGraph, eid: int) -> GroupLabelling:
    """Labelling realizing the identified biased graph with ``eid`` contracted.

    Let H be the union of the finite face boundaries through the edge (a
    cycle when the edge lies on the outer face, otherwise a theta).  Edges of
    H/e are labelled g_i^-1 g_j over the contracted subgraph's vertices; all
    other edges get one fresh generator each with higher index.
    """
    from .constructions import identified_graph

    G = P.graph
    tail, head = G.endpoints(eid)
    h_faces = minor_subgraph_faces(P, eid)
    h_edges = set()
    h_vertices = set()
    for w in h_faces:
        h_edges |= w.edge_set()
        h_vertices.update(walk_vertices(G, w))
    keep, drop = sorted((tail, head), key=vertex_key)
    merged_vertices = sorted((h_vertices - {drop}), key=vertex_key)
    idx = {v: i for i, v in enumerate(merged_vertices)}
    outside = sorted(e for e, _, _ in G.edges if e not in h_edges)
    out_index = {e: len(merged_vertices) + i for i, e in enumerate(outside)}

    def merged(v):
        return keep if v == drop else v

    mapping = {}
    for e, t, h in G.edges:
        if e == eid:
            continue
        if e in h_edges:
            mapping[e] = reduce_word(((idx[merged(t)], -1), (idx[merged(h)], 1)))
        else:
            mapping[e] = generator(out_index[e])
    host, _ = identified_graph(P).contract(eid)
    return GroupLabelling.build(host, mapping)


def _face_with_edges(walks, target: frozenset):
    for w in walks:
        if target <= w.edge_set():
            return w
    return None


def deletion_labelling(P: PlaneGraph, eid: int) -> GroupLabelling:
    """Labelling realizing the identified biased graph with ``eid`` deleted.

    With the edge on the outer face, g_tail^-1 g_head per edge suffices.  An
    interior deletion merges two faces into a region R; edges crossed by a
    shortest dual path from the outer face to R carry an extra winding
    generator g_0, so any closed walk's value counts its net winding around
    R and face boundaries other than R still telescope.
    """
    from .constructions import identified_graph

    G = P.graph
    G.endpoints(eid)
    idx = {v: i for i, v in enumerate(sorted(G.vertices, key=vertex_key))}
    host = identified_graph(P).delete_edges({eid})
    outer_edges = P.outer_face().edge_set()

    if eid in outer_edges:
        mapping = {
            e: reduce_word(((idx[t], -1), (idx[h], 1)))
            for e, t, h in G.edges if e != eid
        }
        return GroupLabelling.build(host, mapping)

    deleted = P.delete_edge(eid)
    walks = deleted.faces()
    keys = [face_key(w) for w in walks]
    old_faces = minor_subgraph_faces(P, eid)
    assert len(old_faces) == 2
    merged_target = (old_faces[0].edge_set() | old_faces[1].edge_set()) - {eid}
    region = _face_with_edges(walks, merged_target)
    assert region is not None, "merged face not found"
    region_key = face_key(region)
    outer_key = deleted.outer

    # dual graph on face keys; BFS gives a shortest dual path, ties broken
    # by exploring faces in canonical key order
    edge_faces = {}
    for w in walks:
        k = face_key(w)
        for e in w.edge_set():
            edge_faces.setdefault(e, []).append(k)
    neighbours = {k: [] for k in keys}
    for e, ks in sorted(edge_faces.items()):
        if len(ks) == 2 and ks[0] != ks[1]:
            neighbours[ks[0]].append((ks[1], e))
            neighbours[ks[1]].append((ks[0], e))
    parent = {outer_key: None}
    frontier = [outer_key]
    while frontier and region_key not in parent:
        nxt = []
        for k in frontier:
            for k2, e in sorted(neighbours[k]):
                if k2 not in parent:
                    parent[k2] = (k, e)
                    nxt.append(k2)
        frontier = nxt
    assert region_key in parent, "dual graph is disconnected"
    crossings = []  # (crossing edge, face entered)
    k = region_key
    while parent[k] is not None:
        prev, e = parent[k]
        crossings.append((e, k))
        k = prev
    crossings.reverse()

    by_key = {face_key(w): w for w in walks}
    winding_sign = {}
    for e, entered in crossings:
        # orient the crossing by the dart the entered face uses for e
        dart = next((d for f, d in by_key[entered].steps if f == e))
        winding_sign[e] = dart

    mapping = {}
    for e, t, h in G.edges:
        if e == eid:
            continue
        if e in winding_sign:
            mapping[e] = reduce_word(
                ((idx[t], -1), (0, winding_sign[e]), (idx[h], 1)))
        else:
            mapping[e] = reduce_word(((idx[t], -1), (idx[h], 1)))
    return GroupLabelling.build(host, mapping)
