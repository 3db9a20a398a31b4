"""Multigraphs with stable edge identities, closed walks, exhaustive cycle and
theta enumeration, and plane graphs given by combinatorial rotation systems.

Vertices are ints or strings; edge ids are ints and survive deletion and
contraction unchanged, so cycles can be named by edge-id sets everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import (
    InvalidEmbeddingError,
    InvalidWalkError,
    ResourceLimitError,
    UnknownEdgeError,
)

VertexId = int | str
EdgeId = int

DEFAULT_CYCLE_CAP = 10**6


def vertex_key(v: VertexId):
    """Sort key usable on mixed int/str vertex ids."""
    if isinstance(v, str):
        return (1, 0, v)
    return (0, v, "")


@dataclass(frozen=True)
class Multigraph:
    """Finite multigraph; loops and parallel edges allowed.

    ``edges`` holds (id, tail, head) triples sorted by id; tail/head record
    the reference orientation of each edge.
    """

    vertices: frozenset
    edges: tuple

    def __post_init__(self):
        by_id = {}
        for eid, tail, head in self.edges:
            if eid in by_id:
                raise ValueError(f"duplicate edge id {eid}")
            if tail not in self.vertices or head not in self.vertices:
                raise ValueError(f"edge {eid} has an endpoint outside the vertex set")
            by_id[eid] = (tail, head)
        incidence = {v: [] for v in self.vertices}
        for eid, tail, head in self.edges:
            incidence[tail].append(eid)
            if head != tail:
                incidence[head].append(eid)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_incidence", {v: tuple(sorted(e)) for v, e in incidence.items()})

    @classmethod
    def build(cls, vertices, edges) -> "Multigraph":
        es = tuple(sorted(((eid, t, h) for eid, t, h in edges), key=lambda e: e[0]))
        return cls(frozenset(vertices), es)

    @property
    def edge_ids(self) -> tuple:
        return tuple(e[0] for e in self.edges)

    def endpoints(self, eid: EdgeId) -> tuple:
        try:
            return self._by_id[eid]
        except KeyError:
            raise UnknownEdgeError(f"no edge with id {eid}") from None

    def has_edge(self, eid: EdgeId) -> bool:
        return eid in self._by_id

    def is_loop(self, eid: EdgeId) -> bool:
        t, h = self.endpoints(eid)
        return t == h

    def incident(self, v: VertexId) -> tuple:
        return self._incidence[v]

    def other_end(self, eid: EdgeId, v: VertexId) -> VertexId:
        t, h = self.endpoints(eid)
        return h if v == t else t

    def degree(self, v: VertexId) -> int:
        d = 0
        for eid in self._incidence[v]:
            t, h = self._by_id[eid]
            d += 2 if t == h else 1
        return d

    def delete_edges(self, eids) -> "Multigraph":
        gone = set(eids)
        for eid in gone:
            self.endpoints(eid)
        return Multigraph(self.vertices, tuple(e for e in self.edges if e[0] not in gone))

    def contract(self, eid: EdgeId) -> tuple:
        """Contract a non-loop edge; returns (graph, surviving vertex).

        The surviving vertex is the smaller endpoint; parallel edges of the
        contracted edge become loops and are kept.
        """
        tail, head = self.endpoints(eid)
        if tail == head:
            raise ValueError(f"edge {eid} is a loop; graph contraction undefined")
        keep, drop = sorted((tail, head), key=vertex_key)
        sub = {drop: keep}
        edges = tuple(
            (e, sub.get(t, t), sub.get(h, h)) for e, t, h in self.edges if e != eid
        )
        return Multigraph(self.vertices - {drop}, edges), keep

    def is_simple(self) -> bool:
        seen = set()
        for _, t, h in self.edges:
            if t == h:
                return False
            pair = (t, h) if vertex_key(t) < vertex_key(h) else (h, t)
            if pair in seen:
                return False
            seen.add(pair)
        return True

    def connected(self) -> bool:
        if not self.vertices:
            return True
        start = min(self.vertices, key=vertex_key)
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for eid in self._incidence[v]:
                w = self.other_end(eid, v)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)


@dataclass(frozen=True)
class ClosedWalk:
    """Closed walk as a cyclic sequence of (edge id, direction) steps.

    Direction +1 traverses the edge tail to head, -1 the reverse.
    """

    steps: tuple

    def __len__(self) -> int:
        return len(self.steps)

    def edge_ids(self) -> tuple:
        return tuple(e for e, _ in self.steps)

    def edge_set(self) -> frozenset:
        return frozenset(self.edge_ids())

    def reversed(self) -> "ClosedWalk":
        return ClosedWalk(tuple((e, -d) for e, d in reversed(self.steps)))


def walk_vertices(G: Multigraph, walk: ClosedWalk) -> tuple:
    """Start vertex of each step; raises InvalidWalkError when inconsistent."""
    if not walk.steps:
        raise InvalidWalkError("empty walk")
    seq = []
    for eid, direction in walk.steps:
        if direction not in (1, -1):
            raise InvalidWalkError(f"bad direction flag {direction}")
        t, h = G.endpoints(eid)
        seq.append((t, h) if direction == 1 else (h, t))
    n = len(seq)
    for i in range(n):
        if seq[i][1] != seq[(i + 1) % n][0]:
            raise InvalidWalkError(f"steps {i} and {(i + 1) % n} do not chain")
    return tuple(s[0] for s in seq)


def is_closed_walk(G: Multigraph, walk: ClosedWalk) -> bool:
    try:
        walk_vertices(G, walk)
    except (InvalidWalkError, UnknownEdgeError):
        return False
    return True


def is_simple_closed_walk(G: Multigraph, walk: ClosedWalk) -> bool:
    """True for a closed walk visiting each of its vertices and edges once."""
    try:
        verts = walk_vertices(G, walk)
    except (InvalidWalkError, UnknownEdgeError):
        return False
    ids = walk.edge_ids()
    return len(set(verts)) == len(verts) and len(set(ids)) == len(ids)


def edge_set_degrees(G: Multigraph, edges) -> dict:
    """Degrees of the subgraph induced by an edge set (loops count twice)."""
    deg = {}
    for eid in edges:
        t, h = G.endpoints(eid)
        deg[t] = deg.get(t, 0) + (2 if t == h else 1)
        if t != h:
            deg[h] = deg.get(h, 0) + 1
    return deg


def _edge_set_connected(G: Multigraph, edges) -> bool:
    edges = set(edges)
    if not edges:
        return True
    verts = set()
    for eid in edges:
        verts.update(G.endpoints(eid))
    start = next(iter(verts))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for eid in G.incident(v):
            if eid not in edges:
                continue
            w = G.other_end(eid, v)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == verts


def is_cycle_edge_set(G: Multigraph, edges) -> bool:
    """True when the induced subgraph is connected and 2-regular.

    A loop is a cycle of size 1, a parallel pair a cycle of size 2.
    """
    edges = set(edges)
    if not edges:
        return False
    deg = edge_set_degrees(G, edges)
    if any(d != 2 for d in deg.values()):
        return False
    return _edge_set_connected(G, edges)


def cycle_walk(G: Multigraph, cycle) -> ClosedWalk:
    """Deterministic simple closed walk around a cycle edge set.

    Starts at the smallest edge id traversed forward.
    """
    eids = sorted(cycle)
    first = eids[0]
    tail, head = G.endpoints(first)
    if tail == head:
        return ClosedWalk(((first, 1),))
    incident = {}
    for e in eids:
        t, h = G.endpoints(e)
        incident.setdefault(t, []).append(e)
        incident.setdefault(h, []).append(e)
    steps = [(first, 1)]
    prev, current = first, head
    while current != tail:
        e = next(x for x in sorted(incident[current]) if x != prev)
        t, h = G.endpoints(e)
        steps.append((e, 1) if t == current else (e, -1))
        current = h if t == current else t
        prev = e
    return ClosedWalk(tuple(steps))


def enumerate_cycles(G: Multigraph, max_len: int | None = None,
                     cap: int = DEFAULT_CYCLE_CAP) -> frozenset:
    """All cycles of G as canonical edge-id sets, optionally length-bounded.

    Each cycle is found once, anchored at its minimum edge id: the remaining
    edges all have larger ids, so a simple path search from the anchor's head
    back to its tail over larger ids enumerates without duplicates.  Raises
    ResourceLimitError past ``cap`` cycles.
    """
    if max_len is not None and max_len < 1:
        raise ValueError("max_len must be >= 1")
    cycles = set()

    def record(es):
        cycles.add(frozenset(es))
        if len(cycles) > cap:
            raise ResourceLimitError(f"more than {cap} cycles")

    for eid, t, h in G.edges:
        if t == h:
            record((eid,))

    adjacency = {v: [] for v in G.vertices}
    for eid, t, h in G.edges:
        if t != h:
            adjacency[t].append((eid, h))
            adjacency[h].append((eid, t))
    for v in adjacency:
        adjacency[v].sort()

    for anchor, tail, head in G.edges:
        if tail == head or max_len == 1:
            continue
        path = [anchor]
        visited = {head}

        def extend(current):
            for eid, nxt in adjacency[current]:
                if eid <= anchor:
                    continue
                if nxt == tail:
                    if max_len is None or len(path) + 1 <= max_len:
                        record(path + [eid])
                elif nxt not in visited:
                    if max_len is not None and len(path) + 2 > max_len:
                        continue
                    path.append(eid)
                    visited.add(nxt)
                    extend(nxt)
                    visited.discard(nxt)
                    path.pop()

        extend(head)
    return frozenset(cycles)


@dataclass(frozen=True)
class Theta:
    """Two vertices joined by three internally disjoint paths."""

    ends: tuple   # (x, y) in vertex_key order
    paths: tuple  # three edge-id tuples, each read from x to y

    def cycles(self) -> tuple:
        p, q, r = (frozenset(path) for path in self.paths)
        return (p | q, p | r, q | r)

    def edge_set(self) -> frozenset:
        return frozenset(e for path in self.paths for e in path)


def enumerate_thetas(G: Multigraph, cap: int = DEFAULT_CYCLE_CAP) -> tuple:
    """Every theta subgraph of G exactly once, as its path triple."""
    verts = sorted(G.vertices, key=vertex_key)
    adjacency = {v: [] for v in G.vertices}
    for eid, t, h in G.edges:
        if t != h:
            adjacency[t].append((eid, h))
            adjacency[h].append((eid, t))
    for v in adjacency:
        adjacency[v].sort()

    thetas = []
    for x, y in combinations(verts, 2):
        paths = []  # (edge tuple, frozenset of internal vertices)
        edges_used = set()

        def explore(current, edges, internal):
            for eid, nxt in adjacency[current]:
                if eid in edges_used:
                    continue
                if nxt == y:
                    paths.append((tuple(edges + [eid]), frozenset(internal)))
                    if len(paths) > cap:
                        raise ResourceLimitError(f"more than {cap} paths from {x!r} to {y!r}")
                elif nxt != x and nxt not in internal:
                    edges_used.add(eid)
                    internal.add(nxt)
                    explore(nxt, edges + [eid], internal)
                    internal.discard(nxt)
                    edges_used.discard(eid)

        explore(x, [], set())
        for trio in combinations(sorted(paths), 3):
            if all(not (a[1] & b[1]) for a, b in combinations(trio, 2)):
                thetas.append(Theta((x, y), tuple(p for p, _ in trio)))
                if len(thetas) > cap:
                    raise ResourceLimitError(f"more than {cap} thetas")
    return tuple(thetas)


def suppress_degree_two(G: Multigraph) -> Multigraph:
    """Repeatedly replace the two edges at a degree-2 vertex by one edge.

    A vertex whose degree 2 comes from a single loop is left alone.  New
    edges get fresh ids.
    """
    vertices = set(G.vertices)
    edges = {e: (t, h) for e, t, h in G.edges}
    next_id = max(edges, default=-1) + 1
    changed = True
    while changed:
        changed = False
        for v in sorted(vertices, key=vertex_key):
            slots = [e for e, (t, h) in edges.items() if v in (t, h)]
            deg = sum(2 if edges[e][0] == edges[e][1] else 1 for e in slots)
            if deg != 2 or len(slots) != 2:
                continue
            e1, e2 = sorted(slots)
            u = edges[e1][0] if edges[e1][1] == v else edges[e1][1]
            w = edges[e2][0] if edges[e2][1] == v else edges[e2][1]
            del edges[e1], edges[e2]
            edges[next_id] = (u, w)
            next_id += 1
            vertices.discard(v)
            changed = True
            break
    return Multigraph.build(vertices, ((e, t, h) for e, (t, h) in edges.items()))


def _connected_without(G: Multigraph, removed: set) -> bool:
    rest = [v for v in G.vertices if v not in removed]
    if not rest:
        return True
    start = rest[0]
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for eid in G.incident(v):
            w = G.other_end(eid, v)
            if w in removed or w in seen:
                continue
            seen.add(w)
            stack.append(w)
    return len(seen) == len(rest)


def is_subdivision_of_3connected(G: Multigraph) -> bool:
    """True iff suppressing degree-2 vertices yields a 3-connected graph on
    at least four vertices (exhaustive cut search; desk scale)."""
    if not G.connected():
        raise ValueError("graph must be connected")
    S = suppress_degree_two(G)
    if len(S.vertices) < 4 or not S.connected():
        return False
    verts = sorted(S.vertices, key=vertex_key)
    for v in verts:
        if not _connected_without(S, {v}):
            return False
    for u, v in combinations(verts, 2):
        if not _connected_without(S, {u, v}):
            return False
    return True


def face_key(walk: ClosedWalk) -> tuple:
    """Face identity: lexicographically least rotation of the edge-id sequence."""
    ids = walk.edge_ids()
    return min(tuple(ids[i:] + ids[:i]) for i in range(len(ids)))


def trace_faces(graph: Multigraph, rotations: dict) -> tuple:
    """Facial walks of a rotation system, sorted by canonical key.

    Faces are the orbits of the next-dart permutation: arriving at a vertex
    along an edge, leave along the rotation's successor of that edge.  Raises
    InvalidEmbeddingError when Euler's relation V - E + F = 2 fails.
    """
    succ = {}
    for v, order in rotations.items():
        n = len(order)
        for i, e in enumerate(order):
            succ[(v, e)] = order[(i + 1) % n]
    walks = []
    seen = set()
    for eid, _, _ in graph.edges:
        for direction in (1, -1):
            if (eid, direction) in seen:
                continue
            orbit = []
            dart = (eid, direction)
            while dart not in seen:
                seen.add(dart)
                orbit.append(dart)
                e, d = dart
                t, h = graph.endpoints(e)
                at = h if d == 1 else t
                e2 = succ[(at, e)]
                t2, _ = graph.endpoints(e2)
                dart = (e2, 1 if t2 == at else -1)
            if dart != orbit[0]:
                raise InvalidEmbeddingError("face traversal did not close")
            walks.append(ClosedWalk(tuple(orbit)))
    V = len(graph.vertices)
    E = len(graph.edges)
    if V - E + len(walks) != 2:
        raise InvalidEmbeddingError(f"Euler relation fails: V={V} E={E} F={len(walks)}")
    walks.sort(key=face_key)
    return tuple(walks)


@dataclass(frozen=True)
class PlaneGraph:
    """Plane multigraph: a rotation system plus a designated outer face.

    ``rotations`` lists each vertex's incident edge ids in cyclic order;
    loops are not supported.  ``outer`` is the canonical key (face_key) of
    the unbounded face.  ``colours`` optionally assigns a colour per vertex.
    """

    graph: Multigraph
    rotations: tuple  # ((vertex, (edge ids...)), ...) sorted by vertex
    outer: tuple
    colours: tuple = ()  # ((vertex, colour), ...) sorted by vertex

    def __post_init__(self):
        rot = dict(self.rotations)
        if set(rot) != set(self.graph.vertices):
            raise InvalidEmbeddingError("rotation system must cover every vertex")
        for eid, t, h in self.graph.edges:
            if t == h:
                raise InvalidEmbeddingError("loops are not supported in plane graphs")
        for v, order in self.rotations:
            if tuple(sorted(order)) != self.graph.incident(v):
                raise InvalidEmbeddingError(f"rotation at {v!r} does not list its incident edges")
        for v, _ in self.colours:
            if v not in self.graph.vertices:
                raise InvalidEmbeddingError(f"colour assigned to unknown vertex {v!r}")
        object.__setattr__(self, "_rot", rot)
        object.__setattr__(self, "_face_cache", None)

    @classmethod
    def build(cls, graph, rotations, outer, colours=None) -> "PlaneGraph":
        rot = tuple(sorted(((v, tuple(order)) for v, order in dict(rotations).items()),
                           key=lambda x: vertex_key(x[0])))
        cols = tuple(sorted(((v, c) for v, c in dict(colours or {}).items()),
                            key=lambda x: vertex_key(x[0])))
        return cls(graph, rot, tuple(outer), cols)

    @property
    def colouring(self) -> dict:
        return dict(self.colours)

    def faces(self) -> tuple:
        """All facial walks sorted by canonical key; validates the embedding."""
        if self._face_cache is None:
            walks = trace_faces(self.graph, self._rot)
            if self.outer not in {face_key(w) for w in walks}:
                raise InvalidEmbeddingError("designated outer face is not a face")
            object.__setattr__(self, "_face_cache", walks)
        return self._face_cache

    def outer_face(self) -> ClosedWalk:
        for w in self.faces():
            if face_key(w) == self.outer:
                return w
        raise InvalidEmbeddingError("outer face missing")

    def finite_faces(self) -> tuple:
        return tuple(w for w in self.faces() if face_key(w) != self.outer)

    def validate(self) -> None:
        self.faces()

    def delete_edge(self, eid: EdgeId) -> "PlaneGraph":
        """Plane graph minus one edge; the outer face follows the face merge."""
        old_outer = self.outer_face().edge_set()
        graph = self.graph.delete_edges({eid})
        rotations = {v: tuple(e for e in order if e != eid) for v, order in self._rot.items()}
        walks = trace_faces(graph, rotations)
        if eid not in old_outer:
            # the outer boundary is untouched, so its key survives
            if any(face_key(w) == self.outer for w in walks):
                return PlaneGraph.build(graph, rotations, self.outer, self.colouring)
            raise InvalidEmbeddingError("outer face vanished after interior deletion")
        target = old_outer - {eid}
        for w in walks:
            if target <= w.edge_set():
                return PlaneGraph.build(graph, rotations, face_key(w), self.colouring)
        raise InvalidEmbeddingError("could not locate the outer face after deletion")
