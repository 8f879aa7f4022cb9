"""Typed Feynman/Kubo diagram multigraphs.

Vertices carry a kind, internal lines carry a particle type and the index
variance at each end ("u" upper, "l" lower), and external legs are an
ordered list of half-lines attached to vertices.  Diagrams are labeled:
two diagrams are equal only if their vertex ids agree.
"""

import hashlib
from collections import Counter
from dataclasses import dataclass, replace
from itertools import combinations_with_replacement, permutations
from typing import NamedTuple

from .cumulants import ModelSpec
from .errors import DocumentError

VERTEX_KINDS = ("bare", "physical", "generic")
EDGE_VARIANCES = ("ul", "lu", "uu", "ll")
LEG_VARIANCES = ("u", "l")

MAX_ENUM_EDGES = 7
MAX_ENUM_VERTICES = 6


class DiagramError(ValueError):
    pass


class DisconnectedDiagramError(DiagramError):
    pass


class SignatureMismatchError(DiagramError):
    pass


def _flip(variance):
    return "l" if variance == "u" else "u"


@dataclass(frozen=True, order=True)
class Vertex:
    id: int
    kind: str = "bare"

    def __post_init__(self):
        if self.kind not in VERTEX_KINDS:
            raise DiagramError(f"unknown vertex kind {self.kind!r}")


@dataclass(frozen=True, order=True)
class Edge:
    """Internal line; ``variance`` holds the index position at the u end then the v end."""

    u: int
    v: int
    type: int = 0
    variance: str = "ul"

    def __post_init__(self):
        if self.variance not in EDGE_VARIANCES:
            raise DiagramError(f"unknown edge variance {self.variance!r}")
        if self.u > self.v:
            u, v = self.u, self.v
            object.__setattr__(self, "u", v)
            object.__setattr__(self, "v", u)
            object.__setattr__(self, "variance", self.variance[::-1])
        elif self.u == self.v:
            object.__setattr__(self, "variance", min(self.variance, self.variance[::-1]))

    def end_variance(self, vertex):
        if vertex == self.u:
            return self.variance[0]
        if vertex == self.v:
            return self.variance[1]
        raise DiagramError(f"vertex {vertex} is not an endpoint of {self}")

    def other(self, vertex):
        return self.v if vertex == self.u else self.u


@dataclass(frozen=True)
class ExternalLeg:
    vertex: int
    type: int = 0
    variance: str = "u"

    def __post_init__(self):
        if self.variance not in LEG_VARIANCES:
            raise DiagramError(f"unknown leg variance {self.variance!r}")


@dataclass(frozen=True)
class Diagram:
    model: ModelSpec
    vertices: tuple
    edges: tuple = ()
    external_legs: tuple = ()
    subtracted: bool = False

    def __post_init__(self):
        vertices = tuple(sorted(self.vertices))
        ids = [v.id for v in vertices]
        if len(set(ids)) != len(ids):
            raise DiagramError("duplicate vertex ids")
        known = set(ids)
        edges = tuple(sorted(self.edges))
        n_types = self.model.num_types
        for e in edges:
            if e.u not in known or e.v not in known:
                raise DiagramError(f"edge {e} references a missing vertex")
            if not 0 <= e.type < n_types:
                raise DiagramError(f"edge type {e.type} outside 0..{n_types - 1}")
        legs = tuple(self.external_legs)
        for leg in legs:
            if leg.vertex not in known:
                raise DiagramError(f"external leg {leg} references a missing vertex")
            if not 0 <= leg.type < n_types:
                raise DiagramError(f"leg type {leg.type} outside 0..{n_types - 1}")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "external_legs", legs)

    @property
    def el(self):
        return len(self.external_legs)

    @property
    def vertex_ids(self):
        return tuple(v.id for v in self.vertices)

    @property
    def leg_signature(self):
        return tuple((leg.type, leg.variance) for leg in self.external_legs)

    def vertex(self, vid):
        for v in self.vertices:
            if v.id == vid:
                return v
        raise DiagramError(f"no vertex {vid}")


def simple_diagram(num_vertices, pairs, model=None, legs=()):
    """Single-type diagram on vertices 0..n-1 from (u, v) pairs; legs as vertex ids."""
    model = model or ModelSpec()
    return Diagram(model, tuple(Vertex(i) for i in range(num_vertices)),
                   tuple(Edge(u, v) for u, v in pairs),
                   tuple(ExternalLeg(x, 0, "u" if i % 2 == 0 else "l")
                         for i, x in enumerate(legs)))


# --- graph kernels on vertex-index lists -----------------------------------

def _index_graph(diagram):
    pos = {vid: i for i, vid in enumerate(diagram.vertex_ids)}
    return len(pos), [(pos[e.u], pos[e.v]) for e in diagram.edges]


def _component_labels(n, pairs):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return [find(x) for x in range(n)]


def _is_connected(n, pairs):
    if n <= 1:
        return True
    return len(set(_component_labels(n, pairs))) == 1


def _bridges(n, pairs):
    """Indices of bridge edges (Tarjan low-link, iterative).

    The DFS skips only the tree edge it arrived by (by edge index), so
    parallel edges are never reported; self-loops never are either.
    """
    adj = [[] for _ in range(n)]
    for i, (u, v) in enumerate(pairs):
        if u == v:
            continue
        adj[u].append((v, i))
        adj[v].append((u, i))
    disc = [-1] * n
    low = [0] * n
    bridges = set()
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            node, via, it = stack[-1]
            advanced = False
            for nxt, eid in it:
                if eid == via:
                    continue
                if disc[nxt] == -1:
                    disc[nxt] = low[nxt] = timer
                    timer += 1
                    stack.append((nxt, eid, iter(adj[nxt])))
                    advanced = True
                    break
                low[node] = min(low[node], disc[nxt])
            if advanced:
                continue
            stack.pop()
            if stack:
                parent = stack[-1][0]
                low[parent] = min(low[parent], low[node])
                if low[node] > disc[parent]:
                    bridges.add(via)
    return bridges


# --- public predicates -------------------------------------------------------

def is_connected(diagram):
    """Connectivity through internal lines; the empty diagram counts as connected."""
    return _is_connected(*_index_graph(diagram))


def find_bridges(diagram):
    """Internal edges (as Edge values, in edge-list order) whose removal disconnects."""
    n, pairs = _index_graph(diagram)
    return [diagram.edges[i] for i in sorted(_bridges(n, pairs))]


def is_one_particle_irreducible(diagram):
    n, pairs = _index_graph(diagram)
    if not _is_connected(n, pairs):
        raise DisconnectedDiagramError("1PI is only defined for connected diagrams")
    return not _bridges(n, pairs)


def gauge_invariant_vertex_check(signature):
    """Every type appears an even number of times with as many upper as lower legs."""
    counts = Counter()
    for ptype, variance in signature:
        counts[ptype, variance] += 1
    types = {t for t, _ in counts}
    return all(counts[t, "u"] == counts[t, "l"] for t in types)


def vertex_signature(diagram, vid):
    """Line ends meeting at a vertex (a self-loop contributes both ends), sorted."""
    ends = []
    for e in diagram.edges:
        if e.u == vid:
            ends.append((e.type, e.variance[0]))
        if e.v == vid:
            ends.append((e.type, e.variance[1]))
    ends.extend((leg.type, leg.variance) for leg in diagram.external_legs
                if leg.vertex == vid)
    return tuple(sorted(ends))


def is_prime(diagram):
    """Connected, single external-leg type, and no factorization.

    A factorization is a split of the vertices into two non-empty sets with
    no line between them, each side holding a gauge-invariant subset of the
    external legs.
    """
    if not is_connected(diagram):
        return False
    if len({leg.type for leg in diagram.external_legs}) > 1:
        return False
    return not _factorizes(diagram)


def _factorizes(diagram):
    n, pairs = _index_graph(diagram)
    labels = _component_labels(n, pairs)
    roots = sorted(set(labels))
    if len(roots) < 2:
        return False
    pos = {vid: i for i, vid in enumerate(diagram.vertex_ids)}
    for root in roots:
        side = [(leg.type, leg.variance) for leg in diagram.external_legs
                if labels[pos[leg.vertex]] == root]
        rest = [(leg.type, leg.variance) for leg in diagram.external_legs
                if labels[pos[leg.vertex]] != root]
        if gauge_invariant_vertex_check(side) and gauge_invariant_vertex_check(rest):
            return True
    return False


# --- rewriting -----------------------------------------------------------------

def cut_edges(diagram, sub_ids):
    """Lines joining the vertex set to the rest, in insertion order.

    Sorted by (outside vertex id, type, variance at the inside end), ties by
    inside vertex id.
    """
    sub = set(sub_ids)
    cut = []
    for e in diagram.edges:
        if (e.u in sub) != (e.v in sub):
            inside = e.u if e.u in sub else e.v
            outside = e.other(inside)
            cut.append(((outside, e.type, e.end_variance(inside), inside), e))
    cut.sort(key=lambda t: t[0])
    return [(key[0], key[3], e) for key, e in cut]


def boundary_signature(diagram, sub_ids):
    """Legs a replacement must present: cut lines first, then the diagram's own
    external legs attached inside the set (in their original order)."""
    sub = set(sub_ids)
    sig = [(e.type, e.end_variance(inside)) for _, inside, e in cut_edges(diagram, sub)]
    sig += [(leg.type, leg.variance) for leg in diagram.external_legs if leg.vertex in sub]
    return tuple(sig)


def insert_vertex(diagram, sub_ids, replacement):
    """Replace the subdiagram on ``sub_ids`` by ``replacement``.

    The replacement's external legs must equal :func:`boundary_signature` in
    type, number, order and variance.  Replacement vertex ids are kept unless
    they collide with a surviving vertex, in which case fresh ids are issued.
    """
    sub = set(sub_ids)
    if not sub:
        raise DiagramError("subdiagram vertex set is empty")
    if not sub <= set(diagram.vertex_ids):
        raise DiagramError(f"vertices {sorted(sub - set(diagram.vertex_ids))} not in diagram")
    if replacement.model != diagram.model:
        raise DiagramError("replacement uses a different model")
    expected = boundary_signature(diagram, sub)
    if replacement.leg_signature != expected:
        raise SignatureMismatchError(
            f"replacement legs {replacement.leg_signature} do not match boundary {expected}")

    keep = [v for v in diagram.vertices if v.id not in sub]
    taken = {v.id for v in keep}
    fresh = max(list(taken) + list(replacement.vertex_ids) + [-1]) + 1
    relabel = {}
    for v in replacement.vertices:
        if v.id in taken:
            relabel[v.id] = fresh
            fresh += 1
        else:
            relabel[v.id] = v.id
    vertices = keep + [Vertex(relabel[v.id], v.kind) for v in replacement.vertices]
    edges = [e for e in diagram.edges if e.u not in sub and e.v not in sub]
    edges += [Edge(relabel[e.u], relabel[e.v], e.type, e.variance) for e in replacement.edges]

    cuts = cut_edges(diagram, sub)
    rep_legs = list(replacement.external_legs)
    for (outside, inside, e), leg in zip(cuts, rep_legs):
        edges.append(Edge(outside, relabel[leg.vertex], e.type,
                          e.end_variance(outside) + leg.variance))
    inner_legs = iter(rep_legs[len(cuts):])
    legs = []
    for leg in diagram.external_legs:
        if leg.vertex in sub:
            new = next(inner_legs)
            legs.append(ExternalLeg(relabel[new.vertex], leg.type, leg.variance))
        else:
            legs.append(leg)
    return Diagram(diagram.model, tuple(vertices), tuple(edges), tuple(legs),
                   diagram.subtracted)


class BrokenLine(NamedTuple):
    """The two terms of (X^a X^a)(X^b X^b - <X^b X^b>) after breaking a type-a line."""

    term: Diagram
    counterterm: Diagram


def break_line(diagram, line, influence_type):
    """Break an internal line with a new 4-valent vertex carrying a type-b loop.

    ``line`` is an index into ``diagram.edges`` or an Edge of the diagram.
    The new vertex gets one upper and one lower end of the broken line's type
    plus a self-loop of ``influence_type``, so it is gauge invariant.  The
    counterterm has the same topology and is flagged ``subtracted``.
    """
    if isinstance(line, ExternalLeg):
        raise DiagramError("only internal lines can be broken, not external legs")
    if isinstance(line, Edge):
        if line not in diagram.edges:
            raise DiagramError(f"{line} is not an internal line of the diagram")
        index = diagram.edges.index(line)
    elif isinstance(line, int) and not isinstance(line, bool):
        index = line
        if not 0 <= index < len(diagram.edges):
            raise DiagramError(f"no internal line {index} (diagram has {len(diagram.edges)})")
    else:
        raise DiagramError(f"cannot break {line!r}")
    if not 0 <= influence_type < diagram.model.num_types:
        raise DiagramError(f"influence type {influence_type} outside the model")

    e = diagram.edges[index]
    w = max(diagram.vertex_ids) + 1
    x, y = e.variance
    edges = list(diagram.edges[:index] + diagram.edges[index + 1:])
    edges += [Edge(e.u, w, e.type, x + _flip(x)),
              Edge(w, e.v, e.type, x + y),
              Edge(w, w, influence_type, "ul")]
    term = Diagram(diagram.model, diagram.vertices + (Vertex(w, "bare"),),
                   tuple(edges), diagram.external_legs, diagram.subtracted)
    return BrokenLine(term, replace(term, subtracted=True))


# --- enumeration and counting -----------------------------------------------------

def _connected_multigraph_edge_sets(num_edges, num_vertices):
    slots = [(i, j) for i in range(num_vertices) for j in range(i, num_vertices)]
    for pairs in combinations_with_replacement(slots, num_edges):
        if num_vertices > 1:
            touched = {x for p in pairs for x in p}
            if len(touched) < num_vertices:
                continue
        if _is_connected(num_vertices, pairs):
            yield pairs


def enumerate_connected_multigraphs(max_edges, max_vertices, up_to_isomorphism=False,
                                    model=None):
    """All labeled connected multigraphs with 1..max_edges lines on 1..max_vertices vertices.

    Vertices are 0..V-1, lines are single-typed, there are no external legs,
    and the order is (V, E, lexicographic edge multiset).  With
    ``up_to_isomorphism`` only the first representative of each canonical
    form is kept.
    """
    if max_edges > MAX_ENUM_EDGES or max_vertices > MAX_ENUM_VERTICES:
        raise DiagramError(
            f"enumeration bounds ({max_edges}, {max_vertices}) exceed "
            f"({MAX_ENUM_EDGES}, {MAX_ENUM_VERTICES})")
    if max_edges < 0 or max_vertices < 0:
        raise DiagramError("bounds must be non-negative")
    model = model or ModelSpec()
    seen = set()
    for nv in range(1, max_vertices + 1):
        verts = tuple(Vertex(i) for i in range(nv))
        for ne in range(1, max_edges + 1):
            for pairs in _connected_multigraph_edge_sets(ne, nv):
                d = Diagram(model, verts, tuple(Edge(u, v) for u, v in pairs))
                if up_to_isomorphism:
                    key = canonical_form(d, ignore_variance=True)
                    if key in seen:
                        continue
                    seen.add(key)
                yield d


def canonical_form(diagram, ignore_variance=False):
    """Isomorphism-invariant key: lexicographically least relabeling.

    Brute force over vertex permutations, so only for small diagrams (<= 8).
    Line variances are directional; ``ignore_variance`` compares bare topology.
    """
    ids = diagram.vertex_ids
    if len(ids) > 8:
        raise DiagramError("canonical_form is limited to 8 vertices")
    best = None
    for perm in permutations(range(len(ids))):
        relabel = dict(zip(ids, perm))
        kinds = tuple(sorted((relabel[v.id], v.kind) for v in diagram.vertices))
        edges = tuple(sorted(
            (Edge(relabel[e.u], relabel[e.v], e.type, e.variance) for e in diagram.edges)))
        edges = tuple((e.u, e.v, e.type, "" if ignore_variance else e.variance)
                      for e in edges)
        legs = tuple((relabel[leg.vertex], leg.type, leg.variance)
                     for leg in diagram.external_legs)
        key = (kinds, edges, legs)
        if best is None or key < best:
            best = key
    return (diagram.model.num_types, diagram.subtracted, best)


def canonical_hash(diagram):
    return hashlib.sha256(repr(canonical_form(diagram)).encode()).hexdigest()


def count_pairings(n):
    """Perfect matchings of n items: (n-1)!! for even n, 0 for odd n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n % 2:
        return 0
    result = 1
    for k in range(n - 1, 0, -2):
        result *= k
    return result


# --- serialization ---------------------------------------------------------------

def to_json(diagram):
    doc = {
        "model": diagram.model.to_json(),
        "vertices": [{"id": v.id, "kind": v.kind} for v in diagram.vertices],
        "edges": [{"u": e.u, "v": e.v, "type": e.type, "variance": e.variance}
                  for e in diagram.edges],
        "external_legs": [{"vertex": leg.vertex, "type": leg.type,
                           "variance": leg.variance} for leg in diagram.external_legs],
    }
    if diagram.subtracted:
        doc["subtracted"] = True
    return doc


def _int_field(obj, key, default=None):
    value = obj[key] if default is None else obj.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(f"field {key!r} must be an integer, got {value!r}")
    return value


def from_json(doc):
    try:
        model = ModelSpec.from_json(doc["model"])
        vertices = [(_int_field(v, "id"), v.get("kind", "bare")) for v in doc["vertices"]]
        edges = [(_int_field(e, "u"), _int_field(e, "v"), _int_field(e, "type", 0),
                  e.get("variance", "ul")) for e in doc.get("edges", [])]
        legs = [(_int_field(x, "vertex"), _int_field(x, "type", 0), x.get("variance", "u"))
                for x in doc.get("external_legs", [])]
        subtracted = doc.get("subtracted", False)
    except (KeyError, TypeError, AttributeError) as exc:
        raise DocumentError(f"malformed diagram document: {exc!r}") from None
    return Diagram(model, tuple(Vertex(*v) for v in vertices),
                   tuple(Edge(*e) for e in edges),
                   tuple(ExternalLeg(*x) for x in legs), bool(subtracted))


def to_dot(diagram, name="diagram"):
    """Graphviz source; lines labeled t<type>, external legs drawn to boxed terminals."""
    lines = [f"graph {name} {{"]
    for v in diagram.vertices:
        lines.append(f'  v{v.id} [label="{v.id}:{v.kind}"];')
    for e in diagram.edges:
        lines.append(f'  v{e.u} -- v{e.v} [label="t{e.type}"];')
    for i, leg in enumerate(diagram.external_legs):
        lines.append(f'  ext{i} [shape=box, label="{i}:t{leg.type}{leg.variance}"];')
        lines.append(f'  v{leg.vertex} -- ext{i} [label="t{leg.type}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
