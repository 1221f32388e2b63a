"""Rooted planar maps as rotation systems.

A map on 2E half-edges is a pair of permutations: ``sigma`` sends a
half-edge to the next one counterclockwise around its vertex, ``alpha``
is the fixed-point-free involution pairing the two halves of each edge.
Faces are the orbits of phi = sigma o alpha (apply alpha first); with
this convention the face of a half-edge lies on its left, and the orbit
walks the face contour counterclockwise.  The map with no edges (one
vertex, one face) is allowed and treated specially throughout.

Corners are identified with half-edges: corner h is the sector swept
counterclockwise from h to sigma[h]; it belongs to face_of[alpha[h]],
and the corners of a face in contour order are alpha of its orbit.

Rooting is by half-edge, equivalently by corner.  Canonical codes come
from a breadth-first relabeling starting at the root, so equal codes
mean root-preserving isomorphism.
"""

from __future__ import annotations

import itertools
import json
import math
import struct
from collections import Counter, deque
from functools import cached_property

__all__ = [
    "MapError",
    "NotInvolution",
    "NotConnected",
    "NonPlanar",
    "SizeLimitExceeded",
    "PlanarMap",
    "VERTEX_MAP",
    "build_map",
    "map_to_json",
    "map_from_json",
    "enumerate_rooted_maps",
    "enumerate_by_face_degrees",
    "enumerate_rooted_with_face_degrees",
    "enumerate_quadrangulations",
    "enumerate_with_boundary",
    "bipartite_degree_multisets",
    "simple_cycles_up_to",
    "is_d_irreducible",
    "suitable_labelings",
    "geodesic_labeling",
    "is_suitable_labeling",
    "local_minima",
]

DEFAULT_MAX_EDGES = 8
DEFAULT_MAX_FACES = 6


class MapError(Exception):
    pass


class NotInvolution(MapError):
    pass


class NotConnected(MapError):
    pass


class NonPlanar(MapError):
    pass


class SizeLimitExceeded(MapError):
    pass


class PlanarMap:
    """Immutable rooted planar map; construct via :func:`build_map`."""

    def __init__(self, sigma, alpha, root=0, check=True):
        self.sigma = tuple(sigma)
        self.alpha = tuple(alpha)
        self.n = len(self.sigma)
        self.root = int(root) if self.n else 0
        if check:
            self._validate()

    def _validate(self):
        n = self.n
        if n == 0:
            return
        if n % 2:
            raise MapError("odd number of half-edges")
        if sorted(self.sigma) != list(range(n)):
            raise MapError("sigma is not a permutation")
        for h in range(n):
            a = self.alpha[h]
            if not 0 <= a < n or a == h or self.alpha[a] != h:
                raise NotInvolution("alpha must be a fixed-point-free involution")
        if not 0 <= self.root < n:
            raise MapError("root out of range")
        # connectivity of the group action
        seen = [False] * n
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            h = stack.pop()
            for g in (self.sigma[h], self.alpha[h]):
                if not seen[g]:
                    seen[g] = True
                    count += 1
                    stack.append(g)
        if count != n:
            raise NotConnected("sigma and alpha do not act transitively")
        if self.n_vertices - self.n_edges + self.n_faces != 2:
            raise NonPlanar("Euler characteristic is not 2")

    # -- derived structure -------------------------------------------------

    @property
    def n_edges(self):
        return self.n // 2

    @cached_property
    def phi(self):
        """Face permutation phi[h] = sigma[alpha[h]]."""
        return tuple(self.sigma[self.alpha[h]] for h in range(self.n))

    @staticmethod
    def _orbits(perm, n):
        seen = [False] * n
        out = []
        for h in range(n):
            if seen[h]:
                continue
            cyc = []
            cur = h
            while not seen[cur]:
                seen[cur] = True
                cyc.append(cur)
                cur = perm[cur]
            out.append(tuple(cyc))
        return tuple(out)

    @cached_property
    def vertices(self):
        if self.n == 0:
            return ((),)
        return self._orbits(self.sigma, self.n)

    @cached_property
    def faces(self):
        if self.n == 0:
            return ((),)
        return self._orbits(self.phi, self.n)

    @cached_property
    def vertex_of(self):
        out = [0] * self.n
        for i, cyc in enumerate(self.vertices):
            for h in cyc:
                out[h] = i
        return tuple(out)

    @cached_property
    def face_of(self):
        out = [0] * self.n
        for i, cyc in enumerate(self.faces):
            for h in cyc:
                out[h] = i
        return tuple(out)

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def root_vertex(self):
        return self.vertex_of[self.root] if self.n else 0

    @property
    def root_face(self):
        return self.face_of[self.root] if self.n else 0

    def head(self, h):
        """Vertex at the far end of half-edge h."""
        return self.vertex_of[self.alpha[h]]

    def corners_of_face(self, f):
        """Corners of face f in counterclockwise contour order.

        Corner c is the sector from c to sigma[c]; it sits at the head
        of the contour half-edge that enters it, hence the alpha."""
        return tuple(self.alpha[h] for h in self.faces[f])

    @cached_property
    def edges(self):
        """Edge list: pairs (h, alpha[h]) with h < alpha[h]."""
        return tuple((h, self.alpha[h]) for h in range(self.n) if h < self.alpha[h])

    @cached_property
    def edge_of(self):
        out = [0] * self.n
        for i, (h, a) in enumerate(self.edges):
            out[h] = out[a] = i
        return tuple(out)

    @cached_property
    def adjacency(self):
        """Per vertex: list of (neighbor vertex, edge id)."""
        adj = [[] for _ in range(self.n_vertices)]
        for i, (h, a) in enumerate(self.edges):
            u, v = self.vertex_of[h], self.vertex_of[a]
            adj[u].append((v, i))
            adj[v].append((u, i))
        return adj

    def vertex_degrees(self):
        return sorted(len(c) for c in self.vertices) if self.n else [0]

    def face_degrees(self):
        return sorted(len(c) for c in self.faces) if self.n else [0]

    # -- metric and structural queries --------------------------------------

    def distances_from(self, v, forbidden_edge=None):
        dist = [-1] * self.n_vertices
        dist[v] = 0
        q = deque([v])
        adj = self.adjacency
        while q:
            u = q.popleft()
            for w, e in adj[u]:
                if e == forbidden_edge or dist[w] >= 0:
                    continue
                dist[w] = dist[u] + 1
                q.append(w)
        return dist

    def distance_matrix(self):
        return [self.distances_from(v) for v in range(self.n_vertices)]

    def geodesic_count(self, src, dst):
        """Number of geodesics from src to dst."""
        dist = self.distances_from(src)
        counts = [0] * self.n_vertices
        counts[src] = 1
        for v in sorted(range(self.n_vertices), key=lambda v: dist[v]):
            if v == src or dist[v] < 0:
                continue
            counts[v] = sum(
                counts[w] for w, _ in self.adjacency[v] if dist[w] == dist[v] - 1
            )
        return counts[dst]

    @cached_property
    def is_bipartite(self):
        color = [-1] * self.n_vertices
        for s in range(self.n_vertices):
            if color[s] >= 0:
                continue
            color[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                for w, e in self.adjacency[u]:
                    if w == u:
                        return False  # loop edge
                    if color[w] < 0:
                        color[w] = color[u] ^ 1
                        q.append(w)
                    elif color[w] == color[u]:
                        return False
        return True

    def girth(self):
        """Length of a shortest cycle; math.inf for trees."""
        if self.n == 0:
            return math.inf
        best = math.inf
        by_pair = Counter()
        for i, (h, a) in enumerate(self.edges):
            u, v = self.vertex_of[h], self.vertex_of[a]
            if u == v:
                return 1
            by_pair[frozenset((u, v))] += 1
        if any(c >= 2 for c in by_pair.values()):
            best = 2
        for i, (h, a) in enumerate(self.edges):
            u, v = self.vertex_of[h], self.vertex_of[a]
            d = self.distances_from(u, forbidden_edge=i)[v]
            if d >= 0:
                best = min(best, d + 1)
        return best

    def structural_queries(self):
        return {
            "is_bipartite": self.is_bipartite,
            "girth": self.girth(),
            "face_degrees": self.face_degrees(),
            "vertex_degrees": self.vertex_degrees(),
        }

    # -- canonical form ------------------------------------------------------

    @cached_property
    def canonical_code(self):
        """BFS relabeling code; equal codes iff root-preserving isomorphic."""
        if self.n == 0:
            return b"V"
        n = self.n
        new = [-1] * n
        order = []

        def visit_vertex(h):
            cur = h
            while new[cur] < 0:
                new[cur] = len(order)
                order.append(cur)
                cur = self.sigma[cur]

        visit_vertex(self.root)
        i = 0
        while i < len(order):
            visit_vertex(self.alpha[order[i]])
            i += 1
        sig = [0] * n
        alf = [0] * n
        for h in range(n):
            sig[new[h]] = new[self.sigma[h]]
            alf[new[h]] = new[self.alpha[h]]
        return struct.pack(f"<{2 * n + 1}I", n, *sig, *alf)

    def relabel(self, perm):
        """Rename half-edges: new index of h is perm[h]."""
        n = self.n
        sig = [0] * n
        alf = [0] * n
        for h in range(n):
            sig[perm[h]] = perm[self.sigma[h]]
            alf[perm[h]] = perm[self.alpha[h]]
        return PlanarMap(sig, alf, perm[self.root] if n else 0)

    def with_root(self, root):
        return PlanarMap(self.sigma, self.alpha, root, check=False)

    def __eq__(self, other):
        return (
            isinstance(other, PlanarMap)
            and self.sigma == other.sigma
            and self.alpha == other.alpha
            and self.root == other.root
        )

    def __hash__(self):
        return hash((self.sigma, self.alpha, self.root))

    def __repr__(self):
        return (
            f"PlanarMap(E={self.n_edges}, V={self.n_vertices}, "
            f"F={self.n_faces}, root={self.root})"
        )


VERTEX_MAP = PlanarMap((), (), 0)


def build_map(sigma, alpha, root=0) -> PlanarMap:
    """Validate and build; raises NotInvolution/NotConnected/NonPlanar."""
    return PlanarMap(sigma, alpha, root)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

SCHEMA = "planarmaps/1"


def map_to_json(m, extra=None):
    doc = {
        "schema": SCHEMA,
        "half_edges": m.n,
        "sigma": list(m.sigma),
        "alpha": list(m.alpha),
        "root": m.root,
    }
    if extra:
        doc.update(extra)
    return doc


def map_from_json(doc):
    if doc.get("schema") != SCHEMA:
        raise MapError(f"unknown schema {doc.get('schema')!r}")
    if doc["half_edges"] != len(doc["sigma"]):
        raise MapError("half_edges does not match sigma length")
    return build_map(doc["sigma"], doc["alpha"], doc["root"])


# ---------------------------------------------------------------------------
# exhaustive generation: all rooted maps by edge count
# ---------------------------------------------------------------------------


def _insert_after(sigma, h, x):
    sigma[x] = sigma[h]
    sigma[h] = x


def _grow_one_edge(m):
    """All rooted maps obtained from m by adding one edge (root kept)."""
    out = []
    n = m.n
    for h in range(n):  # pendant edge in corner h
        sig = list(m.sigma) + [0, 0]
        _insert_after(sig, h, n)
        sig[n + 1] = n + 1
        alf = list(m.alpha) + [n + 1, n]
        out.append(PlanarMap(sig, alf, m.root, check=False))
    face_of = m.face_of
    alpha = m.alpha
    for h1 in range(n):  # chord between two corners of one face
        for h2 in range(n):
            if face_of[alpha[h1]] != face_of[alpha[h2]]:
                continue
            if h1 == h2:
                for first in (n, n + 1):
                    second = 2 * n + 1 - first
                    sig = list(m.sigma) + [0, 0]
                    sig[second] = sig[h1]
                    sig[first] = second
                    sig[h1] = first
                    alf = list(m.alpha) + [n + 1, n]
                    out.append(PlanarMap(sig, alf, m.root, check=False))
            else:
                sig = list(m.sigma) + [0, 0]
                _insert_after(sig, h1, n)
                _insert_after(sig, h2, n + 1)
                alf = list(m.alpha) + [n + 1, n]
                out.append(PlanarMap(sig, alf, m.root, check=False))
    return out


_EDGE_MAP = PlanarMap((0, 1), (1, 0))
_LOOP_MAP = PlanarMap((1, 0), (1, 0))


def enumerate_rooted_maps(n_edges, max_edges=DEFAULT_MAX_EDGES):
    """All rooted planar maps with n_edges edges, deterministic order."""
    if n_edges > max_edges:
        raise SizeLimitExceeded(f"n_edges={n_edges} exceeds cap {max_edges}")
    level = [VERTEX_MAP]
    if n_edges == 0:
        return level
    level = [_EDGE_MAP, _LOOP_MAP]
    for _ in range(n_edges - 1):
        seen = {}
        for m in level:
            for m2 in _grow_one_edge(m):
                code = m2.canonical_code
                if code not in seen:
                    seen[code] = m2
        level = [seen[c] for c in sorted(seen)]
    return sorted(level, key=lambda m: m.canonical_code)


# ---------------------------------------------------------------------------
# exhaustive generation: rooted maps with prescribed face degrees
# (polygon gluing; polygon 0 carries the root on its side 0)
# ---------------------------------------------------------------------------


def enumerate_by_face_degrees(degrees, max_faces=DEFAULT_MAX_FACES):
    """All rooted maps whose faces have the given degrees, with the root
    corner in a face of degree degrees[0].  Faces listed by `degrees`
    beyond the first are interchangeable.
    """
    degrees = list(degrees)
    if len(degrees) > max_faces:
        raise SizeLimitExceeded(f"{len(degrees)} faces exceeds cap {max_faces}")
    if any(d <= 0 for d in degrees):
        raise MapError("face degrees must be positive")
    if sum(degrees) % 2:
        return []
    total = sum(degrees)
    # side layout and the fixed face permutation
    first = []
    phi = [0] * total
    poly_of = [0] * total
    s = 0
    for p, d in enumerate(degrees):
        first.append(s)
        for i in range(d):
            phi[s + i] = s + (i + 1) % d
            poly_of[s + i] = p
        s += d
    nsides = total

    alpha = [-1] * nsides
    results = {}

    def finalize():
        sig = [phi[alpha[h]] for h in range(nsides)]
        m = PlanarMap(sig, alpha, 0)  # full validation, genus included
        code = m.canonical_code
        if code not in results:
            results[code] = m

    def polygon_circle(p):
        return tuple(range(first[p], first[p] + degrees[p]))

    def rec(circles, unused_ids):
        """`circles` are the boundary cycles of the single opened component
        (tuples of unglued sides); `unused_ids` maps degree -> untouched
        polygon ids.  A gluing stays planar iff it joins two sides of one
        boundary cycle (splitting it) or pulls in a fresh polygon."""
        x = None
        for c in circles:
            for s_ in c:
                if x is None or s_ < x:
                    x = s_
        if x is None:
            if not any(unused_ids.values()) and all(a >= 0 for a in alpha):
                finalize()
            return
        cx = next(c for c in circles if x in c)
        rest = [c for c in circles if c is not cx]
        i = cx.index(x)
        cx = cx[i:] + cx[:i]  # rotate x to the front
        candidates = [("split", j) for j in range(1, len(cx))]
        candidates.extend(
            ("fresh", deg) for deg in sorted(unused_ids) if unused_ids[deg]
        )
        for kind, arg in candidates:
            if kind == "split":
                y = cx[arg]
                alpha[x], alpha[y] = y, x
                arc1, arc2 = cx[1:arg], cx[arg + 1 :]
                new_circles = rest + [a for a in (arc1, arc2) if a]
                rec(new_circles, unused_ids)
            else:
                ids = unused_ids[arg]
                p = ids[0]
                y = first[p]
                alpha[x], alpha[y] = y, x
                ring = polygon_circle(p)
                j = ring.index(y)
                ring = ring[j:] + ring[:j]
                merged = cx[1:] + ring[1:]
                new_circles = rest + ([merged] if merged else [])
                new_unused = dict(unused_ids)
                new_unused[arg] = ids[1:]
                rec(new_circles, new_unused)
            alpha[x], alpha[y] = -1, -1

    unused0 = {}
    for p, d in enumerate(degrees[1:], start=1):
        unused0.setdefault(d, []).append(p)
    rec([polygon_circle(0)], unused0)
    return [results[c] for c in sorted(results)]


def enumerate_rooted_with_face_degrees(multiset, max_faces=DEFAULT_MAX_FACES):
    """All rooted maps with the given face-degree multiset, root anywhere."""
    multiset = sorted(multiset)
    out = []
    for d in sorted(set(multiset)):
        rest = list(multiset)
        rest.remove(d)
        out.extend(enumerate_by_face_degrees([d] + rest, max_faces))
    return sorted(out, key=lambda m: m.canonical_code)


def enumerate_quadrangulations(n_faces, max_faces=DEFAULT_MAX_FACES):
    """All rooted quadrangulations with n_faces faces."""
    if n_faces == 0:
        return [VERTEX_MAP]
    return enumerate_by_face_degrees([4] * n_faces, max_faces)


def enumerate_with_boundary(boundary_degree, inner_degrees, max_faces=DEFAULT_MAX_FACES):
    """Rooted maps with a boundary: root face has `boundary_degree`,
    inner faces the listed degrees.  The root face is the boundary."""
    if boundary_degree == 0:
        raise MapError("boundary degree must be positive")
    return enumerate_by_face_degrees(
        [boundary_degree] + sorted(inner_degrees), max_faces + 1
    )


def bipartite_degree_multisets(max_faces, total_degree_cap=None, options=(2, 4, 6)):
    """All nonempty multisets of even inner degrees with at most max_faces
    parts (helper for exhaustive bipartite sweeps)."""
    out = []
    for k in range(1, max_faces + 1):
        for combo in itertools.combinations_with_replacement(sorted(options), k):
            if total_degree_cap and sum(combo) > total_degree_cap:
                continue
            out.append(list(combo))
    return out


# ---------------------------------------------------------------------------
# cycles and irreducibility
# ---------------------------------------------------------------------------


def simple_cycles_up_to(m, max_len):
    """All simple cycles of length <= max_len, as frozensets of edge ids.

    Loops are 1-cycles, pairs of parallel edges are 2-cycles.  Each cycle
    is reported once.
    """
    cycles = set()
    nv = m.n_vertices
    adj = m.adjacency
    for i, (h, a) in enumerate(m.edges):
        if m.vertex_of[h] == m.vertex_of[a]:
            cycles.add(frozenset((i,)))
    if max_len < 2:
        return {c for c in cycles if len(c) <= max_len}

    def dfs(start, v, path_edges, visited):
        if len(path_edges) >= max_len:
            return
        for w, e in adj[v]:
            if e in path_edges:
                continue
            if w == start and path_edges:
                cycles.add(frozenset(path_edges + [e]))
                continue
            if w in visited or w < start or w == start:
                continue
            visited.add(w)
            dfs(start, w, path_edges + [e], visited)
            visited.remove(w)

    for s in range(nv):
        dfs(s, s, [], {s})
    return {c for c in cycles if len(c) <= max_len}


def _simple_face_contours(m, degree, skip_face=None):
    """Edge sets of faces of the given degree whose contour is a cycle."""
    out = set()
    for fi, cyc in enumerate(m.faces):
        if fi == skip_face or len(cyc) != degree:
            continue
        edge_ids = [m.edge_of[h] for h in cyc]
        verts = [m.vertex_of[h] for h in cyc]
        if len(set(edge_ids)) == len(edge_ids) and len(set(verts)) == len(verts):
            out.add(frozenset(edge_ids))
    return out


def is_d_irreducible(m, d, boundary_face=None):
    """No cycle shorter than d, every d-cycle bounds a face.

    With `boundary_face` given, that face does not count as a bounding
    face (maps with a boundary).  d = 0 is vacuous.
    """
    if d <= 0:
        return True
    cycles = simple_cycles_up_to(m, d)
    if any(len(c) < d for c in cycles):
        return False
    faces_d = _simple_face_contours(m, d, skip_face=boundary_face)
    return all(c in faces_d for c in cycles if len(c) == d)


# ---------------------------------------------------------------------------
# vertex labelings
# ---------------------------------------------------------------------------


def is_suitable_labeling(m, labels):
    return all(
        abs(labels[m.vertex_of[h]] - labels[m.vertex_of[a]]) == 1
        for h, a in m.edges
    )


def geodesic_labeling(m, origin):
    d = m.distances_from(origin)
    if any(x < 0 for x in d):
        raise MapError("map not connected")
    return d


def local_minima(m, labels):
    out = []
    for v in range(m.n_vertices):
        nb = [w for w, _ in m.adjacency[v]]
        if nb and all(labels[w] > labels[v] for w in nb):
            out.append(v)
    return out


def suitable_labelings(m):
    """All suitable labelings (adjacent labels differ by exactly 1),
    normalized to min label 0.  Empty if the map is not bipartite."""
    if m.n == 0 or not m.is_bipartite:
        return []
    nv = m.n_vertices
    # spanning tree from vertex 0
    parent = [-1] * nv
    order = [0]
    seen = {0}
    tree_edges = []
    for u in order:
        for w, e in m.adjacency[u]:
            if w not in seen:
                seen.add(w)
                parent[w] = u
                tree_edges.append((u, w))
                order.append(w)
    out = set()
    for signs in itertools.product((-1, 1), repeat=len(tree_edges)):
        lab = [0] * nv
        for (u, w), s_ in zip(tree_edges, signs):
            lab[w] = lab[u] + s_
        if is_suitable_labeling(m, lab):
            mn = min(lab)
            out.add(tuple(x - mn for x in lab))
    return sorted(out)
