"""Slices: boundary maps with an apex corner, their decomposition into
elementary slices, and the wrapping correspondence with pointed rooted
and annular maps.

A slice is a map with a boundary face and three marked corners A, B, C
on it, appearing in this cyclic order along the contour orbit: the arc
A->B is the left boundary (a geodesic), B->C the base, C->A the right
boundary (the unique geodesic between its endpoints).  Width = |base|,
depth = |left|, tilt = depth - |right|.

All surgeries are done on face permutations: a gluing substitutes one
path's halves for the other's inside every surviving face orbit and
rewrites the boundary orbits, then sigma is recovered as phi o alpha.
Region extraction (used by the decomposition and by unwrapping) keeps a
set of faces and a closed boundary walk with the region on its right;
each walk half is re-paired with a fresh twin and the twins, in reverse
walk order, form the new outer face.  Corners are read off the walk:
the corner entered after walk[i] is the image of walk[i] itself.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .mapcore import (
    MapError,
    PlanarMap,
    build_map,
    map_from_json,
    map_to_json,
)

__all__ = [
    "NotASlice",
    "IncompatibleDepths",
    "NotAnnular",
    "Slice",
    "SlicePath",
    "AnnularMap",
    "trivial_slice",
    "empty_slice",
    "leftmost_geodesic",
    "slice_decompose",
    "slice_recompose",
    "glue_slices",
    "wrap",
    "unwrap_pointed",
    "unwrap_annular",
    "is_annular",
    "is_strict_annular",
    "enumerate_slices",
]


class NotASlice(MapError):
    pass


class IncompatibleDepths(MapError):
    pass


class NotAnnular(MapError):
    pass


def _rotate_to(lst, x):
    i = lst.index(x)
    return lst[i:] + lst[:i]


def _canonical_order(m):
    new = {}
    orderh = []

    def visit(h):
        cur = h
        while cur not in new:
            new[cur] = len(orderh)
            orderh.append(cur)
            cur = m.sigma[cur]

    visit(m.root)
    i = 0
    while i < len(orderh):
        visit(m.alpha[orderh[i]])
        i += 1
    return new


@dataclass(frozen=True)
class Slice:
    """Boundary map with corners A, B, C (half-edge ids) on the outer
    face, in contour order.  Corner h is entered after traversing the
    contour half h = alpha(corner rep ... ) -- concretely, the corner
    named by contour half x sits at head(x), between x and the next
    contour half."""

    map: PlanarMap
    A: int
    B: int
    C: int

    @cached_property
    def outer_face(self):
        return self.map.face_of[self.map.alpha[self.B]]

    @cached_property
    def _segments(self):
        m = self.map
        orbit = list(m.faces[self.outer_face])
        corners = [m.alpha[h] for h in orbit]
        k = len(orbit)
        for want in "ABC":
            if getattr(self, want) not in corners:
                raise NotASlice(f"corner {want} is not on the outer face")
        ia, ib, ic = (corners.index(getattr(self, w)) for w in "ABC")

        def seg(i, j):
            # contour halves strictly between corner i and corner j:
            # orbit[i+1], ..., orbit[j]
            out = []
            idx = (i + 1) % k
            stop = (j + 1) % k
            while idx != stop:
                out.append(orbit[idx])
                idx = (idx + 1) % k
            return out

        if ia == ib == ic:
            return [], orbit[(ia + 1) % k :] + orbit[: (ia + 1) % k], []
        return seg(ia, ib), seg(ib, ic), seg(ic, ia)

    @property
    def left(self):
        return self._segments[0]

    @property
    def base(self):
        return self._segments[1]

    @property
    def right(self):
        return self._segments[2]

    @property
    def width(self):
        return len(self.base)

    @property
    def depth(self):
        return len(self.left)

    @property
    def tilt(self):
        return self.depth - len(self.right)

    @property
    def apex_vertex(self):
        return self.map.vertex_of[self.A]

    def inner_faces(self):
        return [f for f in range(self.map.n_faces) if f != self.outer_face]

    def inner_face_degrees(self):
        return sorted(len(self.map.faces[f]) for f in self.inner_faces())

    def n_inner_faces(self):
        return self.map.n_faces - 1

    def validate(self):
        m = self.map
        if m.n == 0:
            raise NotASlice("empty map is not a slice")
        left, base, right = self._segments
        if not base:
            raise NotASlice("width must be positive")
        va = self.apex_vertex
        vb = m.vertex_of[self.B]
        vc = m.vertex_of[self.C]
        dist = m.distances_from(va)
        if dist[vb] != len(left):
            raise NotASlice("left boundary is not a geodesic")
        if dist[vc] != len(right):
            raise NotASlice("right boundary is not a geodesic")
        if m.geodesic_count(va, vc) != 1:
            raise NotASlice("right boundary is not the unique geodesic")
        if left and m.vertex_of[left[0]] != va:
            raise NotASlice("left boundary does not start at the apex")
        if right and m.head(right[-1]) != va:
            raise NotASlice("right boundary does not end at the apex")
        if {m.edge_of[h] for h in left} & {m.edge_of[h] for h in right}:
            raise NotASlice("left and right boundaries share an edge")
        return self

    def canonical(self):
        m = self.map.with_root(self.B)
        new = _canonical_order(m)
        return m.canonical_code, new[self.A], new[self.C]

    def to_json(self):
        return map_to_json(self.map, {"A": self.A, "B": self.B, "C": self.C})

    @classmethod
    def from_json(cls, doc):
        return cls(map_from_json(doc), doc["A"], doc["B"], doc["C"])


def trivial_slice():
    return Slice(build_map((0, 1), (1, 0), 0), A=1, B=1, C=0)


def empty_slice():
    return Slice(build_map((0, 1), (1, 0), 0), A=0, B=1, C=0)


@dataclass(frozen=True)
class SlicePath:
    """Label path with +-1 increments; one nontrivial elementary slice
    per up-step (None marks the trivial slice of a down-step)."""

    labels: tuple
    slices: tuple

    def __post_init__(self):
        if self.labels[0] != 0 or len(self.labels) != len(self.slices) + 1:
            raise MapError("malformed slice path")
        for a, b, s in zip(self.labels, self.labels[1:], self.slices):
            if abs(b - a) != 1 or (s is None) != (b < a):
                raise MapError("labels and attached slices disagree")

    @property
    def tilt(self):
        return self.labels[-1]

    @property
    def width(self):
        return len(self.slices)


@dataclass(frozen=True)
class AnnularMap:
    map: PlanarMap
    central_face: int

    @property
    def central_degree(self):
        return len(self.map.faces[self.central_face])

    @property
    def outer_degree(self):
        return len(self.map.faces[self.map.root_face])

    def canonical(self):
        m = self.map
        new = _canonical_order(m)
        return m.canonical_code, min(new[h] for h in m.faces[self.central_face])


# ---------------------------------------------------------------------------
# leftmost geodesics
# ---------------------------------------------------------------------------


def _sigma_inv(m, h):
    cur = h
    while m.sigma[cur] != h:
        cur = m.sigma[cur]
    return cur


def leftmost_geodesic(m, ref, dist):
    """Strict-descent path of `dist`: at each vertex take the first
    descending half met scanning clockwise (sigma^-1) from the
    reference half, inclusive; afterwards the reference is the arrival
    half.  Returns the traversed halves."""
    path = []
    cur = m.vertex_of[ref]
    while dist[cur] > 0:
        h = ref
        chosen = None
        for _ in range(len(m.vertices[cur])):
            if dist[m.head(h)] == dist[cur] - 1:
                chosen = h
                break
            h = _sigma_inv(m, h)
        if chosen is None:
            raise MapError("no descent direction; dist array inconsistent")
        path.append(chosen)
        ref = m.alpha[chosen]
        cur = m.vertex_of[ref]
    return path


# ---------------------------------------------------------------------------
# face-permutation surgery
# ---------------------------------------------------------------------------


def _build_from_faces(nhalves, orbits, alpha, root):
    phi = [None] * nhalves
    for orbit in orbits:
        for x, y in zip(orbit, orbit[1:] + orbit[:1]):
            if phi[x] is not None:
                raise MapError("face orbits overlap")
            phi[x] = y
    if any(p is None for p in phi):
        raise MapError("face orbits do not cover the half-edges")
    sigma = [phi[alpha[h]] for h in range(nhalves)]
    return build_map(sigma, alpha, root)


def _compress_build(orbits, pairs, root):
    alive = sorted({h for orbit in orbits for h in orbit}, key=repr)
    new = {h: i for i, h in enumerate(alive)}
    orbits2 = [[new[h] for h in orbit] for orbit in orbits]
    alpha2 = [0] * len(alive)
    for h in alive:
        alpha2[new[h]] = new[pairs[h]]
    m = _build_from_faces(len(alive), orbits2, alpha2, new[root])
    return m, new


def extract_region(region_orbits, alpha_of, walk, root=None):
    """Cut out the faces given as explicit orbits, bounded by the closed
    `walk` (directed halves, region to the right: each walk half lies in
    a region orbit).  Each walk half is re-paired with a fresh twin and
    the twins form the new outer face in reverse walk order; edges
    interior to the region keep their pairing.

    Returns (map, old->new mapping).
    """
    orbits = [list(o) for o in region_orbits]
    alive = {h for orbit in orbits for h in orbit}
    walk_pos = {}
    for i, w in enumerate(walk):
        if w in walk_pos:
            raise MapError("walk repeats a half-edge")
        if w not in alive:
            raise MapError("walk half is not on a region face")
        walk_pos[w] = i
    pairs = {}
    twins = {}
    for i, w in enumerate(walk):
        t = ("twin", i)
        twins[w] = t
        pairs[w] = t
        pairs[t] = w
    for h in alive:
        if h in pairs:
            continue
        a = alpha_of(h)
        if a not in alive or a in walk_pos:
            raise MapError("region boundary edge missing from the walk")
        pairs[h] = a
    orbits.append([twins[w] for w in reversed(walk)])
    return _compress_build(orbits, pairs, walk[0] if root is None else root)


# ---------------------------------------------------------------------------
# wrapping
# ---------------------------------------------------------------------------


def wrap(s: Slice):
    """Identify the left and right boundaries edge by edge from the
    base.  tilt 0 -> (map, origin vertex); else AnnularMap, central
    degree |tilt|."""
    s.validate()
    m = s.map
    left, base, right = s._segments
    d, r = len(left), len(right)
    K = min(d, r)
    t = s.tilt
    subst = {}
    for k in range(1, K + 1):
        lk = left[d - k]  # downward half, level k -> k-1
        rk = right[k - 1]  # upward half, level k-1 -> k
        subst[rk] = m.alpha[lk]
        subst[m.alpha[rk]] = lk

    def sub(h):
        return subst.get(h, h)

    orbits = []
    for f in range(m.n_faces):
        if f == s.outer_face:
            continue
        orbits.append([sub(h) for h in m.faces[f]])
    orbits.append(list(base))
    central_rep = None
    if t > 0:
        orbits.append(list(left[:t]))
        central_rep = left[0]
    elif t < 0:
        leftover = [sub(h) for h in right[d:]]
        orbits.append(leftover)
        central_rep = leftover[0]

    pairs = {}
    for orbit in orbits:
        for h in orbit:
            pairs[h] = sub(m.alpha[h])
    out, new = _compress_build(orbits, pairs, base[0])
    if t == 0:
        if left:
            origin = out.vertex_of[new[left[0]]]
        else:
            origin = out.vertex_of[new[base[0]]]
        return out, origin
    return AnnularMap(out, out.face_of[new[central_rep]])


# ---------------------------------------------------------------------------
# unwrapping
# ---------------------------------------------------------------------------


def unwrap_pointed(m: PlanarMap, origin) -> Slice:
    """Slit along the leftmost geodesic from the root corner to the
    origin; inverse of wrap on zero-tilt slices."""
    if m.vertex_of[m.root] == origin:
        raise NotASlice("origin equals the root vertex")
    dist = m.distances_from(origin)
    path = leftmost_geodesic(m, m.root, dist)
    outer = m.root_face
    base_arc = _rotate_to(list(m.faces[outer]), m.root)
    region = [list(m.faces[f]) for f in range(m.n_faces) if f != outer]
    d = len(path)
    walk = (
        list(path)
        + [m.alpha[h] for h in reversed(path)]
        + [m.alpha[h] for h in reversed(base_arc)]
    )
    out, new = extract_region(region, lambda h: m.alpha[h], walk)
    # the corner entered after the twin of walk[i] has rep walk[i],
    # sitting at the tail of walk[i]
    corner_A = new[walk[d]]
    corner_B = new[walk[0]]
    corner_C = new[walk[2 * d]]
    sl = Slice(out, corner_A, corner_B, corner_C)
    sl.validate()
    return sl


def _seam_winding(m, central_face, outer_face):
    """Per-half winding increments from a dual seam central->outer,
    normalized so the outer contour has total winding +1."""
    prev = {central_face: None}
    queue = deque([central_face])
    while queue:
        f = queue.popleft()
        for h in m.faces[f]:
            g = m.face_of[m.alpha[h]]
            if g not in prev:
                prev[g] = h
                queue.append(g)
    if outer_face not in prev:
        raise NotAnnular("central face does not see the outer face")
    w = [0] * m.n
    f = outer_face
    while prev[f] is not None:
        h = prev[f]
        w[h] += 1
        w[m.alpha[h]] -= 1
        f = m.face_of[h]
    total = sum(w[h] for h in m.faces[outer_face])
    if total == -1:
        w = [-x for x in w]
    elif total != 1:
        raise NotAnnular("outer contour does not wind once")
    return w


def _directed_cycles_upto(m, max_len):
    out = []
    halves_at = [[] for _ in range(m.n_vertices)]
    for h in range(m.n):
        halves_at[m.vertex_of[h]].append(h)

    def dfs(start, v, path_halves, used_edges, visited):
        if len(path_halves) >= max_len:
            return
        for h in halves_at[v]:
            e = m.edge_of[h]
            if e in used_edges:
                continue
            wv = m.head(h)
            if wv == start and path_halves:
                out.append(path_halves + [h])
                continue
            if wv in visited or wv <= start:
                continue
            visited.add(wv)
            dfs(start, wv, path_halves + [h], used_edges | {e}, visited)
            visited.remove(wv)

    for s in range(m.n_vertices):
        dfs(s, s, [], frozenset(), {s})
    for h in range(m.n):
        if m.vertex_of[h] == m.head(h):
            out.append([h])
    return out


def is_annular(am: AnnularMap, strict=False):
    """ell-annular: every cycle winding around the central face has
    length >= ell (the central degree); strict: additionally the only
    winding ell-cycle is the central contour."""
    m = am.map
    ell = am.central_degree
    if am.central_face == m.root_face:
        return False
    w = _seam_winding(m, am.central_face, m.root_face)
    contour = sorted(m.edge_of[h] for h in m.faces[am.central_face])
    for cyc in _directed_cycles_upto(m, ell):
        if sum(w[h] for h in cyc) == 0:
            continue
        if len(cyc) < ell:
            return False
        if strict and len(cyc) == ell and sorted(m.edge_of[h] for h in cyc) != contour:
            return False
    return True


def is_strict_annular(am: AnnularMap):
    return is_annular(am, strict=True)


class _Lift:
    """Finite window of the annular universal cover: half (h, k) has its
    tail on sheet k; crossing the seam shifts sheets by s*w[h]."""

    def __init__(self, m, w, s):
        self.m = m
        self.w = w
        self.s = s
        off = [0] * m.n
        for orbit in m.faces:
            acc = 0
            for h in orbit:
                off[h] = acc
                acc += self.shift(h)
        self._off = off

    def shift(self, h):
        return self.s * self.w[h]

    def head(self, hk):
        return (self.m.head(hk[0]), hk[1] + self.shift(hk[0]))

    def alpha(self, hk):
        return (self.m.alpha[hk[0]], hk[1] + self.shift(hk[0]))

    def face_key(self, hk):
        return (self.m.face_of[hk[0]], hk[1] - self._off[hk[0]])

    def face_orbit(self, key):
        f, k0 = key
        return [(h, k0 + self._off[h]) for h in self.m.faces[f]]


def unwrap_annular(am: AnnularMap, strict) -> Slice:
    """Rebuild the composite slice wrapping to this annular map.

    strict=False inverts positive-tilt wrapping (the seam is the
    leftmost geodesic to +infinity on the lift), strict=True inverts
    negative tilt (-infinity, realized by flipping the seam sign).
    """
    m = am.map
    ell = am.central_degree
    outer = m.root_face
    if outer == am.central_face:
        raise NotAnnular("outer face cannot be central")
    w0 = _seam_winding(m, am.central_face, outer)
    s = 1 if not strict else -1
    lift = _Lift(m, w0, s)
    nv = m.n_vertices
    margin = nv + 2
    K = 2 * nv + ell + 8

    central_vs = {m.vertex_of[h] for h in m.faces[am.central_face]}
    dist = {}
    dq = deque()
    for v in central_vs:
        dist[(v, K)] = 0
        dq.append((v, K))
    while dq:
        v, k = dq.popleft()
        dv = dist[(v, k)]
        for h in m.vertices[v]:
            u, ku = lift.head((h, k))
            if -margin <= ku <= K and (u, ku) not in dist:
                dist[(u, ku)] = dv + 1
                dq.append((u, ku))

    rootv = m.vertex_of[m.root]
    if (rootv, 0) not in dist:
        raise NotAnnular("root cannot reach the far central copies")

    path = []
    tails = [(rootv, 0)]
    tail_set = {(rootv, 0): 0}
    ref = (m.root, 0)
    while True:
        hk = ref
        chosen = None
        v, k = m.vertex_of[hk[0]], hk[1]
        for _ in range(len(m.vertices[v])):
            nxt = lift.head(hk)
            if dist.get(nxt) == dist[(v, k)] - 1:
                chosen = hk
                break
            hk = (_sigma_inv(m, hk[0]), hk[1])
        if chosen is None:
            raise NotAnnular("no descent on the lift")
        path.append(chosen)
        nxt = lift.head(chosen)
        if (nxt[0], nxt[1] - 1) in tail_set:
            tails.append(nxt)
            break
        if nxt in tail_set:
            raise NotAnnular("lift geodesic self-intersects")
        tails.append(nxt)
        tail_set[nxt] = len(tails) - 1
        if dist[nxt] == 0:
            raise NotAnnular("reached the far copies without coalescing")
        ref = lift.alpha(chosen)

    X = tails[-1]
    iX = len(path)
    iY = tail_set[(X[0], X[1] - 1)]
    if X[1] > K - margin:
        raise NotAnnular("lift window too small (coalescence too late)")

    shift_path = [(h, k + 1) for (h, k) in path[:iY]]
    base_arc = []
    acc = 0
    for h in _rotate_to(list(m.faces[outer]), m.root):
        base_arc.append((h, acc))
        acc += lift.shift(h)
    # the lifted outer contour ends at the root copy on sheet acc = +-1;
    # the walk below closes through the sheet-(+1) root copy, so for
    # acc = -1 we traverse the contour copy one sheet up, reversed
    if acc == 1:
        base_walk = [lift.alpha(hk) for hk in reversed(base_arc)]
    else:
        base_walk = [(h, k + 1) for (h, k) in base_arc]
        base_walk = [lift.alpha(hk) for hk in reversed(base_walk)]
        base_walk = base_walk  # orientation fixed below if needed

    walk = (
        list(path[:iX])
        + [lift.alpha(hk) for hk in reversed(shift_path)]
        + base_walk
    )

    # region flood: faces right of the walk, blocked by walk edges
    wall_edges = set()
    for hk in walk:
        a = lift.alpha(hk)
        wall_edges.add(frozenset((hk, a)))
    region = set()
    stack = [lift.face_key(hk) for hk in walk]
    while stack:
        key = stack.pop()
        if key in region:
            continue
        if key[0] == outer:
            raise NotAnnular("region leaked into the outer face")
        region.add(key)
        for hk in lift.face_orbit(key):
            if frozenset((hk, lift.alpha(hk))) in wall_edges:
                continue
            nk = lift.face_key(lift.alpha(hk))
            if nk not in region:
                stack.append(nk)
    got = sorted(k[0] for k in region)
    want = sorted(f for f in range(m.n_faces) if f != outer)
    if got != want:
        raise NotAnnular("region is not a fundamental domain")

    out, new = extract_region(
        [lift.face_orbit(key) for key in region], lift.alpha, walk
    )
    corner_A = new[walk[iX]]
    corner_B = new[walk[0]]
    corner_C = new[walk[iX + iY]]
    sl = Slice(out, corner_A, corner_B, corner_C)
    sl.validate()
    return sl


# ---------------------------------------------------------------------------
# decomposition and recomposition
# ---------------------------------------------------------------------------


def slice_decompose(s: Slice) -> SlicePath:
    """Cut along the leftmost geodesics from the base corners."""
    s.validate()
    m = s.map
    left, base, right = s._segments
    apex = s.apex_vertex
    dist = m.distances_from(apex)
    n = len(base)
    prev = left[-1] if left else (right[-1] if right else base[-1])
    refs = [m.alpha[prev]]
    for b in base[:-1]:
        refs.append(m.alpha[b])
    geos = [leftmost_geodesic(m, ref, dist) for ref in refs]
    geos.append(list(right))  # the unique geodesic C -> A
    base_v = [m.vertex_of[b] for b in base] + [m.head(base[-1])]
    labels = tuple(dist[base_v[0]] - dist[v] for v in base_v)
    slices = []
    for i in range(1, n + 1):
        if labels[i] < labels[i - 1]:
            slices.append(None)
            continue
        g_prev, g_cur = geos[i - 1], geos[i]
        b = base[i - 1]
        if g_prev and m.edge_of[g_prev[0]] == m.edge_of[b]:
            slices.append(empty_slice())
            continue
        verts_prev = [m.vertex_of[h] for h in g_prev] + [apex]
        verts_cur = {m.vertex_of[h]: j for j, h in enumerate(g_cur)}
        verts_cur[apex] = len(g_cur)
        t1 = next(j for j, v in enumerate(verts_prev) if v in verts_cur)
        t2 = verts_cur[verts_prev[t1]]
        walk = (
            g_prev[:t1]
            + [m.alpha[h] for h in reversed(g_cur[:t2])]
            + [m.alpha[b]]
        )
        walls = {m.edge_of[h] for h in walk}
        region = set()
        stack = [m.face_of[h] for h in walk]
        while stack:
            f = stack.pop()
            if f in region:
                continue
            if f == s.outer_face:
                raise NotASlice("decomposition region leaked to the boundary")
            region.add(f)
            for h in m.faces[f]:
                if m.edge_of[h] in walls:
                    continue
                g = m.face_of[m.alpha[h]]
                if g not in region:
                    stack.append(g)
        out, new = extract_region(
            [m.faces[f] for f in region], lambda h: m.alpha[h], walk
        )
        corner_A = new[walk[t1]]
        corner_B = new[walk[0]]
        corner_C = new[walk[-1]]
        el = Slice(out, corner_A, corner_B, corner_C)
        el.validate()
        if el.width != 1 or el.tilt != 1:
            raise NotASlice("decomposition produced a non-elementary piece")
        slices.append(el)
    return SlicePath(labels, tuple(slices))


def glue_slices(s1: Slice, s2: Slice) -> Slice:
    """Glue s2 to the right of s1 along the common prefix (from the
    base) of s1's right boundary and s2's left boundary."""
    m1, m2 = s1.map, s2.map
    left1, base1, right1 = s1._segments
    left2, base2, right2 = s2._segments
    L = min(len(right1), len(left2))
    off = m1.n

    def sh(h):
        return h + off

    subst = {}
    for k in range(1, L + 1):
        r = right1[k - 1]  # upward half in s1, level k-1 -> k
        ldown = left2[len(left2) - k]  # downward half in s2, k -> k-1
        subst[r] = sh(m2.alpha[ldown])
        subst[m1.alpha[r]] = sh(ldown)

    def sub(h):
        return subst.get(h, h)

    def alpha_union(x):
        return sh(m2.alpha[x - off]) if x >= off else m1.alpha[x]

    orbits = []
    for f in range(m1.n_faces):
        if f == s1.outer_face:
            continue
        orbits.append([sub(h) for h in m1.faces[f]])
    for f in range(m2.n_faces):
        if f == s2.outer_face:
            continue
        orbits.append([sh(h) for h in m2.faces[f]])
    new_outer = (
        [sh(h) for h in left2[: len(left2) - L]]
        + [sub(h) for h in left1]
        + [sub(h) for h in base1]
        + [sh(h) for h in base2]
        + [sh(h) for h in right2]
        + [sub(h) for h in right1[L:]]
    )
    orbits.append(new_outer)
    pairs = {}
    for orbit in orbits:
        for x in orbit:
            pairs[x] = sub(alpha_union(x))
    out, new = _compress_build(orbits, pairs, new_outer[0])

    k = len(new_outer)
    pos_base1 = len(left2) - L + len(left1)
    corner_A = new[pairs[new_outer[-1]]]
    corner_B = new[pairs[new_outer[(pos_base1 - 1) % k]]]
    corner_C = new[pairs[new_outer[pos_base1 + len(base1) + len(base2) - 1]]]
    return Slice(out, corner_A, corner_B, corner_C)


def slice_recompose(p: SlicePath) -> Slice:
    """Inverse of slice_decompose."""
    pieces = [trivial_slice() if s is None else s for s in p.slices]
    cur = pieces[0]
    for nxt in pieces[1:]:
        cur = glue_slices(cur, nxt)
    try:
        cur.validate()
    except NotASlice as e:
        raise IncompatibleDepths(str(e)) from e
    if cur.tilt != p.tilt or cur.width != p.width:
        raise IncompatibleDepths("recomposed slice does not match the path")
    return cur


def enumerate_slices(boundary_maps):
    """All valid slices (map, A, B, C) on the given rooted boundary maps
    (root face = outer); corners range over the outer corners with
    coincidences allowed.  Deduplicates by canonical form."""
    seen = {}
    for m in boundary_maps:
        outer = m.root_face
        corners = [m.alpha[h] for h in m.faces[outer]]
        for A in corners:
            for B in corners:
                for C in corners:
                    sl = Slice(m, A, B, C)
                    try:
                        sl.validate()
                    except NotASlice:
                        continue
                    key = sl.canonical()
                    if key not in seen:
                        seen[key] = sl
    return [seen[k] for k in sorted(seen)]
