"""The suitably-labeled-map <-> mobile correspondence and its relatives.

Forward: one unlabeled vertex per face; every edge of the labeled map,
read from its smaller endpoint, hangs a mobile edge from its larger
endpoint into the face on its left; local minima disappear.  Backward:
successor chaining along face contours, one new minimum vertex per
mobile face.  Specializations: the pointed-quadrangulation <-> labeled
tree correspondence (degree-2 unlabeled vertices suppressed) and the
three-source labeling feeding the three-point function.

Chirality conventions follow mapcore: sigma is counterclockwise, the
face permutation walks contours clockwise (face on the right), and the
corner h -> sigma[h] belongs to face_of[alpha[h]].  The successor scan
direction and in-corner arc order below are pinned by the exhaustive
round-trip tests and the hand-checked one-face quadrangulation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .mapcore import (
    MapError,
    PlanarMap,
    build_map,
    geodesic_labeling,
    is_suitable_labeling,
    local_minima,
    map_from_json,
    map_to_json,
)

__all__ = [
    "NotSuitablyLabeled",
    "MalformedMobile",
    "VerticesNotDistinct",
    "LabeledMap",
    "Mobile",
    "check_mobile",
    "map_to_mobile",
    "mobile_to_map",
    "WellLabeledTree",
    "cvs_forward",
    "cvs_backward",
    "three_source_labeling",
    "ThreePointParams",
]


class NotSuitablyLabeled(MapError):
    pass


class MalformedMobile(MapError):
    pass


class VerticesNotDistinct(MapError):
    pass


@dataclass(frozen=True)
class LabeledMap:
    map: PlanarMap
    labels: tuple

    def __post_init__(self):
        if len(self.labels) != self.map.n_vertices:
            raise MapError("one label per vertex required")

    def canonical(self):
        """Code + labels read off in canonical half-edge order."""
        m = self.map
        code = m.canonical_code
        # labels keyed by canonical vertex discovery order
        order = []
        seen = set()
        new = {}
        stack = [m.root]
        # reproduce the BFS relabeling to fetch vertex order
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
        for h in orderh:
            v = m.vertex_of[h]
            if v not in seen:
                seen.add(v)
                order.append(v)
        return code, tuple(self.labels[v] for v in order)

    def to_json(self):
        return map_to_json(self.map, {"labels": list(self.labels)})

    @classmethod
    def from_json(cls, doc):
        return cls(map_from_json(doc), tuple(doc["labels"]))


@dataclass(frozen=True)
class Mobile:
    map: PlanarMap
    labels: dict  # labeled vertex -> integer label
    unlabeled: frozenset

    def canonical(self):
        m = self.map
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
        marks = []
        seen = set()
        for h in orderh:
            v = m.vertex_of[h]
            if v not in seen:
                seen.add(v)
                marks.append(self.labels.get(v))
        return m.canonical_code, tuple(marks)

    def to_json(self):
        return map_to_json(
            self.map,
            {
                "labels": {str(v): l for v, l in sorted(self.labels.items())},
                "unlabeled": sorted(self.unlabeled),
            },
        )

    @classmethod
    def from_json(cls, doc):
        return cls(
            map_from_json(doc),
            {int(v): l for v, l in doc["labels"].items()},
            frozenset(doc["unlabeled"]),
        )


def check_mobile(mb: Mobile):
    """Structural mobile axioms: bipartition labeled/unlabeled, and the
    clockwise rule around unlabeled vertices (next-clockwise neighbor
    label ell' >= ell - 1)."""
    m = mb.map
    for h, a in m.edges:
        u, v = m.vertex_of[h], m.vertex_of[a]
        if (u in mb.unlabeled) == (v in mb.unlabeled):
            raise MalformedMobile("edges must join labeled and unlabeled vertices")
    for u in mb.unlabeled:
        cyc = m.vertices[u]
        k = len(cyc)
        for i in range(k):
            # sigma is counterclockwise; clockwise neighbors are sigma^-1
            ell = mb.labels[m.head(cyc[i])]
            ell_next_cw = mb.labels[m.head(cyc[(i - 1) % k])]
            if ell_next_cw < ell - 1:
                raise MalformedMobile("clockwise label rule violated")
    if set(mb.labels) | set(mb.unlabeled) != set(range(m.n_vertices)):
        raise MalformedMobile("labels/unlabeled must partition the vertices")


def map_to_mobile(lm: LabeledMap) -> Mobile:
    """Bijection from suitably labeled maps to mobiles (root carried)."""
    m, lab = lm.map, lm.labels
    if m.n == 0:
        raise NotSuitablyLabeled("need at least one edge")
    if not is_suitable_labeling(m, lab):
        raise NotSuitablyLabeled("adjacent labels must differ by exactly 1")

    nE = m.n_edges
    # mobile half-edges: edge i -> 2i at the face vertex, 2i+1 at the
    # larger-labeled endpoint
    q_half = [0] * nE  # primal q-side half of each edge
    for i, (h, a) in enumerate(m.edges):
        q_half[i] = h if lab[m.vertex_of[h]] > lab[m.vertex_of[a]] else a

    sigma = [0] * (2 * nE)
    alpha = [0] * (2 * nE)
    for i in range(nE):
        alpha[2 * i] = 2 * i + 1
        alpha[2 * i + 1] = 2 * i

    def close_cycle(halves):
        for x, y in zip(halves, halves[1:] + halves[:1]):
            sigma[x] = y

    is_q = [False] * m.n
    for i in range(nE):
        is_q[q_half[i]] = True
    edge_of = m.edge_of

    # around each face vertex: spokes in reverse contour order (contour
    # is clockwise, rotation is counterclockwise)
    for f, orbit in enumerate(m.faces):
        spokes = [2 * edge_of[h] for h in orbit if is_q[h]]
        close_cycle(list(reversed(spokes)))

    # around each labeled vertex: ends ordered by their corner position
    for v, cyc in enumerate(m.vertices):
        ends = [2 * edge_of[h] + 1 for h in cyc if is_q[h]]
        close_cycle(ends)

    # root transport: the mobile half of the root edge, on the larger
    # side iff the primal root leaves the larger endpoint
    re = edge_of[m.root]
    root = 2 * re + 1 if m.root == q_half[re] else 2 * re

    mins = set(local_minima(m, lab))
    mob = build_map(sigma, alpha, root)
    labels = {}
    unlabeled = set()
    for i in range(nE):
        qv = m.vertex_of[q_half[i]]
        labels[mob.vertex_of[2 * i + 1]] = lab[qv]
        unlabeled.add(mob.vertex_of[2 * i])
    if len(unlabeled) != m.n_faces:
        raise MalformedMobile("face vertices collapsed; construction broken")
    assert mob.n_vertices == m.n_vertices - len(mins) + m.n_faces
    return Mobile(mob, labels, frozenset(unlabeled))


def mobile_to_map(mb: Mobile) -> LabeledMap:
    """Inverse bijection by successor chaining along face contours."""
    m = mb.map
    lab = mb.labels
    check_mobile(mb)

    arcs = []  # (source corner, target corner or ('min', face))
    arc_at = {}  # source corner -> arc index
    incoming = {}  # corner -> list of (backward distance, arc index)
    min_spokes = {}  # face -> list of arc indices in contour order
    corner_face_pos = {}

    for f, orbit in enumerate(m.faces):
        corners = [m.alpha[h] for h in orbit]
        k = len(corners)
        labeled_pos = [i for i, c in enumerate(corners) if m.vertex_of[c] in lab]
        if not labeled_pos:
            raise MalformedMobile("face without labeled corners")
        for i, c in enumerate(corners):
            corner_face_pos[c] = (f, i)
        for i in labeled_pos:
            c = corners[i]
            ell = lab[m.vertex_of[c]]
            target = None
            # successor: first corner labeled ell-1 AGAINST the contour
            # orientation (pinned by the exhaustive round-trip tests)
            for step in range(1, k):
                j = (i - step) % k
                cj = corners[j]
                if m.vertex_of[cj] in lab and lab[m.vertex_of[cj]] == ell - 1:
                    target = (j, step)
                    break
            a = len(arcs)
            arc_at[c] = a
            if target is None:
                arcs.append((c, ("min", f)))
                min_spokes.setdefault(f, []).append(a)
            else:
                j, step = target
                arcs.append((c, corners[j]))
                # scan distance from the source corner back to the target
                incoming.setdefault(corners[j], []).append((step, a))

    # face minima sanity: every face needs a minimum corner
    face_min = {}
    for f, orbit in enumerate(m.faces):
        vals = [lab[m.vertex_of[m.alpha[h]]] for h in orbit if m.vertex_of[m.alpha[h]] in lab]
        face_min[f] = min(vals)
    for f in range(m.n_faces):
        if f not in min_spokes:
            raise MalformedMobile("face without minimum corners")

    nA = len(arcs)
    sigma = [0] * (2 * nA)
    alpha = [0] * (2 * nA)
    for a in range(nA):
        alpha[2 * a] = 2 * a + 1
        alpha[2 * a + 1] = 2 * a

    def close_cycle(halves):
        for x, y in zip(halves, halves[1:] + halves[:1]):
            sigma[x] = y

    # rotations at surviving labeled vertices: per corner (in sigma order
    # around the vertex): the outgoing end, then incoming ends with the
    # most distant source first
    for v, cyc in enumerate(m.vertices):
        if v not in lab:
            continue
        ends = []
        for c in cyc:
            ends.append(2 * arc_at[c])
            for _, a in sorted(incoming.get(c, []), reverse=True):
                ends.append(2 * a + 1)
        close_cycle(ends)

    # rotations at the new minimum vertices: spokes in reverse contour order
    for f, spoke_arcs in min_spokes.items():
        close_cycle([2 * a + 1 for a in reversed(spoke_arcs)])

    # root transport (inverse of map_to_mobile's rule)
    r = m.root
    if m.vertex_of[r] in lab:
        root = 2 * arc_at[r]
    else:
        root = 2 * arc_at[m.alpha[r]] + 1

    out = build_map(sigma, alpha, root)
    labels = [None] * out.n_vertices
    for a, (c, tgt) in enumerate(arcs):
        labels[out.vertex_of[2 * a]] = lab[m.vertex_of[c]]
        if isinstance(tgt, tuple) and tgt[0] == "min":
            labels[out.vertex_of[2 * a + 1]] = face_min[tgt[1]] - 1
        else:
            labels[out.vertex_of[2 * a + 1]] = lab[m.vertex_of[tgt]]
    if any(l is None for l in labels):
        raise MalformedMobile("unlabeled vertex survived inversion")
    return LabeledMap(out, tuple(labels))


# ---------------------------------------------------------------------------
# pointed quadrangulations <-> well-labeled trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WellLabeledTree:
    """Plane tree with integer labels, adjacent differing by at most 1,
    all labels >= 1; `at_unlabeled_side` records on which side of the
    suppressed degree-2 vertex the transported root sat."""

    map: PlanarMap
    labels: tuple
    at_unlabeled_side: bool = False

    def canonical(self):
        lm = LabeledMap(self.map, self.labels)
        code, marks = lm.canonical()
        return code, marks, self.at_unlabeled_side


def cvs_forward(q: PlanarMap, origin: int) -> WellLabeledTree:
    """Pointed rooted quadrangulation -> well-labeled tree (labels are
    distances to the origin; min label 1)."""
    if any(d != 4 for d in q.face_degrees()):
        raise MapError("cvs_forward expects a quadrangulation")
    lab = tuple(geodesic_labeling(q, origin))
    mb = map_to_mobile(LabeledMap(q, lab))
    m = mb.map
    if m.n_faces != 1:
        raise MapError("geodesic labeling must give a tree mobile")
    # suppress the degree-2 unlabeled vertices
    for u in mb.unlabeled:
        if len(m.vertices[u]) != 2:
            raise MapError("unlabeled vertex of degree != 2 in a quadrangulation mobile")
    labeled_halves = sorted(
        h for h in range(m.n) if m.vertex_of[h] in mb.labels
    )
    idx = {h: i for i, h in enumerate(labeled_halves)}
    sigma = [0] * len(labeled_halves)
    alpha = [0] * len(labeled_halves)
    for h in labeled_halves:
        sigma[idx[h]] = idx[m.sigma[h]]
        # hop across the degree-2 unlabeled vertex
        over = m.alpha[m.sigma[m.alpha[h]]]
        alpha[idx[h]] = idx[over]
    at_unlabeled = m.vertex_of[m.root] not in mb.labels
    root = idx[m.root] if not at_unlabeled else idx[m.alpha[m.root]]
    tree = build_map(sigma, alpha, root)
    labels = [0] * tree.n_vertices
    for h in labeled_halves:
        labels[tree.vertex_of[idx[h]]] = mb.labels[m.vertex_of[h]]
    return WellLabeledTree(tree, tuple(labels), at_unlabeled)


def cvs_backward(t: WellLabeledTree):
    """Well-labeled tree -> (pointed rooted quadrangulation, origin)."""
    m, lab = t.map, t.labels
    if m.n_faces != 1:
        raise MapError("input is not a tree")
    if min(lab) < 1:
        raise MapError("well-labeled tree needs labels >= 1")
    if any(abs(lab[m.vertex_of[h]] - lab[m.vertex_of[a]]) > 1 for h, a in m.edges):
        raise MapError("adjacent tree labels must differ by at most 1")
    # re-insert a degree-2 unlabeled vertex in the middle of each edge
    nE = m.n_edges
    sigma = [0] * (4 * nE)
    alpha = [0] * (4 * nE)
    # halves 0..2nE-1 keep their ids at labeled vertices; edge i gets
    # unlabeled halves 2nE+2i (toward half h) and 2nE+2i+1 (toward alpha h)
    for h in range(2 * nE):
        sigma[h] = m.sigma[h]
    for i, (h, a) in enumerate(m.edges):
        u1, u2 = 2 * nE + 2 * i, 2 * nE + 2 * i + 1
        alpha[h] = u1
        alpha[u1] = h
        alpha[a] = u2
        alpha[u2] = a
        sigma[u1] = u2
        sigma[u2] = u1
    root = m.root if not t.at_unlabeled_side else alpha[m.root]
    mob = build_map(sigma, alpha, root)
    labels = {}
    unlabeled = set()
    for h in range(2 * nE):
        labels[mob.vertex_of[h]] = lab[m.vertex_of[h]]
    for h in range(2 * nE, 4 * nE):
        unlabeled.add(mob.vertex_of[h])
    lm = mobile_to_map(Mobile(mob, labels, frozenset(unlabeled)))
    origin = lm.labels.index(0)
    assert all(d == 4 for d in lm.map.face_degrees())
    return lm.map, origin


# ---------------------------------------------------------------------------
# three-source labeling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThreePointParams:
    s: int
    t: int
    u: int

    @property
    def d12(self):
        return self.s + self.t

    @property
    def d23(self):
        return self.t + self.u

    @property
    def d31(self):
        return self.u + self.s

    @property
    def aligned(self):
        return 0 in (self.s, self.t, self.u)


def three_source_labeling(q: PlanarMap, v1, v2, v3):
    """Suitable labeling min(d(.,v1)-s, d(.,v2)-t, d(.,v3)-u) and its
    parameters; the sources are the expected local minima (two of them
    in the aligned case)."""
    if len({v1, v2, v3}) != 3:
        raise VerticesNotDistinct("three distinct vertices required")
    d1 = q.distances_from(v1)
    d2 = q.distances_from(v2)
    d3 = q.distances_from(v3)
    d12, d23, d31 = d1[v2], d2[v3], d3[v1]
    if (d12 + d23 + d31) % 2:
        raise MapError("odd distance sum; map not bipartite?")
    s = (d12 - d23 + d31) // 2
    t = (d12 + d23 - d31) // 2
    u = (-d12 + d23 + d31) // 2
    params = ThreePointParams(s, t, u)
    lab = tuple(
        min(d1[v] - s, d2[v] - t, d3[v] - u) for v in range(q.n_vertices)
    )
    lm = LabeledMap(q, lab)
    if not is_suitable_labeling(q, lab):
        raise MapError("three-source labeling came out non-suitable")
    return lm, params
