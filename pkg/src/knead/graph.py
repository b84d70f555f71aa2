"""The graph obtained by gluing the endpoints of Omega, and induced maps on it."""
from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .errors import (InconsistentGluing, InputError, InteriorResidue,
                     NotInCycleSpace, UnknownBoundaryPoint, VertexNotCovered)
from .pm_domain import (DEFAULT_LAP_BUDGET, LEFT, RIGHT, FormalVector, Omega,
                        rational)
from .series import TruncatedSeries, det_id_minus_zM


@dataclass(frozen=True)
class Gluing:
    """Classes of boundary points identified to one point of G."""
    classes: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(
            tuple(sorted({rational(x) for x in cls})) for cls in self.classes))


def _rref_nullspace(rows, ncols):
    """Basis of {x : rows @ x = 0} over Q, scaled to primitive integer vectors."""
    a = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        a[r] = [v / pv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fcol]
        basis.append(_primitive(v))
    return basis


def _primitive(v):
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    g = g or 1
    ints = [x // g for x in ints]
    first = next((x for x in ints if x), 1)
    return [-x for x in ints] if first < 0 else ints


def solve_exact(columns, target):
    """Coordinates x with sum_k x_k columns[k] = target, or None."""
    n = len(target)
    k = len(columns)
    aug = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])]
           for i in range(n)]
    r = 0
    piv = []
    for c in range(k):
        p = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [vi - f * vr for vi, vr in zip(aug[i], aug[r])]
        piv.append(c)
        r += 1
    if any(aug[i][k] != 0 for i in range(r, n)):
        return None
    x = [Fraction(0)] * k
    for i, c in enumerate(piv):
        x[c] = aug[i][k]
    return x


class GluedGraph:
    """Edges are the intervals of Omega oriented a_i -> b_i; points are classes."""

    def __init__(self, omega, gluing):
        boundary = set(omega.boundary)
        seen = {}
        classes = []
        for cls in gluing.classes:
            for x in cls:
                if x not in boundary:
                    raise UnknownBoundaryPoint(f"{x} is not a boundary point of Omega")
                if x in seen:
                    raise InputError(f"boundary point {x} appears in two classes")
                seen[x] = len(classes)
            if cls:
                classes.append(tuple(cls))
        for x in omega.boundary:
            if x not in seen:
                seen[x] = len(classes)
                classes.append((x,))
        self.omega = omega
        self.classes = classes
        self.class_of = seen
        self.valence = [len(c) for c in classes]
        self.vertices = [i for i, v in enumerate(self.valence) if v != 2]
        self.edges = list(omega.intervals)
        # components by union-find over classes
        parent = list(range(len(classes)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for a, b in self.edges:
            ra, rb = find(seen[a]), find(seen[b])
            if ra != rb:
                parent[ra] = rb
        roots = sorted({find(i) for i in range(len(classes))},
                       key=lambda r: min(classes[r]))
        comp_index = {r: k for k, r in enumerate(roots)}
        self.class_component = [comp_index[find(i)] for i in range(len(classes))]
        self.edge_component = [self.class_component[seen[a]] for a, _ in self.edges]
        self.n_components = len(roots)
        self.h1_rank = len(self.edges) - len(classes) + self.n_components
        incidence = [[0] * len(self.edges) for _ in classes]
        for i, (a, b) in enumerate(self.edges):
            incidence[seen[b]][i] += 1
            incidence[seen[a]][i] -= 1
        self.incidence = incidence
        self.cycle_basis = _rref_nullspace(incidence, len(self.edges))
        if len(self.cycle_basis) != self.h1_rank:
            raise AssertionError("cycle basis size differs from E - V + C")

    def representative(self, x):
        """Canonical point of Omega standing for pi(x)."""
        k = self.class_of.get(x)
        return x if k is None else self.classes[k][0]

    def is_vertex_point(self, y):
        k = self.class_of.get(y)
        return k is not None and self.valence[k] != 2

    def component_of_point(self, x):
        return self.edge_component[self.omega.component_of(x)]

    def germs(self, y):
        """One-sided germs at the point pi(y) of G, as (point of Omega, side)."""
        k = self.class_of.get(y)
        if k is None:
            return [(y, LEFT), (y, RIGHT)]
        out = []
        for x in self.classes[k]:
            out.append((x, RIGHT) if self.omega.is_left_end(x) else (x, LEFT))
        return out

    def summary(self):
        return {
            "classes": [[str(x) for x in c] for c in self.classes],
            "valence": self.valence,
            "vertices": [[str(x) for x in self.classes[k]] for k in self.vertices],
            "edges": len(self.edges),
            "components": self.n_components,
            "h1_rank": self.h1_rank,
            "cycle_basis": self.cycle_basis,
        }


def build_graph(omega, gluing=Gluing()):
    if not isinstance(omega, Omega):
        omega = Omega(tuple(omega))
    if not isinstance(gluing, Gluing):
        gluing = Gluing(tuple(tuple(c) for c in gluing))
    return GluedGraph(omega, gluing)


class InducedMap:
    """Graph map f with pi o F = f o pi, after the continuity checks."""

    def __init__(self, F, graph):
        self.F = F
        self.graph = graph

    @property
    def critical_points(self):
        """pi(C_F) as canonical points, sorted."""
        return sorted({self.graph.representative(c) for c in self.F.critical})

    def germ_step(self, germ):
        x, side = germ
        b = self.F.branch_on_side(x, side)
        return b(x), side * b.sign

    def image(self, y):
        """f at the canonical point y."""
        if not self.F.is_critical(y):
            return self.graph.representative(self.F(y))
        x, side = self.graph.germs(y)[0]
        return self.graph.representative(self.germ_step((x, side))[0])

    def orbit(self, y, steps):
        out = [y]
        for _ in range(steps):
            y = self.image(y)
            out.append(y)
        return out

    def germ_map(self, y, n):
        """Images of the germs at y under f^n, in the order of graph.germs(y)."""
        out = []
        for g in self.graph.germs(y):
            for _ in range(n):
                g = self.germ_step(g)
            out.append(g)
        return out

    def is_negative_fixed(self, y, n):
        """f^n(y) = y, y is not a vertex and f^n swaps its two germs."""
        if self.graph.is_vertex_point(y):
            return False
        g1, g2 = self.graph.germs(y)
        h1, h2 = self.germ_map(y, n)
        return h1 == g2 and h2 == g1

    def h0_matrix(self):
        k = self.graph.n_components
        mat = [[0] * k for _ in range(k)]
        for comp in range(k):
            edge = self.graph.edge_component.index(comp)
            a, b = self.graph.edges[edge]
            br = next(br for br in self.F.branches if a <= br.left and br.right <= b)
            y = br((br.left + br.right) / 2)
            mat[self.graph.component_of_point(y)][comp] = 1
        return mat

    def edge_chain(self, i):
        """F_#1(b_i - a_i) as a formal vector of points of Omega."""
        a, b = self.graph.edges[i]
        terms = {}
        for c in self.F.critical:
            if a < c <= b:
                v = self.F.limit(c, LEFT)
                terms[v] = terms.get(v, 0) + 1
            if a <= c < b:
                v = self.F.limit(c, RIGHT)
                terms[v] = terms.get(v, 0) - 1
        return FormalVector(terms)

    def h1_matrix(self):
        basis = self.graph.cycle_basis
        boundary = set(self.graph.omega.boundary)
        chains = [self.edge_chain(i) for i in range(len(self.graph.edges))]
        cols = []
        for lam in basis:
            w = FormalVector.zero()
            for li, ch in zip(lam, chains):
                if li:
                    w = w + ch.scale(li)
            residue = [x for x, c in w.items() if x not in boundary]
            if residue:
                raise InteriorResidue(
                    f"image of cycle {lam} keeps interior points {residue}")
            mu = []
            for a, b in self.graph.edges:
                if w.coeff(a) != -w.coeff(b):
                    raise NotInCycleSpace(
                        f"image of cycle {lam} is not a chain on edge [{a},{b}]")
                mu.append(w.coeff(b))
            x = solve_exact(basis, mu)
            if x is None:
                raise NotInCycleSpace(f"image {mu} of cycle {lam} is not a cycle")
            cols.append(x)
        r = len(basis)
        return [[_int_or_frac(cols[j][i]) for j in range(r)] for i in range(r)]


def _int_or_frac(x):
    return x.numerator if x.denominator == 1 else x


def validate_induced(F, gluing=Gluing(), graph=None):
    """Check that F induces a continuous map on the glued graph."""
    if graph is None:
        graph = build_graph(F.domain, gluing)
    if graph.omega != F.domain:
        raise InputError("gluing and map live on different Omegas")
    f = InducedMap(F, graph)
    for k, cls in enumerate(graph.classes):
        targets = set()
        for germ in graph.germs(cls[0]):
            targets.add(graph.representative(f.germ_step(germ)[0]))
        if len(targets) > 1:
            raise InconsistentGluing(
                f"glued point {[str(x) for x in cls]} has one-sided images in "
                f"different points of G: {sorted(str(t) for t in targets)}")
    for c in F.critical:
        if c in graph.class_of:
            continue
        u = graph.representative(F.limit(c, LEFT))
        v = graph.representative(F.limit(c, RIGHT))
        if u != v:
            raise InconsistentGluing(
                f"F({c}-) = {F.limit(c, LEFT)} and F({c}+) = {F.limit(c, RIGHT)} "
                "are different points of G")
    boundary_classes = {graph.class_of[x] for x in graph.omega.boundary}
    if any(k not in boundary_classes for k in graph.vertices):
        raise VertexNotCovered("a vertex of G is not the image of a boundary point")
    return f


@dataclass
class SpectralRadius:
    value: float
    charpoly: list
    residual: float

    def as_dict(self):
        return {"value": self.value,
                "charpoly": [str(c) for c in self.charpoly],
                "residual": self.residual}


def charpoly(A):
    """Coefficients c_0..c_n of det(lambda Id - A), highest degree first."""
    n = len(A)
    if n == 0:
        return [1]
    det = det_id_minus_zM(
        [[TruncatedSeries.constant(x, n) for x in row] for row in A], n)
    return list(det.coeffs)


def spectral_radius(A):
    n = len(A)
    if n == 0:
        return SpectralRadius(0.0, [1], 0.0)
    cp = charpoly(A)
    roots = np.roots([float(c) for c in cp])
    if len(roots) == 0:
        return SpectralRadius(0.0, cp, 0.0)
    lam = max(roots, key=abs)
    poly = np.poly1d([float(c) for c in cp])
    return SpectralRadius(float(abs(lam)), cp, float(abs(poly(lam))))


def homological_entropy(f):
    r = spectral_radius(f.h1_matrix()).value
    return math.log(max(1.0, r))


def functoriality_check(f, n_max=4, budget=DEFAULT_LAP_BUDGET):
    """h1_matrix(f^n) against h1_matrix(f)^n; returns the failing n."""
    A = f.h1_matrix()
    r = len(A)
    power = [[int(i == j) for j in range(r)] for i in range(r)]
    bad = []
    for n in range(1, n_max + 1):
        power = [[sum(A[i][k] * power[k][j] for k in range(r)) for j in range(r)]
                 for i in range(r)]
        g = validate_induced(f.F.iterate(n, budget), graph=f.graph)
        if g.h1_matrix() != power:
            bad.append(n)
    return bad
