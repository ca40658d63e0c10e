"""Cut locus, conjugate locus, and Schubert variety tests for the chart origin.

The cut locus of the origin plane O in the compact space is the set of planes
with a stationary angle of pi/2, equivalently the planes whose overlap with O
vanishes.  Membership is decided twice, by the angle spectrum and by the
normalized minor pairing, and the two answers must agree.

Conjugate points along a geodesic with Cartan direction h (the singular
values of the velocity) occur at an explicit list of radii built from sums,
differences, doubles, and plain reciprocals of the h entries.  A
finite-difference Jacobian of the exponential provides an independent check:
its smallest singular value collapses exactly at those radii.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernel
from .errors import ChartEscapeError, ConsistencyError
from .manifold import (AngleSpectrum, ChartPoint, Plane, TangentCoord, base_plane, exp0,
                       geodesic_group, plucker, plucker_pairing, stationary_angles_svd,
                       cos_cayley_planes, tan_pole_distance)

ANGLE_TOL = 1e-6
PAIRING_TOL = 1e-8
DENOM_TOL = 1e-12


@dataclass(slots=True)
class SchubertSymbol:
    """Nondecreasing tuple w of length n with entries in 0..m.

    The associated variety consists of the n-planes X with
    dim(X intersect V_{w_i + i}) >= i for every i, where V_1 < V_2 < ... is a
    complete flag of coordinate subspaces.
    """

    w: tuple[int, ...]
    m: int

    def __post_init__(self):
        self.w = tuple(int(v) for v in self.w)
        if len(self.w) == 0:
            raise ValueError("symbol must have at least one entry")
        if any(b < a for a, b in zip(self.w, self.w[1:])):
            raise ValueError(f"symbol entries must be nondecreasing, got {self.w}")
        if self.w[0] < 0 or self.w[-1] > self.m:
            raise ValueError(f"symbol entries must lie in 0..{self.m}, got {self.w}")

    @property
    def n(self) -> int:
        return len(self.w)

    @property
    def big_n(self) -> int:
        return self.n + self.m

    def codimension(self) -> int:
        return sum(self.m - v for v in self.w)


def jumps(symbol: SchubertSymbol) -> tuple[int, ...]:
    """1-based positions where the symbol strictly increases, plus n."""
    w, n = symbol.w, symbol.n
    out = [i + 1 for i in range(n - 1) if w[i] < w[i + 1]]
    out.append(n)
    return tuple(out)


def v_pl_symbol(p: int, l: int, n: int, m: int) -> SchubertSymbol:
    """Symbol of the planes meeting the first p flag vectors in dimension >= l:
    p - l repeated l times, then m repeated n - l times."""
    if not 1 <= l <= n:
        raise ValueError(f"need 1 <= l <= n, got l={l}, n={n}")
    if not l <= p <= m + l:
        raise ValueError(f"need l <= p <= m + l, got p={p}")
    return SchubertSymbol(w=(p - l,) * l + (m,) * (n - l), m=m)


def cut_locus_symbol(n: int, m: int) -> SchubertSymbol:
    """Symbol of the cut locus of the origin: (m-1, m, ..., m) against the
    flag that starts with the orthogonal complement of the origin plane."""
    if m < 1:
        raise ValueError("need m >= 1")
    return SchubertSymbol(w=(m - 1,) + (m,) * (n - 1), m=m)


def flag_order(symbol: SchubertSymbol, flag: str = "standard") -> tuple[int, ...]:
    """0-based ordering of the coordinate vectors generating the flag.

    standard: e_1, ..., e_N in place.
    perp: the complement block e_{n+1}, ..., e_N first, then e_1, ..., e_n;
        turns the symbol of v_pl_symbol into exactly the planes meeting the
        span of the first p complement vectors in dimension >= l.
    chart: interleaved so that the i-th pivot of the symbol is preceded by
        exactly w_i complement vectors; staircase samples built row by row in
        this order always satisfy the membership conditions.
    """
    n, m = symbol.n, symbol.m
    if flag == "standard":
        return tuple(range(n + m))
    if flag == "perp":
        return tuple(range(n, n + m)) + tuple(range(n))
    if flag == "chart":
        order: list[int] = []
        prev = 0
        for i in range(n):
            order.extend(n + j for j in range(prev, symbol.w[i]))
            order.append(i)
            prev = symbol.w[i]
        order.extend(n + j for j in range(prev, m))
        return tuple(order)
    raise ValueError(f"unknown flag {flag!r}; choose standard, perp, or chart")


def schubert_membership(plane: Plane, symbol: SchubertSymbol, tol: float = 1e-9,
                        flag: str = "standard") -> bool:
    """Whether the plane satisfies every incidence condition of the symbol.

    dim(X intersect V_p) is read off as n + p - rank of the basis rows stacked
    on the first p flag vectors.
    """
    n, m = symbol.n, symbol.m
    if plane.basis.shape != (n, n + m):
        raise ValueError(f"plane shape {plane.basis.shape} does not match symbol ({n},{n + m})")
    order = flag_order(symbol, flag)
    eye = np.eye(n + m, dtype=complex)
    for i in range(n):
        p = symbol.w[i] + i + 1
        stacked = np.vstack([plane.basis, eye[list(order[:p])]])
        meet = n + p - kernel.rank_tol(stacked, tol)
        if meet < i + 1:
            return False
    return True


def schubert_generic_sample(symbol: SchubertSymbol, seed=None,
                            flag: str = "chart") -> Plane:
    """Random plane in the open cell of the variety: row i is the pivot flag
    vector at position w_i + i plus a random combination of the earlier ones."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n, m = symbol.n, symbol.m
    order = flag_order(symbol, flag)
    basis = np.zeros((n, n + m), dtype=complex)
    for i in range(n):
        k = symbol.w[i] + i
        basis[i, order[k]] = 1.0
        for j in range(k):
            basis[i, order[j]] = rng.standard_normal() + 1j * rng.standard_normal()
    return Plane(basis)


@dataclass(slots=True)
class LocusVerdict:
    """Outcome of the two-route cut locus test."""

    in_locus: bool
    max_angle: float
    pairing_abs: float


def cut_locus_test(plane: Plane, angle_tol: float = ANGLE_TOL,
                   pairing_tol: float = PAIRING_TOL) -> LocusVerdict:
    """Decide whether a plane lies in the cut locus of the origin.

    Route one reads the largest stationary angle against the origin plane;
    route two reads the minor pairing with the origin, normalized by the
    coordinate norms.  The plane is in the locus when the angle reaches pi/2,
    equivalently when the pairing vanishes.  Disagreement between the routes
    raises ConsistencyError rather than picking a side.
    """
    n, big_n = plane.basis.shape
    origin = base_plane(n, big_n - n)
    spectrum = stationary_angles_svd(plane, origin)
    by_angle = spectrum.max_angle >= np.pi / 2 - angle_tol

    pa, pb = plucker(plane), plucker(origin)
    pairing = abs(plucker_pairing(pa, pb)) / (pa.norm() * pb.norm())
    by_pairing = pairing <= pairing_tol

    if by_angle != by_pairing:
        raise ConsistencyError(
            f"angle route ({spectrum.max_angle:.12f} rad) and pairing route "
            f"({pairing:.3e}) disagree on cut locus membership")
    return LocusVerdict(in_locus=by_angle, max_angle=spectrum.max_angle,
                        pairing_abs=pairing)


def cayley_cut_check(plane: Plane, tol: float = 1e-9) -> bool:
    """Cut locus membership from the normalized Gram pairing alone: the
    arccos of the plane-level cosine reaches pi/2 within tol."""
    n, big_n = plane.basis.shape
    cos = cos_cayley_planes(plane, base_plane(n, big_n - n))
    return float(np.arccos(np.clip(cos, 0.0, 1.0))) >= np.pi / 2 - tol


@dataclass(slots=True)
class CartanDirection:
    """Singular values h_1 >= ... >= h_r of a geodesic velocity at the origin."""

    h: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.h, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("h must be a nonempty vector")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("h entries must be finite and nonnegative")
        if np.any(arr[:-1] < arr[1:]):
            raise ValueError("h entries must be nonincreasing")
        self.h = arr.copy()

    @property
    def r(self) -> int:
        return self.h.size

    def unit(self) -> "CartanDirection":
        norm = float(np.linalg.norm(self.h))
        if norm < DENOM_TOL:
            raise ValueError("cannot normalize a zero direction")
        return CartanDirection(self.h / norm)


def cartan_to_tangent(direction: CartanDirection, n: int, m: int,
                      signature: str = "compact") -> TangentCoord:
    """Embed the direction as the diagonal n x m tangent matrix."""
    if direction.r > min(n, m):
        raise ValueError(f"direction has {direction.r} entries but rank is {min(n, m)}")
    b = np.zeros((n, m), dtype=complex)
    b[:direction.r, :direction.r][np.diag_indices(direction.r)] = direction.h
    return TangentCoord(b=b, signature=signature)


def cut_time(direction: CartanDirection) -> float:
    """First time the geodesic with this direction meets the cut locus:
    pi over twice the largest entry."""
    top = float(direction.h[0])
    if top < DENOM_TOL:
        raise ValueError("direction with vanishing largest entry never reaches the cut locus")
    return np.pi / (2.0 * top)


@dataclass(slots=True)
class ConjugateParam:
    """One predicted conjugate radius: family label, indices, winding, time."""

    family: str
    p: int
    q: int | None
    lam: int
    t: float
    multiplicity: int


def tangent_conjugate_params(direction: CartanDirection, n: int, m: int,
                             lambda_max: int = 2) -> list[ConjugateParam]:
    """All predicted conjugate radii along the compact geodesic with the given
    direction, for windings 1..lambda_max, sorted by time.

    Pair families (1 <= p < q <= r, multiplicity 2 each):
        lam pi / (h_p + h_q)   and   lam pi / (h_p - h_q)
    Single families (1 <= p <= r):
        lam pi / (2 h_p) with multiplicity 1, and, when n != m,
        lam pi / h_p with multiplicity 2 |m - n|.
    Vanishing denominators contribute nothing.
    """
    if lambda_max < 1:
        raise ValueError("lambda_max must be at least 1")
    if direction.r > min(n, m):
        raise ValueError(f"direction has {direction.r} entries but rank is {min(n, m)}")
    h = direction.h
    out: list[ConjugateParam] = []
    for lam in range(1, lambda_max + 1):
        for p in range(direction.r):
            for q in range(p + 1, direction.r):
                for fam, den in (("t1plus", h[p] + h[q]), ("t1minus", h[p] - h[q])):
                    if abs(den) >= DENOM_TOL:
                        out.append(ConjugateParam(family=fam, p=p + 1, q=q + 1, lam=lam,
                                                  t=lam * np.pi / abs(den), multiplicity=2))
            if h[p] >= DENOM_TOL:
                out.append(ConjugateParam(family="t2", p=p + 1, q=None, lam=lam,
                                          t=lam * np.pi / (2.0 * h[p]), multiplicity=1))
                if n != m:
                    out.append(ConjugateParam(family="t3", p=p + 1, q=None, lam=lam,
                                              t=lam * np.pi / h[p],
                                              multiplicity=2 * abs(m - n)))
    out.sort(key=lambda c: c.t)
    return out


def coverage_limit(direction: CartanDirection, n: int, m: int,
                   lambda_max: int = 2) -> float:
    """Smallest conjugate time the winding cap misses: the first radius that
    winding lambda_max + 1 would add.  Scans past this limit run into radii
    absent from the capped list."""
    extra = [c.t for c in tangent_conjugate_params(direction, n, m, lambda_max + 1)
             if c.lam == lambda_max + 1]
    return min(extra) if extra else np.inf


@dataclass(slots=True)
class JacobianProbe:
    """Singular value summary of the finite-difference exponential Jacobian."""

    t: float
    min_sv: float
    max_sv: float
    ratio: float
    is_conjugate: bool
    indeterminate: bool


def conjugate_test_jacobian(tangent: TangentCoord, t: float, tol: float = 1e-3,
                            step: float | None = None) -> JacobianProbe:
    """Probe for a conjugate point at time t by differentiating the chart
    exponential.

    The map from the real coordinates of B to the real coordinates of the
    chart image of exp at t B is differentiated by central differences; a
    conjugate point shows up as a collapse of the smallest singular value of
    the square Jacobian.  The verdict uses the ratio of extreme singular
    values; ratios within a decade above tol are flagged indeterminate so
    callers can re-probe at a nudged time.  Compact evaluation closer to a
    tan pole than the difference stencil can resolve raises ChartEscapeError.
    """
    bt = t * tangent.b
    if step is None:
        step = 1e-5 * max(1.0, float(np.linalg.norm(bt)))
    if tangent.signature == "compact":
        svals = np.linalg.svd(bt, compute_uv=False)
        if svals.size and float(np.min(tan_pole_distance(svals))) < 10.0 * step:
            raise ChartEscapeError(
                "evaluation point too close to a tan pole for finite differences")
    shape = tangent.shape

    def chart_map(x: np.ndarray) -> np.ndarray:
        coord = TangentCoord(b=kernel.complexmat(x, shape), signature=tangent.signature)
        return kernel.realvec(exp0(coord).z)

    jac = kernel.fd_jacobian(chart_map, kernel.realvec(bt), step=step)
    svs = np.linalg.svd(jac, compute_uv=False)
    ratio = float(svs[-1] / svs[0])
    return JacobianProbe(t=float(t), min_sv=float(svs[-1]), max_sv=float(svs[0]),
                         ratio=ratio, is_conjugate=ratio < tol,
                         indeterminate=tol <= ratio < 10.0 * tol)


@dataclass(slots=True)
class ConjugateClass:
    """Angle-based classification of a conjugate point candidate."""

    label: str
    angles: AngleSpectrum
    jacobian_ratio: float


def classify_conjugate(tangent: TangentCoord, t: float, angle_tol: float = ANGLE_TOL,
                       jac_tol: float = 1e-3) -> ConjugateClass:
    """Classify the geodesic point at time t by its stationary angles.

    A boundary point ("wong") has an angle at pi/2 or a vanishing smallest
    essential angle; an interior coincidence ("interior") has two of the top
    min(n, m) angles equal.  Boundary takes precedence.  The Jacobian ratio
    at the same point is attached when the chart map can be differentiated
    there, else nan.
    """
    n, m = tangent.shape
    r = min(n, m)
    plane = geodesic_group(tangent, t)
    spectrum = stationary_angles_svd(plane, base_plane(n, m))
    angles = spectrum.angles
    wong = (spectrum.max_angle >= np.pi / 2 - angle_tol) or (angles[r - 1] <= angle_tol)
    gaps = angles[:r - 1] - angles[1:r]
    interior = bool(gaps.size) and float(np.min(gaps)) <= angle_tol
    if wong:
        label = "wong"
    elif interior:
        label = "interior"
    else:
        label = "none"
    try:
        ratio = conjugate_test_jacobian(tangent, t, tol=jac_tol).ratio
    except ChartEscapeError:
        ratio = float("nan")
    return ConjugateClass(label=label, angles=spectrum, jacobian_ratio=ratio)
