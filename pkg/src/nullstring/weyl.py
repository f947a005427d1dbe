"""Algebraic classification of one duality side of the Weyl curvature.

A :class:`WeylSide` is the quintuple of frame components (c1..c5) of a
symmetric 4-index spinor.  Classification runs on the associated binary
quartic

    P(z) ~ c5 - 4 c4 z + 6 c3 z^2 - 4 c2 z^3 + c1 z^4

whose root-multiplicity pattern on CP^1 (roots at infinity = leading-degree
drop) is the complex Petrov-Penrose type; neutral signature refines the types
by whether the principal roots are real or come in conjugate pairs.

The complex classifier is purely algebraic: discriminant-type invariants
I, J and the Hessian covariant, all with cancellation-aware relative
tolerances, plus the adapted-frame shortcut (c5 = c4 = 0) where the special
zero patterns and the tau invariant decide the type directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

COMPLEX_TYPES = ("I", "II", "D", "III", "N", "-")
REAL_TYPES = ("I_r", "I_rc", "I_c", "II_r", "II_rc", "D_r", "D_c", "III", "N", "-")

#: default tolerance pair (absolute, relative) for zero tests on coefficients
DEFAULT_TOL = (1e-10, 1e-8)
#: relative threshold for the degree-6 invariant tests on normalized input;
#: sits a decade above the noise floor of well-conditioned frame changes and a
#: decade below the discriminant of a quartic with root separation 1e-5
INVARIANT_RTOL = 1e-10
#: root-clustering radius (normalized quartic), shared with the test oracle
CLUSTER_RADIUS = 1e-6


@dataclass(frozen=True)
class WeylSide:
    """Five curvature coefficients of one duality side against a spin frame."""

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float

    @staticmethod
    def from_ordered(vals) -> "WeylSide":
        """From (C^(5), C^(4), C^(3), C^(2), C^(1)) as the engine reports them."""
        c5, c4, c3, c2, c1 = vals
        return WeylSide(c1, c2, c3, c4, c5)

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.c1, self.c2, self.c3, self.c4, self.c5)

    def scale(self) -> float:
        return max(abs(v) for v in self.as_tuple())

    def quartic(self) -> np.ndarray:
        """Coefficients q[k] of z^k of the associated quartic (scale dropped)."""
        return np.array([self.c5, -4.0 * self.c4, 6.0 * self.c3, -4.0 * self.c2, self.c1])


@dataclass(frozen=True)
class PetrovType:
    complex_type: str
    real_refinement: str | None = None
    degenerate: bool = False
    margin: float | None = None  # smallest decision margin of the real refinement

    def __str__(self) -> str:
        if self.real_refinement:
            return f"{self.complex_type} ({self.real_refinement})"
        return self.complex_type


def tau(w: WeylSide) -> float:
    """Invariant separating type D from type II in adapted frames (c5 = c4 = 0)."""
    return 2.0 * w.c2 * w.c2 - 3.0 * w.c3 * w.c1


def invariant_i(w: WeylSide) -> float:
    return w.c1 * w.c5 - 4.0 * w.c2 * w.c4 + 3.0 * w.c3 * w.c3


def invariant_j(w: WeylSide) -> float:
    a, b, c, d, e = w.c5, -w.c4, w.c3, -w.c2, w.c1
    return a * c * e + 2.0 * b * c * d - a * d * d - b * b * e - c**3


def degeneration_residual(w: WeylSide) -> float:
    """Sextic degeneration invariant: zero (within tolerance) iff the side is
    algebraically degenerate; vanishes identically when c5 = c4 = 0.

    This is the printed invariant with the cube term read as
    ((c5*c1 - 4*c4*c2)/3)^3: that grouping makes the whole expression equal
    (I^3 - 27 J^2)/27, the quartic discriminant up to a constant, which the
    iff-degenerate property requires (a flat 1/3 prefactor does not vanish on
    one-double-root quartics)."""
    c1, c2, c3, c4, c5 = w.as_tuple()
    m = c5 * c2 * c2 + c1 * c4 * c4
    return (
        3.0 * c5 * c1 * c3**4
        - 2.0 * m * c3**3
        + (2.0 / 3.0) * (2.0 * (c2 * c4) ** 2 - 10.0 * c5 * c4 * c2 * c1 - (c5 * c1) ** 2) * c3**2
        + 2.0 * m * (c5 * c1 + 2.0 * c4 * c2) * c3
        + ((c5 * c1 - 4.0 * c4 * c2) / 3.0) ** 3
        - m * m
    )


def degeneration_scale(w: WeylSide) -> float:
    """Cancellation-aware magnitude of the degeneration invariant's monomials."""
    c1, c2, c3, c4, c5 = (abs(v) for v in w.as_tuple())
    m = c5 * c2 * c2 + c1 * c4 * c4
    return (
        3.0 * c5 * c1 * c3**4
        + 2.0 * m * c3**3
        + (2.0 / 3.0) * (2.0 * (c2 * c4) ** 2 + 10.0 * c5 * c4 * c2 * c1 + (c5 * c1) ** 2) * c3**2
        + 2.0 * m * (c5 * c1 + 2.0 * c4 * c2) * c3
        + ((c5 * c1 + 4.0 * c4 * c2) / 3.0) ** 3
        + m * m
    )


def _hessian(q: np.ndarray) -> np.ndarray:
    """Hessian covariant Q_ss Q_tt - Q_st^2 of the homogenized quartic."""
    qss = np.array([(k + 2) * (k + 1) * q[k + 2] for k in range(3)])
    qtt = np.array([(4 - k) * (3 - k) * q[k] for k in range(3)])
    qst = np.array([(k + 1) * (3 - k) * q[k + 1] for k in range(3)])
    return np.convolve(qss, qtt) - np.convolve(qst, qst)


def _proportional(u: np.ndarray, v: np.ndarray, rtol: float) -> bool:
    size = float(np.max(np.abs(u))) * float(np.max(np.abs(v)))
    if size == 0.0:
        return True
    for i in range(len(u)):
        for j in range(i + 1, len(u)):
            if abs(u[i] * v[j] - u[j] * v[i]) > rtol * size:
                return False
    return True


def classify_complex(w: WeylSide, tol: tuple[float, float] = DEFAULT_TOL) -> str:
    """Complex Petrov-Penrose type from root multiplicities of the quartic.

    Adapted frames (c5 = c4 = 0 within tolerance) use the printed special-case
    patterns with the tau invariant; otherwise the invariant/covariant tests
    decide the multiplicity structure without any root finding.
    """
    atol, rtol = tol
    s = w.scale()
    if s <= atol:
        return "-"
    thr = atol + rtol * s
    if abs(w.c5) <= thr and abs(w.c4) <= thr:
        # adapted frame: z = 0 is a (>= double) root
        if abs(w.c3) > thr:
            t = tau(w)
            t_size = 2.0 * w.c2 * w.c2 + 3.0 * abs(w.c3 * w.c1)
            return "D" if abs(t) <= max(atol, INVARIANT_RTOL * max(t_size, s * s)) else "II"
        if abs(w.c2) > thr:
            return "III"
        if abs(w.c1) > thr:
            return "N"
        return "-"
    q = w.quartic()
    q = q / np.max(np.abs(q))
    i_inv = q[0] * q[4] - 0.25 * q[1] * q[3] + q[2] * q[2] / 12.0
    j_inv = float(np.linalg.det(np.array([
        [q[0], q[1] / 4.0, q[2] / 6.0],
        [q[1] / 4.0, q[2] / 6.0, q[3] / 4.0],
        [q[2] / 6.0, q[3] / 4.0, q[4]],
    ])))
    delta = i_inv**3 - 27.0 * j_inv**2
    delta_size = abs(i_inv) ** 3 + 27.0 * j_inv**2
    if abs(delta) > max(INVARIANT_RTOL * delta_size, INVARIANT_RTOL**2):
        return "I"
    h = _hessian(q)
    h_size = float(np.max(np.abs(h)))
    if h_size <= INVARIANT_RTOL * max(1.0, float(np.max(np.abs(q))) ** 2):
        return "N"
    if _proportional(h, q, INVARIANT_RTOL):
        return "D"
    if abs(i_inv) <= INVARIANT_RTOL and abs(j_inv) <= INVARIANT_RTOL:
        return "III"
    return "II"


def _quartic_roots(q: np.ndarray, radius: float) -> tuple[list[complex], int]:
    """Finite roots of the quartic plus the multiplicity of the root at infinity
    (leading-coefficient degree drop)."""
    qn = q / np.max(np.abs(q))
    coeffs = qn[::-1]  # numpy wants highest degree first: z^4 ... z^0
    lead = 0
    while lead < 4 and abs(coeffs[lead]) <= radius:
        lead += 1
    finite = coeffs[lead:]
    if len(finite) <= 1:
        return [], lead
    roots = np.roots(finite)
    # roots escaping to infinity numerically join the infinity cluster
    out, extra_inf = [], 0
    for r in roots:
        if abs(r) > 1.0 / radius:
            extra_inf += 1
        else:
            out.append(complex(r))
    return out, lead + extra_inf


def _cluster(roots: list[complex], radius: float) -> list[list[complex]]:
    clusters: list[list[complex]] = []
    for r in sorted(roots, key=lambda z: (z.real, z.imag)):
        for c in clusters:
            if abs(r - np.mean(c)) <= radius:
                c.append(r)
                break
        else:
            clusters.append([r])
    return clusters


def root_census(w: WeylSide, radius: float = CLUSTER_RADIUS
                ) -> tuple[tuple[int, ...], list[tuple[int, complex]]]:
    """Multiplicity pattern and (multiplicity, centroid) list of the quartic's
    root clusters; the point at infinity counts as a real root."""
    q = w.quartic()
    if np.max(np.abs(q)) == 0.0:
        return (), []
    roots, inf_mult = _quartic_roots(q, radius)
    clusters = _cluster(roots, radius)
    info = [(len(c), complex(np.mean(c))) for c in clusters]
    if inf_mult:
        info.append((inf_mult, complex(np.inf, 0.0)))
    info.sort(key=lambda t: -t[0])
    return tuple(sorted((m for m, _ in info), reverse=True)), info


_PATTERN_TO_TYPE = {
    (1, 1, 1, 1): "I",
    (2, 1, 1): "II",
    (2, 2): "D",
    (3, 1): "III",
    (4,): "N",
    (): "-",
}


def classify_real(w: WeylSide, tol: tuple[float, float] = DEFAULT_TOL) -> PetrovType:
    """Neutral-signature refinement: real principal roots vs conjugate pairs.

    The refinement is decided from the real root structure; near the
    real/conjugate boundary the nearest refinement is reported together with
    the margin (the distance of the deciding imaginary parts from the cluster
    radius), never a silent guess.
    """
    ctype = classify_complex(w, tol)
    if ctype == "-":
        return PetrovType("-", "-", True, None)
    s = w.scale()
    radius = max(CLUSTER_RADIUS, tol[0] / max(s, 1e-300))
    pattern, info = root_census(w, radius)
    margin = min((abs(abs(c.imag) - radius) for m, c in info if np.isfinite(c.real)),
                 default=None)

    def is_real(c: complex) -> bool:
        return not np.isfinite(c.real) or abs(c.imag) <= radius

    n_real_simple = sum(1 for m, c in info if m == 1 and is_real(c))
    degenerate = ctype != "I"
    if ctype == "I":
        refinement = {4: "I_r", 2: "I_rc", 0: "I_c"}.get(n_real_simple, "I_rc")
    elif ctype == "II":
        refinement = "II_r" if n_real_simple >= 2 else "II_rc"
    elif ctype == "D":
        doubles_real = [is_real(c) for m, c in info if m >= 2]
        refinement = "D_r" if all(doubles_real) else "D_c"
    else:
        refinement = ctype  # III, N carry no real/complex split
    return PetrovType(ctype, refinement, degenerate, margin)


def transform(w: WeylSide, matrix) -> WeylSide:
    """Induced action of a spin-frame change on the coefficients: substitute
    (s,t) -> (a s + b t, c s + d t) into the homogenized quartic."""
    a, b, c, d = (float(matrix[0][0]), float(matrix[0][1]),
                  float(matrix[1][0]), float(matrix[1][1]))
    q = w.quartic()
    new = np.zeros(5)
    for k in range(5):
        # q[k] * (a s + b t)^k (c s + d t)^(4-k), collected by s-degree
        poly = np.array([1.0])
        for _ in range(k):
            poly = np.convolve(poly, np.array([b, a]))  # ascending s-degree
        for _ in range(4 - k):
            poly = np.convolve(poly, np.array([d, c]))
        new += q[k] * poly
    c5 = new[0]
    c4 = -new[1] / 4.0
    c3 = new[2] / 6.0
    c2 = -new[3] / 4.0
    c1 = new[4]
    return WeylSide(c1, c2, c3, c4, c5)
