"""Exact spectral data of symmetric schemes.

For a Higmanian scheme everything is in closed form: the first eigenmatrix
has rows

    (1, n-1,  k(f-1), (mn-k)(f-1), mn-n)
    (1, -1,   x1,     -x1,         0)
    (1, n-1,  0,      0,           -n)
    (1, -1,   x3,     -x3,         0)
    (1, n-1,  -k,     -(mn-k),     mn-n)

where x1, x3 are the roots of

    x^2 + ((f-2)(mn-k) - t*mn/k) x - (f-1)k(mn-k)/(m(n-1)) = 0

with |x1| >= |x3|, and the multiplicities follow from the displayed
fractions.  All of it is computed over QuadraticNumber, so uniformity
decisions are exact.  A floating-point eigendecomposition oracle exists
solely as an independent cross-check of constructed schemes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .quadratic import QuadraticNumber, quadratic_roots
from .schemes import SchemeTable

QN = QuadraticNumber


class SpectralError(ValueError):
    pass


@dataclass(frozen=True)
class EigenData:
    """First eigenmatrix (rows = idempotents, columns = relations),
    multiplicities and valencies, all exact."""

    P: tuple[tuple[QN, ...], ...]
    multiplicities: tuple[QN, ...]
    valencies: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.valencies)

    @property
    def v(self) -> int:
        return sum(self.valencies)

    def check(self) -> None:
        """Row 0 = valencies, multiplicities sum to v, column orthogonality."""
        r, v = self.rank, self.v
        if tuple(x.as_integer() if x.is_integer else None for x in self.P[0]) \
                != self.valencies:
            raise SpectralError("row 0 of P must be the valency vector")
        if sum(self.multiplicities, QN(0)) != QN(v):
            raise SpectralError("multiplicities do not sum to v")
        for m in self.multiplicities:
            if m.sign() <= 0:
                raise SpectralError("nonpositive multiplicity")
        for i in range(r):
            for k in range(i, r):
                s = QN(0)
                for j in range(r):
                    s = s + self.multiplicities[j] * self.P[j][i] * self.P[j][k]
                s = s / (self.valencies[i] * self.valencies[k])
                want = QN(Fraction(v, self.valencies[i])) if i == k else QN(0)
                if s != want:
                    raise SpectralError(
                        f"column orthogonality fails at ({i},{k})")


@dataclass(frozen=True)
class KreinTensor:
    """Exact Krein parameters q_ij^k of a symmetric scheme."""

    q: tuple[tuple[tuple[QN, ...], ...], ...]

    @property
    def rank(self) -> int:
        return len(self.q)

    def entry(self, i: int, j: int, k: int) -> QN:
        return self.q[i][j][k]

    def negative_witness(self) -> tuple[int, int, int] | None:
        r = self.rank
        for i, j, k in itertools.product(range(r), repeat=3):
            if self.q[i][j][k].sign() < 0:
                return (i, j, k)
        return None

    def circ_closed(self, I: frozenset[int]) -> bool:
        """True when span{E_i : i in I} is closed under the Hadamard product."""
        outside = [k for k in range(self.rank) if k not in I]
        return all(self.q[i][j][k] == QN(0)
                   for i in I for j in I for k in outside)


def eigenvalue_pair(params) -> tuple[QN, QN]:
    """Exact roots (x1, x3) of the defining quadratic, |x1| >= |x3|,
    ties broken by x1 > x3."""
    f, m, n, k, t = params.f, params.m, params.n, params.k, params.t
    if k <= 0:
        raise SpectralError("k must be positive")
    b = Fraction((f - 2) * (m * n - k)) - Fraction(t * m * n, k)
    c = -Fraction((f - 1) * k * (m * n - k), m * (n - 1))
    try:
        hi, lo = quadratic_roots(b, c)
    except ValueError as exc:
        raise SpectralError(
            f"no symmetric scheme with these parameters: {exc}") from None
    if abs(hi) > abs(lo) or (abs(hi) == abs(lo) and hi > lo):
        return hi, lo
    return lo, hi


def higmanian_eigenmatrix(params) -> tuple[tuple[QN, ...], ...]:
    """The closed-form 5x5 first eigenmatrix for the given parameters."""
    f, m, n, k = params.f, params.m, params.n, params.k
    x1, x3 = eigenvalue_pair(params)
    mn = m * n
    rows = (
        (QN(1), QN(n - 1), QN(k * (f - 1)), QN((mn - k) * (f - 1)), QN(mn - n)),
        (QN(1), QN(-1), x1, -x1, QN(0)),
        (QN(1), QN(n - 1), QN(0), QN(0), QN(-n)),
        (QN(1), QN(-1), x3, -x3, QN(0)),
        (QN(1), QN(n - 1), QN(-k), QN(-(mn - k)), QN(mn - n)),
    )
    return rows


def higmanian_multiplicities(params, x1: QN, x3: QN) -> tuple[QN, ...]:
    """Closed-form multiplicities (m_0, ..., m_4) given the eigenvalue pair."""
    f, m, n, k = params.f, params.m, params.n, params.k
    mn = m * n
    top = QN(f * (f - 1) * m * (n - 1) * k * (mn - k))
    base = QN((f - 1) * k * (mn - k))
    m1 = top / (base + x1 * x1 * (m * (n - 1)))
    m3 = top / (base + x3 * x3 * (m * (n - 1)))
    return (QN(1), m1, QN(f * (m - 1)), m3, QN(f - 1))


def higmanian_valencies(params) -> tuple[int, ...]:
    f, m, n, k = params.f, params.m, params.n, params.k
    return (1, n - 1, k * (f - 1), (m * n - k) * (f - 1), m * n - n)


def spectral_data(params) -> EigenData:
    """Full exact spectral data of a Higmanian parameter tuple."""
    P = higmanian_eigenmatrix(params)
    x1, x3 = P[1][2], P[3][2]
    mults = higmanian_multiplicities(params, x1, x3)
    data = EigenData(P=P, multiplicities=mults,
                     valencies=higmanian_valencies(params))
    data.check()
    return data


def multiplicity_check(P: Sequence[Sequence[QN]],
                       valencies: Sequence[int]) -> tuple[QN, ...]:
    """Multiplicities recomputed from P alone: m_j = v (sum_i P_ji^2/n_i)^-1."""
    v = sum(valencies)
    out = []
    for row in P:
        s = QN(0)
        for i, n_i in enumerate(valencies):
            s = s + row[i] * row[i] / n_i
        if not s:
            raise SpectralError("zero denominator in multiplicity formula")
        out.append(QN(v) / s)
    return tuple(out)


def krein(P: Sequence[Sequence[QN]], multiplicities: Sequence[QN],
          valencies: Sequence[int]) -> KreinTensor:
    """q_ij^k = (m_i m_j / v) sum_l P_il P_jl P_kl / n_l^2, exactly."""
    r = len(valencies)
    v = sum(valencies)
    nl2 = [valencies[l] * valencies[l] for l in range(r)]
    tensor = []
    for i in range(r):
        plane = []
        for j in range(r):
            row = []
            scale = multiplicities[i] * multiplicities[j] / v
            for k in range(r):
                s = QN(0)
                for l in range(r):
                    s = s + P[i][l] * P[j][l] * P[k][l] / nl2[l]
                row.append(scale * s)
            plane.append(tuple(row))
        tensor.append(tuple(plane))
    return KreinTensor(q=tuple(tensor))


def sim_classes(I: frozenset[int], kr: KreinTensor) -> tuple[frozenset[int], ...]:
    """Classes of the relation i ~ j iff q_ij^k != 0 for some k in I,
    closed transitively."""
    r = kr.rank
    parent = list(range(r))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(r):
        for j in range(i + 1, r):
            if any(kr.q[i][j][k] != QN(0) for k in I):
                parent[find(i)] = find(j)
    groups: dict[int, set[int]] = {}
    for x in range(r):
        groups.setdefault(find(x), set()).add(x)
    return tuple(sorted((frozenset(g) for g in groups.values()), key=min))


@dataclass(frozen=True)
class QHigmanianVerdict:
    verdict: bool
    certificates: tuple[tuple[tuple[int, ...], int, int], ...]
    # each certificate is (idempotent ordering, l, f)

    def __bool__(self) -> bool:
        return self.verdict


def is_q_higmanian(multiplicities: Sequence[QN], kr: KreinTensor) -> QHigmanianVerdict:
    """Search idempotent orderings for the Q-Higmanian pattern.

    Position 0 stays on the principal idempotent; the last position ranges
    over indices z with {0, z} spanning a Hadamard-closed subalgebra; the
    middle positions are brute-forced (rank <= 5 in all targets).
    """
    r = kr.rank
    d = r - 1
    certs = []
    for z in range(1, r):
        I = frozenset({0, z})
        if not kr.circ_closed(I):
            continue
        f = sum((multiplicities[i] for i in I), QN(0))
        if not f.is_integer or f.as_integer() < 2:
            continue
        f_int = f.as_integer()
        classes = set(sim_classes(I, kr))
        middle = [i for i in range(1, r) if i != z]
        for perm in itertools.permutations(middle):
            ordering = (0,) + perm + (z,)
            for l in range(1, d // 2 + 1):
                expected = {frozenset({ordering[i], ordering[d - i]})
                            for i in range(l)}
                expected |= {frozenset({ordering[i]})
                             for i in range(l, d - l + 1)}
                if classes != expected:
                    continue
                if all(multiplicities[ordering[d - i]]
                       == multiplicities[ordering[i]] * (f_int - 1)
                       for i in range(l)):
                    certs.append((ordering, l, f_int))
    return QHigmanianVerdict(verdict=bool(certs), certificates=tuple(certs))


# -- exact spectra for low rank (smoke cases outside the Higmanian path) ------

def exact_spectral_data(scheme: SchemeTable) -> EigenData:
    """Exact spectral data for symmetric schemes of rank <= 3.

    Higmanian rank-5 schemes use the closed forms instead; there is
    deliberately no general eigensolver in the exact path.
    """
    if not scheme.is_symmetric():
        raise SpectralError("exact spectra implemented for symmetric schemes")
    v = scheme.v
    if scheme.rank == 1:
        return EigenData(P=((QN(1),),), multiplicities=(QN(1),), valencies=(1,))
    if scheme.rank == 2:
        P = ((QN(1), QN(v - 1)), (QN(1), QN(-1)))
        return EigenData(P=P, multiplicities=(QN(1), QN(v - 1)),
                         valencies=(1, v - 1))
    if scheme.rank != 3:
        raise SpectralError(
            "exact spectra outside the Higmanian closed forms are limited "
            "to rank <= 3")
    p = scheme.p
    n1 = int(scheme.valencies[1])
    n2 = int(scheme.valencies[2])
    b = -Fraction(int(p[1, 1, 1]) - int(p[1, 1, 2]))
    c = -Fraction(n1 - int(p[1, 1, 2]))
    th1, th2 = quadratic_roots(b, c)
    if th1 == th2:
        raise SpectralError("repeated eigenvalue; rank-3 data degenerate")
    P = ((QN(1), QN(n1), QN(n2)),
         (QN(1), th1, QN(-1) - th1),
         (QN(1), th2, QN(-1) - th2))
    mults = multiplicity_check(P, (1, n1, n2))
    data = EigenData(P=P, multiplicities=mults, valencies=(1, n1, n2))
    data.check()
    return data


# -- floating-point oracle -----------------------------------------------------

@dataclass
class OracleResult:
    P: np.ndarray               # float eigenmatrix, rows matched to exact rows
    multiplicities: tuple[int, ...]
    max_abs_error: float


def float_eigen_oracle(scheme: SchemeTable, exact: EigenData,
                       relation_order: Sequence[int] | None = None,
                       tol: float = 1e-8) -> OracleResult:
    """Numerically eigendecompose the adjacency matrices and match the rows
    of the exact eigenmatrix, as an independent verification channel.

    relation_order maps eigenmatrix columns to scheme colors (identity when
    omitted).  Raises when the match exceeds tol.
    """
    order = list(relation_order) if relation_order is not None \
        else list(range(scheme.rank))
    mats = [scheme.adjacency(c).astype(np.float64) for c in order]
    r = scheme.rank
    for attempt in range(10):
        rng = np.random.default_rng(12345 + attempt)
        w = rng.uniform(1.0, 2.0, size=r)
        M = sum(wi * A for wi, A in zip(w, mats))
        vals, vecs = np.linalg.eigh(M)
        clusters = _cluster(vals, 1e-6 * max(1.0, float(np.abs(vals).max())))
        if len(clusters) == r:
            break
    else:
        raise SpectralError("could not separate eigenspaces numerically")

    P_float = np.empty((r, r))
    dims = []
    for ci, idxs in enumerate(clusters):
        V = vecs[:, idxs]
        proj = V @ V.T
        dims.append(len(idxs))
        for i, A in enumerate(mats):
            P_float[ci, i] = np.trace(proj @ A) / len(idxs)

    # match rows to the exact eigenmatrix by valency-normalized profile
    n = np.array(exact.valencies, dtype=np.float64)
    exact_rows = np.array([[float(x) for x in row] for row in exact.P])
    best = None
    for perm in itertools.permutations(range(r)):
        err = np.abs(P_float[list(perm)] / n - exact_rows / n).max()
        if best is None or err < best[0]:
            best = (err, perm)
    err_norm, perm = best
    P_matched = P_float[list(perm)]
    mults = tuple(dims[j] for j in perm)
    max_err = float(np.abs(P_matched - exact_rows).max())
    if max_err > tol:
        raise SpectralError(
            f"floating-point oracle disagrees with exact eigenmatrix "
            f"(max deviation {max_err:.3e})")
    for j in range(r):
        m = exact.multiplicities[j]
        if not m.is_integer or m.as_integer() != mults[j]:
            raise SpectralError(
                f"oracle multiplicity {mults[j]} != exact {m} at row {j}")
    return OracleResult(P=P_matched, multiplicities=mults, max_abs_error=max_err)


def _cluster(vals: np.ndarray, gap: float) -> list[list[int]]:
    clusters: list[list[int]] = [[0]]
    for i in range(1, len(vals)):
        if vals[i] - vals[clusters[-1][-1]] <= gap:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return clusters
