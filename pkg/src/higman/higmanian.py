"""Higmanian schemes: detection, parameters, and four uniformity routes.

A Higmanian scheme here is an imprimitive symmetric indecomposable scheme of
rank 5 with exactly two nontrivial parabolics E < F satisfying
rk(E) = cork(F) = 2 and rk(F) = cork(E) = 3.  Its parameters are
(f, m, n, k, t) with f = v/n_F, m = n_F/n_E, n = n_E, k the per-class count
of neighbors in the larger outside relation S, and t = p_TS^T.

Uniformity is decided four independent ways and the verdicts must coincide:

  * the closed-form criterion  t = (k(f-2)/mn)(mn-k +- sqrt(k(mn-k)/(m(n-1))))
  * the definitional check: block-restricted adjacency products over the
    classes of a corank-2 parabolic decompose integrally
  * the Q-Higmanian spectral test on the exact eigenstructure
  * dismantlability: every union of classes of a nontrivial parabolic
    induces a valid subscheme
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .quadratic import QuadraticNumber
from .schemes import (Parabolic, SchemeError, SchemeTable, is_wreath_over,
                      nontrivial_parabolics, quotient, restriction)
from . import spectral

QN = QuadraticNumber

DISMANTLE_UNION_CAP = 1 << 20
DISMANTLE_SAMPLES = 10_000


class NotHigmanianError(ValueError):
    pass


class VerdictInconsistencyError(RuntimeError):
    """The four uniformity routes disagreed; carries the full bundle."""

    def __init__(self, message: str, bundle: "VerdictBundle") -> None:
        super().__init__(message)
        self.bundle = bundle


@dataclass(frozen=True)
class HigmanianParams:
    f: int
    m: int
    n: int
    k: int
    t: int

    def __post_init__(self):
        if min(self.f, self.m, self.n) < 2:
            raise ValueError("f, m, n must all be >= 2")
        mn = self.m * self.n
        if not (mn - self.k <= self.k <= mn):
            raise ValueError(f"k={self.k} outside [mn-k, mn] range for mn={mn}")
        if self.k <= 0 or self.t < 0:
            raise ValueError("k must be positive and t nonnegative")

    @property
    def v(self) -> int:
        return self.f * self.m * self.n

    @property
    def n_S(self) -> int:
        return self.k * (self.f - 1)

    @property
    def n_T(self) -> int:
        return (self.m * self.n - self.k) * (self.f - 1)

    def astuple(self) -> tuple[int, int, int, int, int]:
        return (self.f, self.m, self.n, self.k, self.t)

    def __str__(self) -> str:
        return str(self.astuple())


# -- detection -----------------------------------------------------------------

@dataclass
class DetectionResult:
    higmanian: bool
    reason: str | None = None
    params: HigmanianParams | None = None
    alt_params: HigmanianParams | None = None  # second labeling when n_S = n_T
    E: Parabolic | None = None
    F: Parabolic | None = None
    relation_order: tuple[int, ...] | None = None  # scheme colors in the
    # canonical relation order (diagonal, E-color, S, T, F-color)
    nontrivial_parabolic_count: int = 0

    def __bool__(self) -> bool:
        return self.higmanian


def _reject(reason: str, count: int = 0) -> DetectionResult:
    return DetectionResult(higmanian=False, reason=reason,
                           nontrivial_parabolic_count=count)


def detect_higmanian(scheme: SchemeTable, strict: bool = True) -> DetectionResult:
    """Decide Higmanian-ness and extract (E, F, S, T) and (f, m, n, k, t)."""
    if scheme.rank != 5:
        return _reject(f"rank {scheme.rank} != 5")
    if not scheme.is_symmetric():
        return _reject("not symmetric")
    parabs = nontrivial_parabolics(scheme)
    if not parabs:
        return _reject("primitive: no nontrivial parabolic")
    count = len(parabs)
    if strict and count != 2:
        return _reject(
            f"{count} nontrivial parabolics, strict detection wants exactly 2",
            count)

    chain = None
    for E, F in itertools.permutations(parabs, 2):
        if not (E.colors < F.colors):
            continue
        if len(E.colors) != 2 or len(F.colors) != 3:
            continue
        if restriction(scheme, E.classes[0]).rank != 2:
            continue
        if quotient(scheme, F).rank != 2:
            continue
        if restriction(scheme, F.classes[0]).rank != 3:
            continue
        if quotient(scheme, E).rank != 3:
            continue
        chain = (E, F)
        break
    if chain is None:
        return _reject("no parabolic chain with rk(E)=cork(F)=2, "
                       "rk(F)=cork(E)=3", count)
    E, F = chain

    for parab in parabs:
        if is_wreath_over(scheme, parab):
            return _reject(
                f"decomposable: wreath product over the parabolic with "
                f"classes of size {parab.n_class}", count)

    outside = [c for c in range(scheme.rank) if c not in F.colors]
    if len(outside) != 2:
        return _reject(f"{len(outside)} relations outside F, expected 2", count)
    a, b = outside
    if scheme.valencies[a] >= scheme.valencies[b]:
        s_color, t_color = a, b
    else:
        s_color, t_color = b, a

    v = scheme.v
    n = E.n_class
    n_F = F.n_class
    f, m = v // n_F, n_F // n
    (e_color,) = [c for c in E.colors if c != 0]

    k = _per_class_count(scheme, F, s_color)
    if k is None:
        return _reject("per-class count of the larger outside relation is "
                       "not constant", count)
    t = int(scheme.p[t_color, s_color, t_color])
    params = HigmanianParams(f=f, m=m, n=n, k=k, t=t)
    if params.n_S != int(scheme.valencies[s_color]):
        return _reject("valency identity n_S = k(f-1) fails", count)

    alt = None
    if scheme.valencies[a] == scheme.valencies[b]:
        # n_S = n_T: both labelings are legitimate; keep the larger t first
        k2 = _per_class_count(scheme, F, t_color)
        if k2 is not None:
            alt = HigmanianParams(
                f=f, m=m, n=n, k=k2,
                t=int(scheme.p[s_color, t_color, s_color]))
            if alt.t > params.t:
                params, alt = alt, params
                s_color, t_color = t_color, s_color
    return DetectionResult(
        higmanian=True, params=params, alt_params=alt, E=E, F=F,
        relation_order=(0, e_color, s_color, t_color,
                        [c for c in F.colors if c not in (0, e_color)][0]),
        nontrivial_parabolic_count=count)


def _per_class_count(scheme: SchemeTable, F: Parabolic, color: int) -> int | None:
    """|alpha S ∩ Delta| over all points alpha and classes Delta != Delta_alpha,
    or None when not constant."""
    member = np.zeros((scheme.v, F.num_classes), dtype=np.float64)
    member[np.arange(scheme.v), F.class_of] = 1.0
    counts = np.rint(scheme.adjacency(color).astype(np.float64) @ member
                     ).astype(np.int64)
    own = counts[np.arange(scheme.v), F.class_of]
    if (own != 0).any():
        return None
    mask = np.ones_like(counts, dtype=bool)
    mask[np.arange(scheme.v), F.class_of] = False
    vals = counts[mask]
    if vals.min() != vals.max():
        return None
    return int(vals[0])


# -- uniformity route 1: the closed-form criterion ------------------------------

def uniformity_rhs(f: int, m: int, n: int, k: int) -> tuple[QN, QN]:
    """Both sign choices of the criterion's right-hand side, exactly."""
    if min(f, m, n) < 2 or not (0 < k <= m * n):
        raise ValueError("need f, m, n >= 2 and 0 < k <= mn")
    mn = m * n
    base = Fraction(k * (f - 2), mn)
    root = QN.sqrt(Fraction(k * (mn - k), m * (n - 1)))
    plus = (QN(mn - k) + root) * base
    minus = (QN(mn - k) - root) * base
    return plus, minus


def is_uniform_by_criterion(params: HigmanianParams) -> bool:
    plus, minus = uniformity_rhs(params.f, params.m, params.n, params.k)
    return QN(params.t) == plus or QN(params.t) == minus


# -- uniformity route 2: the definitional block-product check -------------------

@dataclass
class DefinitionCheck:
    ok: bool
    cork: int
    witness: tuple | None = None
    coefficients_consistent: bool | None = None
    # recorded only: whether a_ij^k agrees across class triples


def is_uniform_by_definition(scheme: SchemeTable,
                             parab: Parabolic) -> DefinitionCheck:
    """Literal check of the definition over one parabolic: cork 2, and every
    block product A_i^{DG} A_j^{GL} constant on each color inside D x L."""
    cork = quotient(scheme, parab).rank
    if cork != 2:
        return DefinitionCheck(ok=False, cork=cork)
    r = scheme.rank
    v = scheme.v
    c = parab.num_classes
    class_of = parab.class_of
    color = scheme.color.astype(np.int64)
    basis = [scheme.adjacency(i).astype(np.float64) for i in range(r)]
    member = np.zeros((v, c))
    member[np.arange(v), class_of] = 1.0
    occurs = [np.rint(member.T @ basis[i] @ member).astype(np.int64) > 0
              for i in range(r)]

    flat_key = (class_of[:, None] * c + class_of[None, :]) * r + color
    gmin = np.full((r, r, r), np.iinfo(np.int64).max, dtype=np.int64)
    gmax = np.full((r, r, r), -1, dtype=np.int64)

    for gi in range(c):
        gpts = list(parab.classes[gi])
        for i in range(r):
            left = basis[i][:, gpts]
            for j in range(r):
                M = np.rint(left @ basis[j][gpts, :]).astype(np.int64)
                table = np.zeros(c * c * r, dtype=np.int64)
                table[flat_key.ravel()] = M.ravel()
                if (table[flat_key.ravel()] != M.ravel()).any():
                    bad = np.nonzero(table[flat_key.ravel()] != M.ravel())[0][0]
                    x, y = divmod(int(bad), v)
                    return DefinitionCheck(
                        ok=False, cork=2,
                        witness=(int(class_of[x]), gi, int(class_of[y]),
                                 i, j, int(color[x, y])))
                # record coefficient values across admissible triples
                adm = occurs[i][:, gi][:, None] & occurs[j][gi, :][None, :]
                blocks = table.reshape(c, c, r)
                for kk in range(r):
                    sel = adm & occurs[kk]
                    if sel.any():
                        vals = blocks[:, :, kk][sel]
                        gmin[i, j, kk] = min(gmin[i, j, kk], int(vals.min()))
                        gmax[i, j, kk] = max(gmax[i, j, kk], int(vals.max()))
    seen = gmax >= 0
    consistent = bool((gmin[seen] == gmax[seen]).all())
    return DefinitionCheck(ok=True, cork=2, coefficients_consistent=consistent)


def is_uniform_by_definition_any(scheme: SchemeTable) -> tuple[bool, dict]:
    """The scheme-level verdict: some nontrivial parabolic passes."""
    details = {}
    verdict = False
    for parab in nontrivial_parabolics(scheme):
        res = is_uniform_by_definition(scheme, parab)
        details[parab.n_class] = res
        if res.ok:
            verdict = True
            break
    return verdict, details


# -- uniformity route 4: dismantlability ----------------------------------------

@dataclass
class DismantleCheck:
    ok: bool
    witness: tuple[int, ...] | None = None  # failing union, as class indices
    exhaustive: bool = True
    unions_checked: int = 0


def is_dismantlable(scheme: SchemeTable, parab: Parabolic,
                    max_unions: int = DISMANTLE_UNION_CAP,
                    samples: int = DISMANTLE_SAMPLES,
                    seed: int = 0) -> DismantleCheck:
    """Restrict to every nonempty union of classes and re-validate.

    Beyond ``max_unions`` unions the check samples: every union of at most 2
    or at least c-2 classes, plus ``samples`` seeded random unions.
    """
    c = parab.num_classes
    total = (1 << c) - 1
    if total <= max_unions:
        masks = range(1, total + 1)
        exhaustive = True
    else:
        chosen = set()
        idx = range(c)
        for size in (1, 2, c - 2, c - 1, c):
            for combo in itertools.combinations(idx, size):
                m = 0
                for ci in combo:
                    m |= 1 << ci
                chosen.add(m)
        rng = random.Random(seed)
        target = min(total, len(chosen) + samples)
        while len(chosen) < target:
            chosen.add(rng.randrange(1, total + 1))
        masks = sorted(chosen)
        exhaustive = False
    checked = 0
    for mask in masks:
        pts: list[int] = []
        combo = []
        for ci in range(c):
            if mask >> ci & 1:
                pts.extend(parab.classes[ci])
                combo.append(ci)
        checked += 1
        try:
            restriction(scheme, pts)
        except SchemeError:
            return DismantleCheck(ok=False, witness=tuple(combo),
                                  exhaustive=exhaustive, unions_checked=checked)
    return DismantleCheck(ok=True, exhaustive=exhaustive, unions_checked=checked)


def is_dismantlable_any(scheme: SchemeTable, seed: int = 0,
                        max_unions: int = DISMANTLE_UNION_CAP) -> tuple[bool, dict]:
    details = {}
    verdict = False
    # coarser parabolics first: fewer classes, cheaper and decisive for
    # the corank-2 parabolic of a uniform scheme
    for parab in sorted(nontrivial_parabolics(scheme),
                        key=lambda e: e.num_classes):
        res = is_dismantlable(scheme, parab, max_unions=max_unions, seed=seed)
        details[parab.n_class] = res
        if res.ok:
            verdict = True
            break
    return verdict, details


# -- the bundle ------------------------------------------------------------------

@dataclass
class VerdictBundle:
    detection: DetectionResult
    params: HigmanianParams
    criterion: bool
    definition: bool
    q_higmanian: bool
    dismantlable: bool
    eigen: spectral.EigenData
    kr: spectral.KreinTensor = field(repr=False)
    q_certificates: tuple = ()
    rhs_candidates: tuple[QN, QN] = ()
    definition_details: dict = field(default_factory=dict, repr=False)
    dismantle_details: dict = field(default_factory=dict, repr=False)
    oracle: spectral.OracleResult | None = None
    alt_agrees: bool = True

    @property
    def verdicts(self) -> tuple[bool, bool, bool, bool]:
        return (self.criterion, self.definition, self.q_higmanian,
                self.dismantlable)

    @property
    def consistent(self) -> bool:
        return len(set(self.verdicts)) == 1 and self.alt_agrees

    @property
    def uniform(self) -> bool:
        return self.criterion


def _spectral_verdict(params: HigmanianParams):
    eigen = spectral.spectral_data(params)
    kr = spectral.krein(eigen.P, eigen.multiplicities, eigen.valencies)
    qh = spectral.is_q_higmanian(eigen.multiplicities, kr)
    return eigen, kr, qh


def verdict_bundle(scheme: SchemeTable, strict: bool = True, seed: int = 0,
                   oracle: bool = False,
                   raise_on_disagreement: bool = True) -> VerdictBundle:
    """Run all four uniformity routes on a Higmanian scheme.

    The verdicts must coincide (they are provably equivalent for genuine
    Higmanian schemes); disagreement raises VerdictInconsistencyError
    unless told otherwise.
    """
    det = detect_higmanian(scheme, strict=strict)
    if not det:
        raise NotHigmanianError(det.reason or "not Higmanian")
    params = det.params
    criterion = is_uniform_by_criterion(params)
    eigen, kr, qh = _spectral_verdict(params)
    definition, def_details = is_uniform_by_definition_any(scheme)
    dismantlable, dis_details = is_dismantlable_any(scheme, seed=seed)

    alt_agrees = True
    if det.alt_params is not None:
        alt_crit = is_uniform_by_criterion(det.alt_params)
        _, _, alt_qh = _spectral_verdict(det.alt_params)
        alt_agrees = (alt_crit == criterion
                      and alt_qh.verdict == qh.verdict)

    oracle_result = None
    if oracle:
        oracle_result = spectral.float_eigen_oracle(
            scheme, eigen, relation_order=det.relation_order)

    bundle = VerdictBundle(
        detection=det, params=params, criterion=criterion,
        definition=definition, q_higmanian=qh.verdict,
        dismantlable=dismantlable, eigen=eigen, kr=kr,
        q_certificates=qh.certificates,
        rhs_candidates=uniformity_rhs(params.f, params.m, params.n, params.k),
        definition_details=def_details, dismantle_details=dis_details,
        oracle=oracle_result, alt_agrees=alt_agrees)
    if raise_on_disagreement and not bundle.consistent:
        raise VerdictInconsistencyError(
            f"uniformity verdicts disagree on params {params}: "
            f"criterion={criterion} definition={definition} "
            f"q_higmanian={qh.verdict} dismantlable={dismantlable} "
            f"(labelings agree: {alt_agrees})", bundle)
    return bundle
