"""Association schemes as dense color matrices.

A scheme on v points is a v x v matrix of colors 0..d where color 0 is the
diagonal, every color has an inverse color landing on the transposed cells,
and the count of two-colored paths between two points depends only on the
color joining them (the intersection numbers p_ij^k).  Validation derives
the full intersection tensor and rejects non-schemes with the first violated
axiom.  Quotients, restrictions, wreath detection and Cayley schemes from
group partitions all operate on this one representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .groups import FiniteGroup

PARABOLIC_RANK_LIMIT = 16


class SchemeError(ValueError):
    """A matrix failed a scheme axiom; carries a witness when available."""

    def __init__(self, message: str, witness: tuple | None = None) -> None:
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class IntersectionNumbers:
    rank: int
    p: np.ndarray          # (rank, rank, rank) tensor, p[i, j, k] = p_ij^k
    valencies: np.ndarray  # n_i = p[i, i*, 0]
    inverse: np.ndarray    # color involution i -> i*


class SchemeTable:
    """A validated association scheme; construct via :func:`validate`."""

    def __init__(self, color: np.ndarray, numbers: IntersectionNumbers) -> None:
        self.color = color
        self.color.setflags(write=False)
        self.v: int = color.shape[0]
        self.rank: int = numbers.rank
        self.intersection = numbers
        self.p = numbers.p
        self.valencies = numbers.valencies
        self.inverse = numbers.inverse
        self._adj: dict[int, np.ndarray] = {}

    def adjacency(self, i: int) -> np.ndarray:
        """0/1 int matrix of relation i."""
        if i not in self._adj:
            m = (self.color == i).astype(np.int64)
            m.setflags(write=False)
            self._adj[i] = m
        return self._adj[i]

    def is_symmetric(self) -> bool:
        return bool((self.inverse == np.arange(self.rank)).all())

    def is_commutative(self) -> bool:
        return bool((self.p == self.p.transpose(1, 0, 2)).all())

    def __repr__(self) -> str:
        return f"<SchemeTable v={self.v} rank={self.rank}>"


def validate(matrix) -> SchemeTable:
    """Check the scheme axioms and derive the intersection tensor."""
    color = np.asarray(matrix)
    if color.ndim != 2 or color.shape[0] != color.shape[1]:
        raise SchemeError("color matrix must be square")
    if not np.issubdtype(color.dtype, np.integer):
        raise SchemeError("color matrix must be integral")
    color = color.astype(np.int16)
    v = color.shape[0]
    if v == 0:
        raise SchemeError("empty point set")
    if color.min() < 0:
        raise SchemeError("negative color")
    rank = int(color.max()) + 1
    used = np.zeros(rank, dtype=bool)
    used[np.unique(color)] = True
    if not used.all():
        raise SchemeError(f"color {int(np.nonzero(~used)[0][0])} unused")

    diag = np.diagonal(color)
    if (diag != 0).any():
        x = int(np.nonzero(diag)[0][0])
        raise SchemeError(f"diagonal cell ({x},{x}) has color {int(color[x, x])}",
                          witness=(x, x))
    offdiag_zero = np.argwhere((color == 0) & ~np.eye(v, dtype=bool))
    if len(offdiag_zero):
        x, y = map(int, offdiag_zero[0])
        raise SchemeError(f"color 0 occurs off the diagonal at ({x},{y})",
                          witness=(x, y))

    # inverse colors: the transpose of each relation must be a single color
    colorT = color.T
    istar = np.empty(rank, dtype=np.int16)
    rep = _first_cells(color, rank)
    for i in range(rank):
        x, y = rep[i]
        istar[i] = color[y, x]
    bad = np.argwhere(colorT != istar[color])
    if len(bad):
        x, y = map(int, bad[0])
        raise SchemeError(
            f"relation {int(color[x, y])} has no single inverse color "
            f"(witness ({x},{y}))", witness=(x, y))
    if (istar[istar] != np.arange(rank)).any():
        raise SchemeError("color inversion is not an involution")

    # intersection numbers: B_i B_j must be constant on every color class
    basis = [(color == i).astype(np.float64) for i in range(rank)]
    p = np.zeros((rank, rank, rank), dtype=np.int64)
    rep_x = np.array([c[0] for c in rep])
    rep_y = np.array([c[1] for c in rep])
    for i in range(rank):
        for j in range(rank):
            prod = np.rint(basis[i] @ basis[j]).astype(np.int64)
            p[i, j] = prod[rep_x, rep_y]
            bad = np.argwhere(prod != p[i, j][color])
            if len(bad):
                x, y = map(int, bad[0])
                k = int(color[x, y])
                raise SchemeError(
                    f"p_{i},{j}^{k} is not constant: cell ({x},{y}) has "
                    f"{int(prod[x, y])}, expected {int(p[i, j, k])}",
                    witness=(i, j, k, x, y))

    valencies = np.array([p[i, istar[i], 0] for i in range(rank)], dtype=np.int64)
    numbers = IntersectionNumbers(rank=rank, p=p, valencies=valencies,
                                  inverse=istar.astype(np.int64))
    return SchemeTable(color, numbers)


def _first_cells(color: np.ndarray, rank: int) -> list[tuple[int, int]]:
    """Row-major first occurrence of each color."""
    rep: list[tuple[int, int] | None] = [None] * rank
    remaining = rank
    for x in range(color.shape[0]):
        if not remaining:
            break
        row = color[x]
        for i in range(rank):
            if rep[i] is None:
                hits = np.nonzero(row == i)[0]
                if len(hits):
                    rep[i] = (x, int(hits[0]))
                    remaining -= 1
    return rep  # type: ignore[return-value]


def trivial_scheme(v: int) -> SchemeTable:
    """The rank-2 scheme (rank 1 when v = 1): diagonal plus everything else."""
    color = np.ones((v, v), dtype=np.int16) - np.eye(v, dtype=np.int16)
    return validate(color)


# -- parabolics ---------------------------------------------------------------

@dataclass(frozen=True)
class Parabolic:
    """An equivalence relation that is a union of basic relations."""

    scheme: SchemeTable = field(repr=False)
    colors: frozenset[int]
    classes: tuple[tuple[int, ...], ...]
    class_of: np.ndarray = field(repr=False)

    @property
    def n_class(self) -> int:
        return len(self.classes[0])

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def is_trivial(self) -> bool:
        return self.n_class in (1, self.scheme.v)


def _equivalence_from_colors(scheme: SchemeTable,
                             colors: frozenset[int]) -> Parabolic | None:
    istar = scheme.inverse
    if any(int(istar[c]) not in colors for c in colors):
        return None
    mask = np.isin(scheme.color, list(colors))
    # transitivity: reachability within the union must not leave it
    reach = (mask.astype(np.float64) @ mask.astype(np.float64)) > 0
    if (reach & ~mask).any():
        return None
    _, class_of = np.unique(mask, axis=0, return_inverse=True)
    # order classes by minimal point and check equal sizes
    order = {}
    for x in range(scheme.v):
        order.setdefault(int(class_of[x]), []).append(x)
    blocks = sorted((tuple(pts) for pts in order.values()), key=lambda b: b[0])
    sizes = {len(b) for b in blocks}
    if len(sizes) != 1:
        return None
    relabel = np.empty(len(blocks), dtype=np.int64)
    for bi, b in enumerate(blocks):
        relabel[class_of[b[0]]] = bi
    return Parabolic(scheme, colors, tuple(blocks), relabel[class_of])


def parabolics(scheme: SchemeTable) -> list[Parabolic]:
    """All parabolics, found by scanning color subsets containing 0."""
    d = scheme.rank - 1
    if scheme.rank > PARABOLIC_RANK_LIMIT:
        raise SchemeError(
            f"parabolic scan is exponential in rank; rank {scheme.rank} over "
            f"limit {PARABOLIC_RANK_LIMIT}")
    found = []
    for bits in range(1 << d):
        colors = frozenset({0} | {i + 1 for i in range(d) if bits >> i & 1})
        parab = _equivalence_from_colors(scheme, colors)
        if parab is not None:
            found.append(parab)
    return sorted(found, key=lambda e: e.n_class)


def nontrivial_parabolics(scheme: SchemeTable) -> list[Parabolic]:
    return [e for e in parabolics(scheme) if not e.is_trivial()]


def quotient(scheme: SchemeTable, parab: Parabolic) -> SchemeTable:
    """Scheme on the classes; block colors keyed by the color sets they meet."""
    if parab.scheme is not scheme:
        raise SchemeError("parabolic belongs to a different scheme")
    c = parab.num_classes
    seen: dict[frozenset[int], int] = {}
    qcolor = np.zeros((c, c), dtype=np.int16)
    for a in range(c):
        pa = list(parab.classes[a])
        for b in range(c):
            if a == b:
                continue
            block = scheme.color[np.ix_(pa, list(parab.classes[b]))]
            key = frozenset(int(x) for x in np.unique(block))
            if key not in seen:
                seen[key] = len(seen) + 1
            qcolor[a, b] = seen[key]
    return validate(qcolor)


def restriction(scheme: SchemeTable, points: Sequence[int]) -> SchemeTable:
    """Restrict to a point subset, relabel colors densely, re-validate."""
    pts = sorted(set(int(x) for x in points))
    sub = scheme.color[np.ix_(pts, pts)]
    relabel: dict[int, int] = {}
    out = np.empty_like(sub)
    for x in range(len(pts)):
        for y in range(len(pts)):
            col = int(sub[x, y])
            if col not in relabel:
                relabel[col] = len(relabel)
            out[x, y] = relabel[col]
    return validate(out)


def is_wreath_over(scheme: SchemeTable, parab: Parabolic) -> bool:
    """True when every relation outside the parabolic is block-constant
    on off-diagonal class pairs (the wreath-product pattern)."""
    if parab.is_trivial():
        raise SchemeError("wreath test needs a nontrivial proper parabolic")
    c = parab.num_classes
    size = parab.n_class
    member = np.zeros((scheme.v, c), dtype=np.float64)
    member[np.arange(scheme.v), parab.class_of] = 1.0
    offdiag = ~np.eye(c, dtype=bool)
    for col in range(scheme.rank):
        if col in parab.colors:
            continue
        counts = np.rint(member.T @ scheme.adjacency(col) @ member).astype(np.int64)
        vals = counts[offdiag]
        if not np.isin(vals, (0, size * size)).all():
            return False
    return True


def is_decomposable(scheme: SchemeTable) -> bool:
    """True when the scheme is a wreath product over some nontrivial parabolic."""
    return any(is_wreath_over(scheme, e) for e in nontrivial_parabolics(scheme))


def wreath_product(inner: SchemeTable, outer: SchemeTable) -> SchemeTable:
    """Wreath product: inner scheme inside each fiber, outer between fibers."""
    ni, no = inner.v, outer.v
    v = ni * no
    color = np.empty((v, v), dtype=np.int16)
    for b1 in range(no):
        for b2 in range(no):
            blk = np.s_[b1 * ni:(b1 + 1) * ni, b2 * ni:(b2 + 1) * ni]
            if b1 == b2:
                color[blk] = inner.color
            else:
                color[blk] = inner.rank + outer.color[b1, b2] - 1
    return validate(color)


# -- Cayley schemes ------------------------------------------------------------

def cayley_scheme(G: FiniteGroup, parts: Sequence[Iterable[int]]) -> SchemeTable:
    """Scheme of a group partition: color(x, y) = part containing y*x^-1.

    The partition must have {e} as part 0 and be inverse-closed as a set
    system; validation then decides whether it spans an S-ring.
    """
    part_sets = [frozenset(int(x) for x in p) for p in parts]
    total = sum(len(p) for p in part_sets)
    union = frozenset().union(*part_sets)
    if total != G.order or len(union) != G.order:
        raise SchemeError("parts do not partition the group")
    if part_sets[0] != frozenset({G.identity}):
        raise SchemeError("part 0 must be the identity singleton")
    inv_sets = {frozenset(int(G.inv[x]) for x in p) for p in part_sets}
    if inv_sets != set(part_sets):
        raise SchemeError("partition is not inverse-closed")

    part_of = np.empty(G.order, dtype=np.int16)
    for pi, p in enumerate(part_sets):
        for x in p:
            part_of[x] = pi
    # color[x, y] = part(y x^-1):  mul[:, inv][y, x] = y * inv(x)
    color = part_of[G.mul[:, G.inv]].T
    try:
        return validate(np.ascontiguousarray(color))
    except SchemeError as exc:
        raise SchemeError(
            f"partition is not an S-ring: {exc}", witness=exc.witness) from exc


# -- file format ----------------------------------------------------------------

def write_scheme(scheme: SchemeTable, path) -> None:
    """Text format: ``scheme <v> <rank>`` then v rows of colors."""
    lines = [f"scheme {scheme.v} {scheme.rank}"]
    lines += [" ".join(str(int(x)) for x in row) for row in scheme.color]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


class SchemeParseError(ValueError):
    """The file is not in the scheme format (distinct from axiom failures)."""


def parse_scheme_file(path) -> tuple[np.ndarray, int]:
    """Read the color matrix and declared rank without validating axioms."""
    with open(path) as fh:
        lines = [ln for ln in (l.strip() for l in fh) if ln]
    if not lines or not lines[0].startswith("scheme "):
        raise SchemeParseError("scheme file must start with 'scheme <v> <rank>'")
    head = lines[0].split()
    try:
        v, rank = int(head[1]), int(head[2])
    except (IndexError, ValueError):
        raise SchemeParseError("bad scheme header") from None
    if len(lines) != v + 1:
        raise SchemeParseError(f"expected {v} rows, found {len(lines) - 1}")
    rows = []
    for li, ln in enumerate(lines[1:]):
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError:
            raise SchemeParseError(f"row {li + 1}: non-integer entry") from None
        if len(row) != v:
            raise SchemeParseError(
                f"row {li + 1} has {len(row)} entries, expected {v}")
        rows.append(row)
    return np.array(rows, dtype=np.int16), rank


def read_scheme(path) -> SchemeTable:
    matrix, rank = parse_scheme_file(path)
    scheme = validate(matrix)
    if scheme.rank != rank:
        raise SchemeError(
            f"header says rank {rank}, matrix has rank {scheme.rank}")
    return scheme


def sring_structure_constants(G: FiniteGroup,
                              parts: Sequence[Iterable[int]]) -> np.ndarray:
    """Structure constants p_XY^Z of a partition, from group-ring products.

    Raises when a product is not constant on some part, i.e. when the
    partition does not span an S-ring.
    """
    from .groups import GroupRingElement, gre_multiply

    gres = [GroupRingElement.from_set(G, p) for p in parts]
    idx = [sorted(p) for p in parts]
    r = len(parts)
    p = np.zeros((r, r, r), dtype=np.int64)
    for i in range(r):
        for j in range(r):
            prod = gre_multiply(gres[i], gres[j]).coeffs
            for k in range(r):
                vals = prod[idx[k]]
                if vals.min() != vals.max():
                    raise SchemeError(
                        f"product of parts {i},{j} not constant on part {k}")
                p[i, j, k] = vals[0]
    return p
