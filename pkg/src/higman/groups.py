"""Explicit finite groups stored as dense multiplication tables.

Everything downstream (difference sets, S-rings, Cayley schemes) reduces to
table lookups and integer convolutions, so a group here is nothing more than
an order x order table of element indices, validated on construction.
Built-in families cover the groups the constructions need: cyclic groups,
elementary abelian groups, Heisenberg groups over small finite fields,
central products of quaternion groups, generalized dihedral extensions and
direct products.  Spec strings: ``C:<n>``, ``EA:<p>:<k>``, ``Heis:<q>:<r>``,
``Q8cp:<r>``, ``GenDih:<spec>``, ``Prod:<spec>,<spec>``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

FULL_ASSOCIATIVITY_LIMIT = 512
_SPOT_CHECK_TRIPLES = 1000


class GroupError(ValueError):
    """Raised when a table, subgroup or map fails the group axioms."""


class FiniteGroup:
    """A finite group given by its multiplication table.

    Immutable after construction.  ``mul[x, y]`` is the index of the product
    x*y; identity and inverses are derived and checked.  Associativity is
    verified on all triples for order <= 512 and spot-checked above that.
    """

    def __init__(self, mul, labels: Sequence[str] | None = None,
                 name: str = "") -> None:
        mul = np.asarray(mul, dtype=np.int32)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1]:
            raise GroupError("multiplication table must be square")
        n = mul.shape[0]
        if n == 0:
            raise GroupError("empty group")
        if mul.min() < 0 or mul.max() >= n:
            raise GroupError("table entries out of range")
        self.order: int = n
        self.mul: np.ndarray = mul
        self.mul.setflags(write=False)
        self.name = name
        if labels is not None and len(labels) != n:
            raise GroupError("label count does not match order")
        self.element_labels = list(labels) if labels is not None else None

        rng = np.arange(n)
        ids = [i for i in range(n)
               if (mul[i] == rng).all() and (mul[:, i] == rng).all()]
        if len(ids) != 1:
            raise GroupError("table has no two-sided identity")
        self.identity: int = ids[0]

        xs, ys = np.nonzero(mul == self.identity)
        inv = np.full(n, -1, dtype=np.int32)
        for x, y in zip(xs, ys):
            if mul[y, x] != self.identity:
                continue
            if inv[x] not in (-1, y):
                raise GroupError(f"element {x} has two inverses")
            inv[x] = y
        if (inv < 0).any():
            raise GroupError("some element has no two-sided inverse")
        self.inv: np.ndarray = inv
        self.inv.setflags(write=False)

        self._check_associativity()

    def _check_associativity(self) -> None:
        mul = self.mul
        n = self.order
        if n <= FULL_ASSOCIATIVITY_LIMIT:
            for i in range(n):
                # (i*j)*k vs i*(j*k), vectorized over (j, k)
                if not (mul[mul[i], :] == mul[i][mul]).all():
                    j, k = np.argwhere(mul[mul[i], :] != mul[i][mul])[0]
                    raise GroupError(
                        f"associativity fails at ({i},{j},{k})")
        else:
            rng = random.Random(0x5eed)
            for _ in range(_SPOT_CHECK_TRIPLES):
                i, j, k = (rng.randrange(n) for _ in range(3))
                if mul[mul[i, j], k] != mul[i, mul[j, k]]:
                    raise GroupError(f"associativity fails at ({i},{j},{k})")

    # -- basic queries -------------------------------------------------------

    def op(self, x: int, y: int) -> int:
        return int(self.mul[x, y])

    def power(self, x: int, n: int) -> int:
        if n < 0:
            return self.power(int(self.inv[x]), -n)
        out, base = self.identity, x
        while n:
            if n & 1:
                out = int(self.mul[out, base])
            base = int(self.mul[base, base])
            n >>= 1
        return out

    def element_order(self, x: int) -> int:
        y, n = x, 1
        while y != self.identity:
            y = int(self.mul[y, x])
            n += 1
        return n

    def element_orders(self) -> list[int]:
        return [self.element_order(x) for x in range(self.order)]

    def is_abelian(self) -> bool:
        return bool((self.mul == self.mul.T).all())

    def label(self, x: int) -> str:
        return self.element_labels[x] if self.element_labels else str(x)

    def conjugate(self, g: int, x: int) -> int:
        """g * x * g^-1."""
        return int(self.mul[self.mul[g, x], self.inv[g]])

    # -- subgroups -----------------------------------------------------------

    def subgroup(self, elements: Iterable[int]) -> "Subgroup":
        return Subgroup(self, elements)

    def generated_subgroup(self, gens: Iterable[int]) -> "Subgroup":
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    for y in (int(self.mul[x, g]), int(self.mul[g, x])):
                        if y not in seen:
                            seen.add(y)
                            nxt.append(y)
            frontier = nxt
        return Subgroup(self, seen)

    def center(self) -> "Subgroup":
        els = [x for x in range(self.order)
               if (self.mul[x] == self.mul[:, x]).all()]
        return Subgroup(self, els)

    def cyclic_subgroups(self) -> list["Subgroup"]:
        found = {}
        for x in range(self.order):
            h = self.generated_subgroup([x])
            found.setdefault(h.elements, h)
        return sorted(found.values(), key=lambda h: (h.order, h.elements))

    def all_subgroups(self, limit: int = 128) -> list["Subgroup"]:
        """Every subgroup, by join-closure of the cyclic ones (small orders)."""
        if self.order > limit:
            raise GroupError(f"subgroup enumeration capped at order {limit}")
        pool = {h.elements: h for h in self.cyclic_subgroups()}
        grew = True
        while grew:
            grew = False
            items = list(pool.values())
            for a in items:
                for b in items:
                    j = self.generated_subgroup(set(a.elements) | set(b.elements))
                    if j.elements not in pool:
                        pool[j.elements] = j
                        grew = True
        return sorted(pool.values(), key=lambda h: (h.order, h.elements))

    def __repr__(self) -> str:
        tag = self.name or "FiniteGroup"
        return f"<{tag} of order {self.order}>"


class Subgroup:
    """A validated subgroup, kept as a sorted tuple of element indices."""

    def __init__(self, parent: FiniteGroup, elements: Iterable[int]) -> None:
        els = tuple(sorted(set(int(x) for x in elements)))
        if parent.identity not in els:
            raise GroupError("subgroup must contain the identity")
        sset = frozenset(els)
        for x in els:
            if int(parent.inv[x]) not in sset:
                raise GroupError(f"subgroup not closed under inverse at {x}")
            for y in els:
                if int(parent.mul[x, y]) not in sset:
                    raise GroupError(f"subgroup not closed at ({x},{y})")
        if parent.order % len(els):
            raise GroupError("subgroup order does not divide group order")
        self.parent = parent
        self.elements = els
        self.as_set = sset

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self.as_set

    def is_normal(self) -> bool:
        G = self.parent
        return all(G.conjugate(g, x) in self.as_set
                   for g in range(G.order) for x in self.elements)

    def __repr__(self) -> str:
        return f"<Subgroup of order {self.order}>"


def cosets(G: FiniteGroup, H: Subgroup) -> list[tuple[int, ...]]:
    """Right cosets Hg, each sorted, ordered by minimal element."""
    if H.parent is not G:
        raise GroupError("subgroup belongs to a different group")
    seen: set[int] = set()
    blocks = []
    for g in range(G.order):
        if g in seen:
            continue
        block = tuple(sorted(int(G.mul[h, g]) for h in H.elements))
        seen.update(block)
        blocks.append(block)
    return sorted(blocks, key=lambda b: b[0])


# -- integral group ring ----------------------------------------------------

class GroupRingElement:
    """An element of the integral group ring, as a coefficient vector."""

    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: FiniteGroup, coeffs) -> None:
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.shape != (parent.order,):
            raise GroupError("coefficient vector has wrong length")
        self.parent = parent
        self.coeffs = coeffs

    @classmethod
    def from_set(cls, parent: FiniteGroup, subset: Iterable[int]) -> "GroupRingElement":
        c = np.zeros(parent.order, dtype=np.int64)
        for x in subset:
            c[x] += 1
        return cls(parent, c)

    @classmethod
    def unit(cls, parent: FiniteGroup) -> "GroupRingElement":
        c = np.zeros(parent.order, dtype=np.int64)
        c[parent.identity] = 1
        return cls(parent, c)

    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.nonzero(self.coeffs)[0])

    def star(self) -> "GroupRingElement":
        """Pull coefficients back along inversion: (sum a_x x) -> sum a_x x^-1."""
        c = np.zeros_like(self.coeffs)
        c[self.parent.inv] = self.coeffs
        return GroupRingElement(self.parent, c)

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check(other)
        return GroupRingElement(self.parent, self.coeffs + other.coeffs)

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check(other)
        return GroupRingElement(self.parent, self.coeffs - other.coeffs)

    def __rmul__(self, k: int) -> "GroupRingElement":
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        return GroupRingElement(self.parent, int(k) * self.coeffs)

    def __mul__(self, other) -> "GroupRingElement":
        if isinstance(other, (int, np.integer)):
            return self.__rmul__(other)
        return gre_multiply(self, other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupRingElement)
                and self.parent is other.parent
                and (self.coeffs == other.coeffs).all())

    def __hash__(self):
        return hash((id(self.parent), self.coeffs.tobytes()))

    def _check(self, other: "GroupRingElement") -> None:
        if not isinstance(other, GroupRingElement) or other.parent is not self.parent:
            raise GroupError("mismatched parent groups")

    def __repr__(self) -> str:
        terms = [f"{int(c)}*{self.parent.label(i)}"
                 for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


def gre_multiply(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    """Convolution: the coefficient of g is sum over xy = g of a(x)b(y)."""
    a._check(b)
    G = a.parent
    out = np.zeros(G.order, dtype=np.int64)
    xs = np.nonzero(a.coeffs)[0]
    ys = np.nonzero(b.coeffs)[0]
    if len(xs) > len(ys):
        for y in ys:
            np.add.at(out, G.mul[xs, y], a.coeffs[xs] * b.coeffs[y])
    else:
        for x in xs:
            np.add.at(out, G.mul[x, ys], a.coeffs[x] * b.coeffs[ys])
    return GroupRingElement(G, out)


# -- isomorphisms ------------------------------------------------------------

@dataclass(frozen=True)
class GroupIsomorphism:
    """A validated isomorphism between two explicit groups."""

    source: FiniteGroup
    target: FiniteGroup
    map: tuple[int, ...]

    def __post_init__(self):
        G, H, m = self.source, self.target, self.map
        if G.order != H.order or sorted(m) != list(range(G.order)):
            raise GroupError("map is not a bijection")
        marr = np.asarray(m, dtype=np.int32)
        if not (marr[G.mul] == H.mul[np.ix_(marr, marr)]).all():
            raise GroupError("map is not a homomorphism")

    def __call__(self, x: int) -> int:
        return self.map[x]

    def inverse(self) -> "GroupIsomorphism":
        inv = [0] * len(self.map)
        for x, y in enumerate(self.map):
            inv[y] = x
        return GroupIsomorphism(self.target, self.source, tuple(inv))

    def compose(self, other: "GroupIsomorphism") -> "GroupIsomorphism":
        """self after other (other first)."""
        if other.target is not self.source:
            raise GroupError("composition mismatch")
        return GroupIsomorphism(other.source, self.target,
                                tuple(self.map[y] for y in other.map))


def _generating_sequence(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    closure = {G.identity}
    for x in range(G.order):
        if x not in closure:
            gens.append(x)
            closure = set(G.generated_subgroup(gens).elements)
            if len(closure) == G.order:
                break
    return gens


def isomorphisms(G: FiniteGroup, H: FiniteGroup) -> Iterator[GroupIsomorphism]:
    """Yield all isomorphisms G -> H (backtracking; meant for small orders)."""
    if G.order != H.order:
        return
    if sorted(G.element_orders()) != sorted(H.element_orders()):
        return
    gens = _generating_sequence(G)
    g_orders = [G.element_order(g) for g in gens]
    h_orders = H.element_orders()

    def words() -> list[tuple[int, ...]]:
        # express every element of G as a product of generators
        word = {G.identity: ()}
        frontier = [G.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for gi, g in enumerate(gens):
                    y = int(G.mul[x, g])
                    if y not in word:
                        word[y] = word[x] + (gi,)
                        nxt.append(y)
            frontier = nxt
        return [word[x] for x in range(G.order)]

    wordlist = words()

    def build(images: list[int]) -> tuple[int, ...] | None:
        out = []
        for w in wordlist:
            y = H.identity
            for gi in w:
                y = int(H.mul[y, images[gi]])
            out.append(y)
        if len(set(out)) != len(out):
            return None
        return tuple(out)

    def extend(images: list[int]) -> Iterator[GroupIsomorphism]:
        if len(images) == len(gens):
            m = build(images)
            if m is not None:
                try:
                    yield GroupIsomorphism(G, H, m)
                except GroupError:
                    pass
            return
        want = g_orders[len(images)]
        for h in range(H.order):
            if h_orders[h] == want:
                yield from extend(images + [h])

    yield from extend([])


def automorphisms(G: FiniteGroup) -> list[GroupIsomorphism]:
    return list(isomorphisms(G, G))


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return next(iter(isomorphisms(G, H)), None) is not None


# -- finite fields (internal, for the Heisenberg family) ---------------------

# fixed irreducible polynomials (coefficients ascending, monic) for the small
# prime powers the constructions touch; anything else falls back to the
# lexicographically least monic irreducible, which is deterministic too
_IRREDUCIBLE: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
    (7, 2): (3, 6, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1 if p == 2 else 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, i) with q = p^i, or raise."""
    if q < 2:
        raise GroupError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                break
            i = 0
            m = q
            while m % p == 0:
                m //= p
                i += 1
            if m != 1:
                raise GroupError(f"{q} is not a prime power")
            return p, i
    raise GroupError(f"{q} is not a prime power")


class _GF:
    """Arithmetic in GF(p^i), elements encoded as base-p digit strings."""

    def __init__(self, p: int, i: int) -> None:
        self.p, self.i, self.q = p, i, p ** i
        if i == 1:
            self.poly = None
        else:
            poly = _IRREDUCIBLE.get((p, i))
            if poly is None or not self._irreducible(poly):
                poly = self._least_irreducible()
            self.poly = poly
        self._mul_table = None

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.i):
            out.append(x % self.p)
            x //= self.p
        return out

    def _encode(self, digits: Sequence[int]) -> int:
        out = 0
        for d in reversed(digits):
            out = out * self.p + d % self.p
        return out

    def add(self, x: int, y: int) -> int:
        return self._encode([a + b for a, b in zip(self._digits(x), self._digits(y))])

    def neg(self, x: int) -> int:
        return self._encode([-a for a in self._digits(x)])

    def mul(self, x: int, y: int) -> int:
        if self.i == 1:
            return (x * y) % self.p
        a, b = self._digits(x), self._digits(y)
        prod = [0] * (2 * self.i - 1)
        for ai, av in enumerate(a):
            for bi, bv in enumerate(b):
                prod[ai + bi] += av * bv
        # reduce modulo the fixed irreducible polynomial
        for d in range(len(prod) - 1, self.i - 1, -1):
            c = prod[d] % self.p
            if c:
                for j in range(self.i):
                    prod[d - self.i + j] -= c * self.poly[j]
            prod[d] = 0
        return self._encode(prod[:self.i])

    def _poly_mod(self, num: list[int], den: Sequence[int]) -> list[int]:
        num = [c % self.p for c in num]
        dd = len(den) - 1
        while len(num) > dd:
            lead = num[-1]
            if lead:
                for j in range(len(den)):
                    num[len(num) - len(den) + j] = (
                        num[len(num) - len(den) + j] - lead * den[j]) % self.p
            num.pop()
        return num

    def _irreducible(self, poly: Sequence[int]) -> bool:
        if poly[-1] != 1 or len(poly) != self.i + 1:
            return False
        deg = self.i
        for d in range(1, deg // 2 + 1):
            for cand in range(self.p ** d):
                den = self._digits_n(cand, d) + [1]
                num = list(poly)
                if not any(self._poly_mod(num, den)):
                    return False
        return True

    def _digits_n(self, x: int, n: int) -> list[int]:
        out = []
        for _ in range(n):
            out.append(x % self.p)
            x //= self.p
        return out

    def _least_irreducible(self) -> tuple[int, ...]:
        for tail in range(self.p ** self.i):
            poly = tuple(self._digits_n(tail, self.i)) + (1,)
            if self._irreducible(poly):
                return poly
        raise GroupError("no irreducible polynomial found")  # pragma: no cover


# -- built-in families -------------------------------------------------------

def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group needs order >= 1")
    idx = np.arange(n)
    mul = (idx[:, None] + idx[None, :]) % n
    return FiniteGroup(mul, labels=[str(i) for i in range(n)], name=f"C:{n}")


def direct_product(A: FiniteGroup, B: FiniteGroup, name: str = "") -> FiniteGroup:
    na, nb = A.order, B.order
    mul = np.empty((na * nb, na * nb), dtype=np.int32)
    for a1 in range(na):
        arow = A.mul[a1]
        for b1 in range(nb):
            mul[a1 * nb + b1] = (arow[:, None] * nb + B.mul[b1][None, :]).reshape(-1)
    labels = None
    if A.element_labels or B.element_labels:
        labels = [f"({A.label(a)},{B.label(b)})"
                  for a in range(na) for b in range(nb)]
    return FiniteGroup(mul, labels=labels, name=name or f"Prod:{A.name},{B.name}")


def product_index(A: FiniteGroup, B: FiniteGroup, a: int, b: int) -> int:
    """Index of (a, b) in direct_product(A, B)."""
    return a * B.order + b


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    if k < 1:
        raise GroupError("rank must be >= 1")
    G = cyclic_group(p)
    for _ in range(k - 1):
        G = direct_product(G, cyclic_group(p))
    return FiniteGroup(G.mul, name=f"EA:{p}:{k}")


def heisenberg_group(q: int, r: int) -> FiniteGroup:
    """Tuples (a, b, c) in F_q^r x F_q^r x F_q with
    (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a.b')."""
    if r < 1:
        raise GroupError("r must be >= 1")
    p, i = prime_power(q)
    F = _GF(p, i)
    n = q ** (2 * r + 1)

    def unpack(x: int) -> tuple[list[int], list[int], int]:
        c = x % q
        x //= q
        b = [0] * r
        for t in range(r - 1, -1, -1):
            b[t] = x % q
            x //= q
        a = [0] * r
        for t in range(r - 1, -1, -1):
            a[t] = x % q
            x //= q
        return a, b, c

    def pack(a: Sequence[int], b: Sequence[int], c: int) -> int:
        x = 0
        for t in range(r):
            x = x * q + a[t]
        for t in range(r):
            x = x * q + b[t]
        return x * q + c

    mul = np.empty((n, n), dtype=np.int32)
    parts = [unpack(x) for x in range(n)]
    for x, (a1, b1, c1) in enumerate(parts):
        for y, (a2, b2, c2) in enumerate(parts):
            a = [F.add(a1[t], a2[t]) for t in range(r)]
            b = [F.add(b1[t], b2[t]) for t in range(r)]
            dot = 0
            for t in range(r):
                dot = F.add(dot, F.mul(a1[t], b2[t]))
            c = F.add(F.add(c1, c2), dot)
            mul[x, y] = pack(a, b, c)
    return FiniteGroup(mul, name=f"Heis:{q}:{r}")


_Q8_LABELS = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]


def quaternion_group() -> FiniteGroup:
    # elements encoded as (axis, sign): index = 2*axis + (sign < 0)
    axis_mul = {  # (axis, axis) -> (axis, sign)
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }
    mul = np.empty((8, 8), dtype=np.int32)
    for x in range(8):
        ax, sx = x // 2, -1 if x % 2 else 1
        for y in range(8):
            ay, sy = y // 2, -1 if y % 2 else 1
            az, sz = axis_mul[(ax, ay)]
            s = sx * sy * sz
            mul[x, y] = 2 * az + (0 if s > 0 else 1)
    return FiniteGroup(mul, labels=_Q8_LABELS, name="Q8cp:1")


def quotient_group(G: FiniteGroup, N: Subgroup, name: str = "") -> FiniteGroup:
    if not N.is_normal():
        raise GroupError("quotient needs a normal subgroup")
    blocks = cosets(G, N)
    block_of = np.empty(G.order, dtype=np.int32)
    for bi, block in enumerate(blocks):
        for x in block:
            block_of[x] = bi
    k = len(blocks)
    mul = np.empty((k, k), dtype=np.int32)
    for bi, bx in enumerate(blocks):
        for bj, by in enumerate(blocks):
            mul[bi, bj] = block_of[G.mul[bx[0], by[0]]]
    return FiniteGroup(mul, name=name)


def central_product_q8(r: int) -> FiniteGroup:
    """Central product of r copies of Q8: identify the central involutions."""
    if r < 1:
        raise GroupError("r must be >= 1")
    G = quaternion_group()
    for _ in range(r - 1):
        P = direct_product(G, quaternion_group())
        # identify the two central involutions: kill (z, -1) with z = old -1
        z_left = product_index(G, quaternion_group(), _central_involution(G), 1)
        K = P.generated_subgroup([z_left])
        G = quotient_group(P, K)
    return FiniteGroup(G.mul, name=f"Q8cp:{r}")


def _central_involution(G: FiniteGroup) -> int:
    zs = [x for x in G.center().elements
          if x != G.identity and G.element_order(x) == 2]
    if len(zs) != 1:
        raise GroupError("expected a unique central involution")
    return zs[0]


def generalized_dihedral(G: FiniteGroup) -> FiniteGroup:
    """<G, u> with u of order 2 inverting every element; abelian G only.

    Elements are enumerated as G followed by Gu, so index g is g and
    index |G|+g is the element g*u.
    """
    if not G.is_abelian():
        raise GroupError("generalized dihedral needs an abelian group")
    n = G.order
    mul = np.empty((2 * n, 2 * n), dtype=np.int32)
    # (g)(h) = gh ; (g)(hu) = (gh)u ; (gu)(h) = (g h^-1)u ; (gu)(hu) = g h^-1
    mul[:n, :n] = G.mul
    mul[:n, n:] = G.mul + n
    ginv = G.mul[:, G.inv]
    mul[n:, :n] = ginv + n
    mul[n:, n:] = ginv
    labels = None
    if G.element_labels:
        labels = [G.label(g) for g in range(n)] + [f"{G.label(g)}u" for g in range(n)]
    return FiniteGroup(mul, labels=labels, name=f"GenDih:{G.name}" if G.name else "")


def build_family(spec: str) -> FiniteGroup:
    """Build a named group from a family spec string."""
    spec = spec.strip()
    head, _, rest = spec.partition(":")
    if head == "C":
        return cyclic_group(_as_int(rest, "C:<n>"))
    if head == "EA":
        p, k = _int_parts(rest, 2, "EA:<p>:<k>")
        return elementary_abelian(p, k)
    if head == "Heis":
        q, r = _int_parts(rest, 2, "Heis:<q>:<r>")
        return heisenberg_group(q, r)
    if head == "Q8cp":
        return central_product_q8(_as_int(rest, "Q8cp:<r>"))
    if head == "GenDih":
        if not rest:
            raise GroupError("GenDih needs an inner spec")
        return generalized_dihedral(build_family(rest))
    if head == "Prod":
        parts = rest.split(",")
        for cut in range(1, len(parts)):
            left, right = ",".join(parts[:cut]), ",".join(parts[cut:])
            try:
                return direct_product(build_family(left), build_family(right),
                                      name=f"Prod:{left},{right}")
            except GroupError:
                continue
        raise GroupError(f"cannot parse product spec {spec!r}")
    raise GroupError(f"unknown family spec {spec!r}")


def _as_int(s: str, usage: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise GroupError(f"bad spec, expected {usage}") from None


def _int_parts(s: str, n: int, usage: str) -> list[int]:
    parts = s.split(":")
    if len(parts) != n:
        raise GroupError(f"bad spec, expected {usage}")
    return [_as_int(x, usage) for x in parts]


# -- file format --------------------------------------------------------------

def write_group(G: FiniteGroup, path) -> None:
    """Text format: ``group <order>`` then the table rows; identity is 0."""
    mul = G.mul
    if G.identity != 0:
        perm = [G.identity] + [x for x in range(G.order) if x != G.identity]
        pos = np.argsort(perm)
        mul = pos[mul[np.ix_(perm, perm)]]
    lines = [f"group {G.order}"]
    lines += [" ".join(str(int(x)) for x in row) for row in mul]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_group(path) -> FiniteGroup:
    with open(path) as fh:
        lines = [ln for ln in (l.strip() for l in fh) if ln]
    if not lines or not lines[0].startswith("group "):
        raise GroupError("group file must start with 'group <order>'")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise GroupError("bad group header") from None
    if len(lines) != n + 1:
        raise GroupError(f"expected {n} table rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        row = [int(tok) for tok in ln.split()]
        if len(row) != n:
            raise GroupError("table row has wrong length")
        rows.append(row)
    G = FiniteGroup(np.array(rows, dtype=np.int32))
    if G.identity != 0:
        raise GroupError("group file identity must be index 0")
    return G
