import random

import numpy as np
import pytest

from higman.groups import cyclic_group, quaternion_group
from higman.schemes import (SchemeError, SchemeParseError, cayley_scheme,
                            is_decomposable, is_wreath_over,
                            nontrivial_parabolics, parabolics,
                            parse_scheme_file, quotient, read_scheme,
                            restriction, sring_structure_constants,
                            trivial_scheme, validate, wreath_product,
                            write_scheme)


def test_one_point_scheme():
    s = validate(np.array([[0]]))
    assert s.rank == 1 and s.v == 1
    assert s.p[0, 0, 0] == 1


def test_complete_graph_scheme():
    s = trivial_scheme(4)
    assert s.rank == 2
    assert s.valencies.tolist() == [1, 3]


def test_axiom_rejections():
    with pytest.raises(SchemeError, match="diagonal"):
        validate(np.array([[1, 0], [0, 1]]) - 0 + np.array([[1, 0], [0, 0]]))
    with pytest.raises(SchemeError, match="off the diagonal"):
        validate(np.array([[0, 0], [0, 0]]))
    with pytest.raises(SchemeError, match="unused"):
        validate(np.array([[0, 2], [2, 0]]))
    # inverse-closure violation: color 1 transposes to two different colors
    bad = np.array([
        [0, 1, 1],
        [2, 0, 1],
        [1, 2, 0]])
    with pytest.raises(SchemeError):
        validate(bad)
    # intersection-number violation carries a witness triple
    bad2 = np.array([[0, 1], [2, 0]])
    with pytest.raises(SchemeError, match="not constant") as err:
        validate(bad2)
    assert err.value.witness is not None


def test_intersection_tensor_probes(q8_construction):
    scheme = q8_construction.result.scheme
    assert int(scheme.valencies.sum()) == scheme.v
    inv = scheme.inverse
    assert all(scheme.valencies[i] == scheme.valencies[inv[i]]
               for i in range(scheme.rank))
    rng = random.Random(3)
    color, p = scheme.color, scheme.p
    for _ in range(1000):
        x = rng.randrange(scheme.v)
        y = rng.randrange(scheme.v)
        i = rng.randrange(scheme.rank)
        j = rng.randrange(scheme.rank)
        count = int(np.count_nonzero(
            (color[x, :] == i) & (color[:, y] == j)))
        assert count == p[i, j, color[x, y]]


def test_parabolics_rank2():
    s = trivial_scheme(5)
    ps = parabolics(s)
    assert len(ps) == 2
    assert ps[0].n_class == 1 and ps[1].n_class == 5


def test_parabolics_wreath():
    w = wreath_product(trivial_scheme(2), trivial_scheme(3))
    ps = parabolics(w)
    assert len(ps) == 3
    assert [p.n_class for p in ps] == [1, 2, 6]


def test_parabolics_higmanian(q8_construction):
    scheme = q8_construction.result.scheme
    ps = parabolics(scheme)
    assert [(p.num_classes, p.n_class) for p in ps] == [
        (24, 1), (12, 2), (3, 8), (1, 24)]


def test_quotient():
    w = wreath_product(trivial_scheme(2), trivial_scheme(3))
    full = parabolics(w)[-1]
    assert quotient(w, full).v == 1
    diag = parabolics(w)[0]
    q = quotient(w, diag)
    assert q.v == w.v and q.rank == w.rank


def test_quotient_higmanian_is_trivial_wreath(q8_construction):
    scheme = q8_construction.result.scheme
    e = nontrivial_parabolics(scheme)[0]
    q = quotient(scheme, e)
    assert q.rank == 3
    mid = nontrivial_parabolics(q)
    assert len(mid) == 1 and is_wreath_over(q, mid[0])


def test_restriction():
    w = wreath_product(trivial_scheme(2), trivial_scheme(3))
    assert restriction(w, [2]).rank == 1
    r = restriction(w, range(w.v))
    assert r.v == w.v and r.rank == w.rank


def test_restriction_higmanian_f_class(q8_construction):
    scheme = q8_construction.result.scheme
    f = nontrivial_parabolics(scheme)[1]
    assert f.n_class == 8
    ranks = {restriction(scheme, cls).rank for cls in f.classes}
    assert ranks == {3}


def test_quotient_tower_rank(q8_construction):
    # quotient(quotient(X, E), F/E) has the rank of quotient(X, F)
    scheme = q8_construction.result.scheme
    e, f = nontrivial_parabolics(scheme)
    q_e = quotient(scheme, e)
    f_over_e = nontrivial_parabolics(q_e)[0]
    assert quotient(q_e, f_over_e).rank == quotient(scheme, f).rank


def test_wreath_detection():
    w = wreath_product(trivial_scheme(2), trivial_scheme(3))
    mid = nontrivial_parabolics(w)[0]
    assert is_wreath_over(w, mid)
    assert is_decomposable(w)
    with pytest.raises(SchemeError):
        is_wreath_over(w, parabolics(w)[0])  # trivial parabolic rejected
    # no nontrivial parabolic at all: vacuously indecomposable
    assert not is_decomposable(trivial_scheme(4))


def test_not_wreath(q8_construction):
    scheme = q8_construction.result.scheme
    for parab in nontrivial_parabolics(scheme):
        assert not is_wreath_over(scheme, parab)
    assert not is_decomposable(scheme)


def test_cayley_scheme_basics():
    q8 = quaternion_group()
    rank2 = cayley_scheme(q8, [[0], list(range(1, 8))])
    assert rank2.rank == 2
    thin = cayley_scheme(cyclic_group(5), [[i] for i in range(5)])
    assert thin.rank == 5 and not thin.is_symmetric()
    with pytest.raises(SchemeError, match="identity"):
        cayley_scheme(q8, [[1], [0] + list(range(2, 8))])
    with pytest.raises(SchemeError, match="partition"):
        cayley_scheme(cyclic_group(5), [[0], [1, 2], [3, 4, 0]])
    with pytest.raises(SchemeError, match="inverse-closed"):
        cayley_scheme(cyclic_group(5), [[0], [1, 2], [3], [4]])


def test_cayley_non_sring_rejected():
    # {e}, {g}, rest in C_5: products of singleton parts are not constant
    # on the big part
    with pytest.raises(SchemeError, match="S-ring"):
        cayley_scheme(cyclic_group(5), [[0], [1, 4], [2], [3]])


def test_sring_structure_constants_match_scheme(q8_construction):
    parts = q8_construction.result.partition.parts
    group = q8_construction.result.partition.group
    p_ring = sring_structure_constants(group, parts)
    p_scheme = q8_construction.result.scheme.p
    assert (p_ring == p_scheme).all()


def test_scheme_file_roundtrip(tmp_path, q8_construction):
    scheme = q8_construction.result.scheme
    p1 = tmp_path / "a.scheme"
    p2 = tmp_path / "b.scheme"
    write_scheme(scheme, p1)
    again = read_scheme(p1)
    write_scheme(again, p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert (again.color == scheme.color).all()


def test_scheme_file_errors(tmp_path):
    p = tmp_path / "bad.scheme"
    p.write_text("nonsense\n")
    with pytest.raises(SchemeParseError):
        parse_scheme_file(p)
    p.write_text("scheme 2 2\n0 1\n")
    with pytest.raises(SchemeParseError, match="expected 2 rows"):
        parse_scheme_file(p)
    p.write_text("scheme 2 2\n0 x\n1 0\n")
    with pytest.raises(SchemeParseError, match="non-integer"):
        parse_scheme_file(p)
    # parseable but not a scheme
    p.write_text("scheme 2 3\n0 1\n2 0\n")
    with pytest.raises(SchemeError):
        read_scheme(p)
