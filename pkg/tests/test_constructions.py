import itertools

import numpy as np
import pytest

from higman.constructions import (ConstructionError, associate_group,
                                  cayley_isomorphic, example1_construct,
                                  example2_construct, intersection_condition,
                                  read_linked_system, read_partition,
                                  search_linked_system,
                                  search_semiregular_rds, semiregular_mu_nu,
                                  table1_params, table2_params, verify_dds,
                                  verify_linked_system, write_linked_system,
                                  write_partition)
from higman.groups import (GroupRingElement, automorphisms, build_family,
                           gre_multiply, is_isomorphic)
from higman.quadratic import QuadraticNumber as QN
from higman.schemes import sring_structure_constants


# -- difference sets ---------------------------------------------------------

def test_verify_dds_full_group():
    g = build_family("C:6")
    n = g.subgroup([0, 3])
    dds = verify_dds(g, n, range(6))
    assert (dds.k, dds.lambda1, dds.lambda2) == (6, 6, 6)


def test_verify_dds_c4():
    g = build_family("C:4")
    n = g.subgroup([0, 2])
    dds = verify_dds(g, n, [0, 1])
    assert (dds.m, dds.n, dds.k, dds.lambda1, dds.lambda2) == (2, 2, 2, 0, 1)
    assert dds.is_rds and dds.is_semiregular


def test_verify_dds_degenerate_singleton():
    g = build_family("C:4")
    n = g.subgroup([0, 2])
    dds = verify_dds(g, n, [0])
    assert (dds.k, dds.lambda1, dds.lambda2) == (1, 0, 0)


def test_verify_dds_rejects():
    g = build_family("C:8")
    n = g.subgroup([0, 4])
    with pytest.raises(ConstructionError, match="not constant"):
        verify_dds(g, n, [0, 1, 2])


def test_intersection_condition():
    g = build_family("C:4")
    n = g.subgroup([0, 2])
    assert intersection_condition(g, n, [0, 1])       # a transversal
    assert not intersection_condition(g, n, [0, 2])   # X = N
    assert intersection_condition(g, n, [0, 1, 2, 3])


# -- recipe 1 -----------------------------------------------------------------

def test_example1_c4(example1_results):
    res = example1_results[0]
    assert res.scheme.v == 8
    assert res.detection.params.astuple() == (2, 2, 2, 2, 0)


def test_example1_ea9(example1_results):
    res = example1_results[1]
    assert res.scheme.v == 18
    assert res.detection.params.astuple() == (2, 3, 3, 6, 0)


def test_example1_t3_t4_product_lands_inside_g(example1_results):
    # the product of the two outside parts has support inside the abelian
    # half, which is why t = 0 for this recipe
    for res in example1_results:
        GD = res.partition.group
        half = GD.order // 2
        t3 = GroupRingElement.from_set(GD, res.partition.parts[3])
        t4 = GroupRingElement.from_set(GD, res.partition.parts[4])
        assert not (t3 * t4).coeffs[half:].any()
        assert not (t4 * t3).coeffs[half:].any()


def test_example1_rejects_bad_input():
    g = build_family("C:4")
    n = g.subgroup([0, 2])
    with pytest.raises(ConstructionError, match="intersection"):
        example1_construct(g, n, [0, 2])  # X = N fails the condition
    q8 = build_family("Q8cp:1")
    with pytest.raises(ConstructionError, match="abelian"):
        example1_construct(q8, q8.center(), [0, 2, 4, 6])


# -- mu/nu formulas ------------------------------------------------------------

def test_semiregular_mu_nu_n2():
    plus, minus = semiregular_mu_nu(2, 2)
    assert plus == (QN(3), QN(1))
    assert minus == (QN(1), QN(3))


def test_semiregular_mu_nu_n3():
    plus, minus = semiregular_mu_nu(3, 3)
    assert plus == (QN(5), QN(2))
    assert minus == (QN(1), QN(4))


def test_semiregular_mu_nu_inadmissible():
    plus, minus = semiregular_mu_nu(2, 1)  # n*lam = 2 is not a square
    for mu, nu in (plus, minus):
        assert not (mu.is_integer and nu.is_integer)


# -- linked systems --------------------------------------------------------------

def test_linked_system_params(q8_construction, heis_construction,
                              ea_construction):
    assert q8_construction.system.params == (4, 2, 4, 2, 2, 1, 3)
    assert heis_construction.system.params == (9, 3, 9, 3, 3, 1, 4)
    assert ea_construction.system.params == (9, 3, 9, 3, 2, 5, 2)
    assert q8_construction.system.branch == "-"
    assert ea_construction.system.branch == "+"


def test_product_law_explicitly(q8_construction):
    # X_a X_b = k e + lam (G - N) for b = chi(a), else mu Y + nu (G - Y)
    system = q8_construction.system
    G, N = system.group, system.forbidden
    for a, b in itertools.product(range(system.w), repeat=2):
        va = GroupRingElement.from_set(G, system.sets[a])
        vb = GroupRingElement.from_set(G, system.sets[b])
        prod = gre_multiply(va, vb).coeffs
        if b == system.chi[a]:
            want = np.full(G.order, system.lam, dtype=np.int64)
            for x in N.elements:
                want[x] = 0
            want[G.identity] = system.k
        else:
            y = set(system.sets[system.psi[(a, b)]])
            want = np.array([system.mu if x in y else system.nu
                             for x in range(G.order)], dtype=np.int64)
        assert (prod == want).all()


def test_verify_linked_system_rejects():
    g = build_family("Q8cp:1")
    n = g.center()
    rds = search_semiregular_rds(g, n)
    with pytest.raises(ConstructionError, match="w >= 2"):
        verify_linked_system(g, n, rds[:1])
    with pytest.raises(ConstructionError, match="distinct"):
        verify_linked_system(g, n, [rds[0], rds[0]])
    # two RDSs that are not inverse partners and whose product is not
    # two-level
    with pytest.raises(ConstructionError):
        verify_linked_system(g, n, [(0, 2, 4, 6), (0, 2, 4, 7)])


def test_recovered_chi_matches_inverses(heis_construction):
    system = heis_construction.system
    G = system.group
    for a, b in enumerate(system.chi):
        inv = tuple(sorted(int(G.inv[x]) for x in system.sets[a]))
        assert inv == system.sets[b]


def test_associate_groups(q8_construction, heis_construction,
                          ea_construction):
    for con, spec in ((q8_construction, "C:3"), (heis_construction, "C:4"),
                      (ea_construction, "EA:3:1")):
        assoc = associate_group(con.system)
        assert assoc.order == con.system.w + 1
        assert is_isomorphic(assoc, build_family(spec))


# -- searches ----------------------------------------------------------------------

def test_search_rds_c4():
    g = build_family("C:4")
    found = search_semiregular_rds(g, g.subgroup([0, 2]))
    assert found == [(0, 1), (0, 3), (1, 2), (2, 3)]


def test_search_rds_q8():
    g = build_family("Q8cp:1")
    found = search_semiregular_rds(g, g.center())
    assert len(found) == 16  # every transversal of the center works in Q8
    assert (0, 2, 4, 6) in found


def test_search_rds_h33_nonempty():
    g = build_family("Heis:3:1")
    found = search_semiregular_rds(g, g.center())
    assert found
    # every hit is a genuine semiregular RDS
    d = verify_dds(g, g.center(), found[0])
    assert d.is_semiregular and (d.m, d.n, d.k, d.lambda2) == (9, 3, 9, 3)


def test_search_rds_cap():
    g = build_family("EA:2:5")
    n = g.subgroup([0, 1])
    with pytest.raises(ConstructionError, match="cap"):
        search_semiregular_rds(g, n, max_space=100)


def test_search_linked_system_none_for_impossible():
    g = build_family("C:4")
    n = g.subgroup([0, 2])
    # w = 3 closed system cannot exist here: the associate group would have
    # order 4 but there are only 4 RDSs and products do not close
    assert search_linked_system(g, n, 3) is None


# -- parameter tables -----------------------------------------------------------------

def test_table1_values():
    assert table1_params("q8cp", r=1) == (4, 2, 4, 2, 2, 1, 3)
    assert table1_params("heis", q=3, r=1) == (9, 3, 9, 3, 3, 1, 4)
    assert table1_params("ea", q=3, r=1, j=1) == (9, 3, 9, 3, 2, 5, 2)
    assert table1_params("q8cp", r=2) == (16, 2, 16, 8, 2, 6, 10)


def test_table2_values():
    assert table2_params("q8cp", r=1).astuple() == (3, 4, 2, 4, 3)
    assert table2_params("heis", q=3, r=1).astuple() == (4, 9, 3, 18, 16)
    assert table2_params("ea", q=3, r=1, j=1).astuple() == (3, 9, 3, 18, 4)
    assert table2_params("q8cp", r=2).astuple() == (3, 16, 2, 16, 10)


def test_table_constraints():
    with pytest.raises(ConstructionError, match="odd"):
        table1_params("heis", q=2, r=1)
    with pytest.raises(ConstructionError, match="w = p\\^j - 1"):
        table1_params("ea", q=2, r=1, j=1)
    with pytest.raises(ConstructionError):
        table2_params("ea", q=3, r=1, j=2)  # j > i


# -- recipe 2 verification ---------------------------------------------------------------

def test_construction_product_identities(q8_construction, heis_construction,
                              ea_construction):
    """The six displayed group-ring product identities of the construction."""
    for con in (q8_construction, heis_construction, ea_construction):
        res = con.result
        L = con.system
        P = res.product_group
        n, lam, w, mu, nu = L.n, L.lam, L.w, L.mu, L.nu
        t = [GroupRingElement.from_set(P, part)
             for part in res.partition.parts]
        assert t[1] * t[1] == (n - 1) * t[0] + (n - 2) * t[1]
        assert t[1] * t[2] == (n - 1) * t[2]
        assert t[2] * t[2] == ((n * n * lam - n) * (t[0] + t[1])
                               + (n * n * lam - 2 * n) * t[2])
        assert t[3] * t[1] == t[4]
        assert t[3] * t[2] == (n * lam - 1) * (t[3] + t[4])
        assert t[3] * t[3] == (w * n * lam * t[0] + w * lam * t[2]
                               + (w - 1) * mu * t[3] + (w - 1) * nu * t[4])


def test_parts_are_self_inverse(q8_construction, heis_construction,
                                ea_construction):
    for con in (q8_construction, heis_construction, ea_construction):
        res = con.result
        P = res.product_group
        for part in res.partition.parts:
            assert {int(P.inv[x]) for x in part} == set(part)


def test_part_sizes(q8_construction):
    L = q8_construction.system
    parts = q8_construction.result.partition.parts
    assert len(parts[3]) == L.w * L.n * L.lam
    assert len(parts[4]) == L.w * L.n * L.lam * (L.n - 1)
    assert len(parts[3]) <= len(parts[4])


def test_scheme_valencies_24(q8_construction):
    scheme = q8_construction.result.scheme
    assert sorted(scheme.valencies.tolist()) == [1, 1, 6, 8, 8]


def test_triangle_identity_all_triples(q8_construction, heis_construction,
                                       ea_construction, example1_results):
    """|Z| p_XY^(Z^-1) = |X| p_YZ^(X^-1) = |Y| p_ZX^(Y^-1)."""
    partitions = [c.result.partition for c in
                  (q8_construction, heis_construction, ea_construction)]
    partitions += [r.partition for r in example1_results]
    for partition in partitions:
        G = partition.group
        parts = partition.parts
        sizes = [len(p) for p in parts]
        p = sring_structure_constants(G, parts)
        inv_part = []
        for part in parts:
            inv_set = frozenset(int(G.inv[x]) for x in part)
            inv_part.append([frozenset(q) for q in parts].index(inv_set))
        r = len(parts)
        for x, y, z in itertools.product(range(r), repeat=3):
            lhs = sizes[z] * p[x, y, inv_part[z]]
            mid = sizes[x] * p[y, z, inv_part[x]]
            rhs = sizes[y] * p[z, x, inv_part[y]]
            assert lhs == mid == rhs


def test_constructed_params_satisfy_criterion(q8_construction, heis_construction,
                            ea_construction):
    # substituting the constructed parameters into the criterion forces
    # nu = (n lam -+ sqrt(n lam))/n, which the recovered nu satisfies
    for con in (q8_construction, heis_construction, ea_construction):
        L = con.system
        det = con.result.detection
        assert det.params.t == (L.n - 1) * (L.w - 1) * L.nu or \
            det.alt_params is not None
        plus, minus = semiregular_mu_nu(L.n, L.lam)
        assert QN(L.nu) in (plus[1], minus[1])


def test_example2_rejects_wrong_u(q8_construction):
    system = q8_construction.system
    with pytest.raises(ConstructionError, match=r"\|U\|"):
        example2_construct(system, U=build_family("C:4"))


def test_cayley_isomorphism_two_phis(q8_construction, heis_construction,
                                     ea_construction):
    for con in (q8_construction, heis_construction, ea_construction):
        system = con.system
        winf = associate_group(system)
        autos = automorphisms(winf)
        assert len(autos) >= 2
        iso = cayley_isomorphic(autos[0], autos[1], system)
        assert iso.map != tuple(range(len(iso.map))) or autos[0].map == autos[1].map
        # identity phi pair gives the identity map
        ident = cayley_isomorphic(autos[0], autos[0], system)
        assert ident.map == tuple(range(len(ident.map)))


# -- file formats ---------------------------------------------------------------------------

def test_linked_system_file_roundtrip(tmp_path, q8_construction):
    system = q8_construction.system
    path = tmp_path / "sys.linked"
    write_linked_system(system, path)
    again = read_linked_system(path)
    assert again.params == system.params
    assert again.sets == system.sets
    assert again.chi == system.chi


def test_partition_file_roundtrip(tmp_path, q8_construction):
    partition = q8_construction.result.partition
    path = tmp_path / "p.sring"
    write_partition(partition, path)
    again = read_partition(path)
    assert again.parts == partition.parts
    scheme = again.scheme()
    assert scheme.rank == 5


def test_linked_file_errors(tmp_path):
    p = tmp_path / "bad.linked"
    p.write_text("C:4\n0 2\n")
    with pytest.raises(ConstructionError, match="short"):
        read_linked_system(p)
    p.write_text("C:4\n0 2\n2\n0 1\n0 1\n")
    with pytest.raises(ConstructionError, match="distinct"):
        read_linked_system(p)


def test_abstract_associate_partition_not_serializable(tmp_path,
                                                       q8_construction):
    # a partition over G x (abstract associate group) has no rebuildable
    # spec, so serialization must refuse rather than write a broken file
    res = example2_construct(q8_construction.system)
    assert "assoc" in res.product_group.name
    with pytest.raises(ConstructionError, match="not a family spec"):
        write_partition(res.partition, tmp_path / "p.sring")
