import itertools
import random

import pytest
import sympy
from sympy.matrices.normalforms import invariant_factors
from sympy.polys.domains import ZZ

from qlab.errors import ParameterError
from qlab.homology import (
    HomologyGroup,
    complex_homology,
    complex_homology_basis,
    euler_defect,
    homology,
    homology_basis,
    reduced_h0_from_components,
)
from qlab.perm import GroundSet
from qlab.simplicial import boundary_matrix
from qlab.snf import solve_in_image
from qlab.sparse import SparseIntMatrix
from conftest import commuting_cx, kneser_cx


def boundaries_of(facets):
    """Reduced boundary matrices of the complex generated by ``facets`` (independent construction)."""
    faces = set()
    for f in facets:
        for r in range(1, len(f) + 1):
            faces.update(itertools.combinations(sorted(f), r))
    by_dim = {}
    for s in sorted(faces):
        by_dim.setdefault(len(s) - 1, []).append(s)
    top = max(by_dim)
    by_dim[top + 1] = []
    mats = {0: SparseIntMatrix.from_dense([[1] * len(by_dim[0])])}
    for k in range(1, top + 2):
        rows = {s: i for i, s in enumerate(by_dim[k - 1])}
        cols = [{rows[s[:i] + s[i + 1:]]: (-1) ** i for i in range(len(s))} for s in by_dim[k]]
        mats[k] = SparseIntMatrix(len(by_dim[k - 1]), len(by_dim[k]), cols)
    return mats


RP2 = [(1, 2, 4), (2, 3, 4), (1, 3, 5), (2, 3, 5), (1, 4, 5),
       (1, 2, 6), (1, 3, 6), (3, 4, 6), (2, 5, 6), (4, 5, 6)]  # 6-vertex projective plane


def test_projective_plane():
    d = boundaries_of(RP2)
    assert homology(d[0], d[1]) == HomologyGroup(0)
    assert homology(d[1], d[2]) == HomologyGroup(0, (2,))
    assert homology(d[2], d[3]) == HomologyGroup(0)
    assert homology(d[1], d[2], coreduce=True) == HomologyGroup(0, (2,))


def test_spheres_and_torus():
    tetra = boundaries_of(list(itertools.combinations(range(4), 3)))
    assert homology(tetra[2], tetra[3]) == HomologyGroup(1)
    assert homology(tetra[1], tetra[2]) == HomologyGroup(0)
    # 7-vertex torus
    torus = [tuple(sorted(((i) % 7, (i + 1) % 7, (i + 3) % 7))) for i in range(7)]
    torus += [tuple(sorted((i % 7, (i + 2) % 7, (i + 3) % 7))) for i in range(7)]
    t = boundaries_of(torus)
    assert homology(t[1], t[2]) == HomologyGroup(2)
    assert homology(t[2], t[3]) == HomologyGroup(1)


@pytest.mark.parametrize("n,k,expect", [
    (4, 0, HomologyGroup(2)),
    (5, 1, HomologyGroup(6)),
    (6, 1, HomologyGroup(16)),
    (7, 0, HomologyGroup(0)),
    (7, 1, HomologyGroup(0, (3,))),
    (8, 1, HomologyGroup(0)),
    (8, 2, HomologyGroup(132)),
    (9, 2, HomologyGroup(42, (3,) * 8)),
])
def test_transposition_complexes(n, k, expect):
    cx = commuting_cx(n, 2, 1, k)
    assert complex_homology(cx, k) == expect
    assert complex_homology(cx, k, coreduce=True) == expect


def oracle_group(cx, k, reduced=True):
    dk = sympy.Matrix(boundary_matrix(cx, k, reduced).to_dense()) if cx.n_simplices(k) else None
    dk1 = boundary_matrix(cx, k + 1, reduced)
    r_k = dk.rank() if dk is not None and dk.rows else 0
    dense = dk1.to_dense()
    if dk1.n_rows and dk1.n_cols:
        fs = [abs(int(f)) for f in invariant_factors(sympy.Matrix(dense), domain=ZZ) if f != 0]
    else:
        fs = []
    return HomologyGroup(cx.n_simplices(k) - r_k - len(fs), tuple(f for f in fs if f > 1))


@pytest.mark.parametrize("build", [
    lambda: commuting_cx(5, 2, 2, 2),
    lambda: commuting_cx(6, 3, 1, 1),
    lambda: commuting_cx(6, 2, 1, 2),
    lambda: kneser_cx(7, 2, 2),
    lambda: kneser_cx(7, 3, 1),
])
def test_against_sympy(build):
    cx = build()
    for k in range(cx.max_dim + 1):
        for reduced in (True, False):
            assert complex_homology(cx, k, reduced) == oracle_group(cx, k, reduced)


def test_unreduced_h0():
    assert complex_homology(commuting_cx(4, max_dim=1), 0, reduced=False) == HomologyGroup(3)
    assert complex_homology(commuting_cx(7, max_dim=1), 0, reduced=False) == HomologyGroup(1)


def test_simplex_is_acyclic():
    cx = kneser_cx(6, 1, 4)  # full simplex on six vertices
    for k in range(5):
        assert complex_homology(cx, k).is_zero()


def test_empty_complex():
    cx = commuting_cx(1, max_dim=2)
    for k in range(3):
        assert complex_homology(cx, k) == HomologyGroup(0)
    assert len(complex_homology_basis(cx, 0)) == 0
    assert reduced_h0_from_components(0) == HomologyGroup(0)


def test_degree_out_of_range():
    with pytest.raises(ParameterError):
        complex_homology(commuting_cx(5, max_dim=1), 2)


def test_segment_checks():
    d1 = SparseIntMatrix.from_dense([[1, 1]])
    with pytest.raises(ParameterError):
        homology(d1, SparseIntMatrix.from_dense([[1], [1], [1]]))
    with pytest.raises(ParameterError):
        homology(d1, SparseIntMatrix.from_dense([[1], [1]]))


def test_group_form():
    assert str(HomologyGroup(6)) == "Z^6"
    assert str(HomologyGroup(0, (3,))) == "Z/3"
    assert str(HomologyGroup(0)) == "0"
    assert HomologyGroup(1, (2, 4)).to_json() == {"betti": 1, "torsion": [2, 4]}
    with pytest.raises(ValueError):
        HomologyGroup(0, (4, 2))
    with pytest.raises(ValueError):
        HomologyGroup(0, (1,))


@pytest.mark.parametrize("seed", range(5))
def test_permutation_invariance(seed):
    rng = random.Random(seed)
    cx = commuting_cx(7, 2, 1, 1)
    d1, d2 = boundary_matrix(cx, 1), boundary_matrix(cx, 2)
    perm1 = list(range(d1.n_cols))
    perm0 = list(range(d1.n_rows))
    perm2 = list(range(d2.n_cols))
    for p in (perm0, perm1, perm2):
        rng.shuffle(p)
    e1 = d1.permute(perm0, perm1)
    e2 = d2.permute(perm1, perm2)
    assert homology(e1, e2) == HomologyGroup(0, (3,))


def test_relabelled_ground_set():
    a = commuting_cx(7, labels=[2, 3, 5, 7, 11, 13, 17])
    assert complex_homology(a, 1) == HomologyGroup(0, (3,))


def test_bases():
    b = complex_homology_basis(commuting_cx(5, max_dim=1), 1)
    assert b.group() == HomologyGroup(6) and len(b.free) == 6 and not b.torsion
    for t, z in enumerate(b.generators()):
        coords = b.coordinates(z)
        assert coords == [int(i == t) for i in range(6)]

    cx = commuting_cx(7, max_dim=1)
    b = complex_homology_basis(cx, 1)
    assert b.group() == HomologyGroup(0, (3,))
    (z, order), = b.torsion
    assert order == 3
    d2 = boundary_matrix(cx, 2)
    assert not solve_in_image(d2, z)[0]
    assert solve_in_image(d2, [3 * x for x in z])[0]
    assert b.coordinates([2 * x for x in z]) == [2]

    assert len(complex_homology_basis(commuting_cx(8, max_dim=1), 1)) == 0


def test_boundaries_have_zero_coordinates():
    cx = commuting_cx(6, max_dim=1)
    b = complex_homology_basis(cx, 1)
    d2 = boundary_matrix(cx, 2)
    for j in range(min(d2.n_cols, 20)):
        col = [0] * d2.n_rows
        for i, v in d2.column(j).items():
            col[i] = v
        assert not any(b.coordinates(col))


def test_basis_direct_segment():
    d = boundaries_of(RP2)
    b = homology_basis(d[1], d[2])
    assert b.group() == HomologyGroup(0, (2,))


@pytest.mark.parametrize("build", [
    lambda: commuting_cx(7, 2, 1, 1),
    lambda: commuting_cx(8, 2, 1, 2),
    lambda: commuting_cx(6, 3, 2, 1),
    lambda: kneser_cx(8, 2, 1),
    lambda: kneser_cx(5, 1, 2),
])
def test_euler_consistency(build):
    cx = build()
    groups = {k: complex_homology(cx, k) for k in range(cx.max_dim + 1)}
    assert euler_defect(cx, groups) == 0
    bad = dict(groups)
    bad[0] = HomologyGroup(groups[0].betti + 1)
    assert euler_defect(cx, bad) != 0


def test_euler_full_complex():
    cx = commuting_cx(6, 2, 1, 3)
    assert not cx.is_truncated()
    chi = -1 + sum((-1) ** k * cx.n_simplices(k) for k in range(4))
    betti = sum((-1) ** k * complex_homology(cx, k).betti for k in range(4))
    assert chi == betti
