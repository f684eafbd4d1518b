import itertools
import math

import numpy as np
import pytest

from symspec.errors import CapacityError, ValidationError
from symspec.permgroup import Order, compose, enumerate_group, identity, parse_cycles
from symspec.representation import (
    Domain,
    RepMatrix,
    domain_matrix,
    freq_rep_matrix,
    generator_matrices,
    matrix_closure,
    rep_matrix,
    symmetry_orbit,
    verify_representation,
)

# the six S_3 matrices as printed, with the substitution each one realises
S3_TABLE = {
    "e": [[1, 0], [0, 1]],
    "(12)": [[-1, 0], [-1, 1]],
    "(23)": [[0, 1], [1, 0]],
    "(13)": [[1, -1], [0, -1]],
    "(123)": [[0, -1], [1, -1]],
    "(132)": [[-1, 1], [-1, 0]],
}


def lag_route(sigma, x):
    """Place (0, x) at positions 0..k-1, move the value at i to sigma(i), re-anchor at 0."""
    k = sigma.degree
    p = np.concatenate([[0.0], x])
    q = np.empty(k)
    q[list(sigma.map)] = p
    return (q - q[0])[1:]


def basis_route(sigma):
    """Coordinates of the permuted sum-zero basis b_i = e_0 - e_i in that same basis."""
    k = sigma.degree
    B = np.zeros((k - 1, k))
    B[:, 0] = 1
    B[np.arange(k - 1), np.arange(1, k)] = -1
    permuted = B[:, list(sigma.map)]
    coef, *_ = np.linalg.lstsq(B.T, permuted.T, rcond=None)
    return np.rint(coef.T).astype(int)


@pytest.mark.parametrize("cyc,mat", S3_TABLE.items())
def test_s3_table(cyc, mat):
    assert rep_matrix(parse_cycles(cyc, 3)).tolist() == mat


def test_s4_worked_example():
    assert rep_matrix(parse_cycles("(1234)", 4)).tolist() == [[0, 0, -1], [1, 0, -1], [0, 1, -1]]


@pytest.mark.parametrize("k", [3, 4, 5])
def test_lag_route_agrees(k, rng):
    x = rng.normal(size=k - 1)
    for s in enumerate_group(k):
        assert np.allclose(rep_matrix(s).entries @ x, lag_route(s, x), atol=1e-12)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_basis_route_agrees(k):
    for s in enumerate_group(k):
        assert np.array_equal(rep_matrix(s).entries, basis_route(s))


def test_worked_product():
    s, t = parse_cycles("(12)", 3), parse_cycles("(13)", 3)
    assert rep_matrix(s * t) == rep_matrix(s) @ rep_matrix(t) == rep_matrix(parse_cycles("(132)", 3))


def test_freq_matrix():
    s = parse_cycles("(12)", 3)
    assert freq_rep_matrix(s).tolist() == [[-1, -1], [0, 1]]
    assert freq_rep_matrix(identity(4)).tolist() == np.eye(3, dtype=int).tolist()
    for a, b in itertools.product(enumerate_group(4), repeat=2):
        assert freq_rep_matrix(compose(a, b, Order.LEFT_TO_RIGHT)) == freq_rep_matrix(a) @ freq_rep_matrix(b)


def test_orbit_s3_and_s2():
    orb = symmetry_orbit(3, Domain.LAG)
    got = {m.tobytes() for m in orb.stack}
    want = {np.array(v, dtype=np.int64).tobytes() for v in S3_TABLE.values()}
    assert got == want
    assert [m.tolist() for m in symmetry_orbit(2, "lag")] == [[[1]], [[-1]]]
    assert all(m == rep_matrix(p) for p, m in zip(orb.permutations, orb.matrices))


def test_orbit_s4_distinct_and_capacity():
    assert len({m for m in symmetry_orbit(4)}) == 24
    with pytest.raises(CapacityError):
        symmetry_orbit(9)


def test_generators():
    gens = generator_matrices(3, Domain.LAG)
    assert [g.tolist() for g in gens] == [S3_TABLE["(12)"], S3_TABLE["(23)"]]
    assert matrix_closure(generator_matrices(4, Domain.LAG)) == set(symmetry_orbit(4).matrices)
    for k in (3, 4, 5):
        for g in generator_matrices(k, Domain.FREQUENCY):
            assert np.array_equal((g @ g).entries, np.eye(k - 1, dtype=int))


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_unimodular(k):
    dets = np.rint(np.linalg.det(symmetry_orbit(k).stack.astype(float)))
    assert set(np.abs(dets).tolist()) == {1.0}


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_verify_exhaustive(k):
    rep = verify_representation(k)
    assert rep.passed and rep.exhaustive
    assert rep.pairs_checked == math.factorial(k) ** 2


def test_verify_sampled():
    rep = verify_representation(6, n_samples=5000, seed=3)
    assert rep.passed and not rep.exhaustive and rep.pairs_checked == 5000


def test_verify_detects_corruption():
    table = symmetry_orbit(3).stack.copy()
    table[1] = table[2]
    rep = verify_representation(3, table=table)
    assert not rep.homomorphism and rep.homomorphism_counterexample is not None
    assert not rep.injectivity and rep.injectivity_counterexample is not None
    assert rep.to_dict()["passed"] is False


def test_rep_matrix_is_read_only():
    m = rep_matrix(parse_cycles("(12)", 3))
    with pytest.raises(ValueError):
        m.entries[0, 0] = 5
    assert hash(m) == hash(RepMatrix(3, np.array(S3_TABLE["(12)"]), Domain.LAG))


def test_domain_parse():
    assert Domain.parse("freq") is Domain.FREQUENCY
    assert Domain.parse("time") is Domain.LAG
    assert domain_matrix(parse_cycles("(12)", 3), "freq") == freq_rep_matrix(parse_cycles("(12)", 3))
    with pytest.raises(ValidationError):
        Domain.parse("space")
