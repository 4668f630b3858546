import random
from fractions import Fraction

import sympy

from relkill.nullspace import apply_rows, bareiss_echelon, nullspace, rank, rref


def rand_matrix(rng, r, c):
    return [[Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2, 3))) if rng.random() < 0.6 else Fraction(0)
             for _ in range(c)] for _ in range(r)]


def test_rank_and_nullspace_match_sympy():
    rng = random.Random(11)
    for _ in range(150):
        r, c = rng.randint(1, 7), rng.randint(1, 7)
        M = rand_matrix(rng, r, c)
        S = sympy.Matrix(M)
        assert rank(M, c) == S.rank()
        ns = nullspace(M, c)
        assert len(ns) == c - S.rank()
        for v in ns:
            assert all(x == 0 for x in apply_rows(M, v))


def test_exact_results_are_fractions():
    M = [[Fraction(1, 3), Fraction(2, 7)], [Fraction(2, 3), Fraction(4, 7)]]
    (v,) = nullspace(M, 2)
    assert all(isinstance(x, Fraction) for x in v)
    assert Fraction(1, 3) * v[0] + Fraction(2, 7) * v[1] == 0


def test_sparse_rows_and_rref():
    rows = [{0: 1, 2: 2}, {1: 1, 2: -1}, {0: 2, 1: 2, 2: 2}]
    R, piv = rref(rows, 3)
    assert piv == [0, 1]
    assert nullspace(rows, 3) == [[-2, 1, 1]]


def test_bareiss_integer_steps():
    rows, piv = bareiss_echelon([[2, 4, 6], [1, 3, 5], [3, 7, 11]])
    assert piv == [0, 1]
    assert all(isinstance(x, int) for row in rows for x in row)


def test_empty_and_zero():
    assert rank([], 3) == 0
    assert len(nullspace([], 3)) == 3
    assert nullspace([[0, 0]], 2) == [[1, 0], [0, 1]]
