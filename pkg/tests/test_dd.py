import random
from itertools import combinations

import pytest

from nsbox.dd import EnumerationCapError, extreme_rays
from nsbox.linalg import int_rank, nullspace_int, reduce_content


def test_orthant_rays_are_unit_vectors():
    rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert extreme_rays(rows) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_square_based_cone():
    rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, -1]]
    assert extreme_rays(rows) == [(0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1)]


def test_duplicate_and_scaled_rows_are_harmless():
    rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, -1]]
    noisy = rows + [[2, 2, -2], [1, 0, 0], [3, 0, 0]]
    assert extreme_rays(noisy) == extreme_rays(rows)


def test_row_order_does_not_matter():
    rng = random.Random(11)
    rows = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1],
            [1, 1, -1, 0], [0, 1, 1, -1], [2, 0, 0, -1]]
    reference = extreme_rays(rows)
    for _ in range(10):
        shuffled = rows[:]
        rng.shuffle(shuffled)
        assert extreme_rays(shuffled) == reference


def test_cone_reduced_to_origin_has_no_rays():
    rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]]
    assert extreme_rays(rows) == []


def test_lineality_is_rejected():
    with pytest.raises(ValueError):
        extreme_rays([[1, 0], [2, 0]])
    with pytest.raises(ValueError):
        extreme_rays([])


def test_ray_cap_raises_instead_of_truncating():
    rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, -1]]
    with pytest.raises(EnumerationCapError):
        extreme_rays(rows, max_rays=2)


def _brute_force_rays(rows, dim):
    """Candidate rays from (dim-1)-subsets of tight constraints."""
    found = set()
    for subset in combinations(rows, dim - 1):
        kernel = nullspace_int(list(subset)) if subset else []
        if len(kernel) != 1:
            continue
        for sign in (1, -1):
            ray = tuple(reduce_content([sign * v for v in kernel[0]]))
            if all(sum(a * b for a, b in zip(row, ray)) >= 0 for row in rows):
                found.add(ray)
    extreme = set()
    for ray in found:
        tight = [row for row in rows
                 if sum(a * b for a, b in zip(row, ray)) == 0]
        if tight and int_rank(tight) == dim - 1:
            extreme.add(ray)
    return sorted(extreme)


def test_random_cones_match_brute_force():
    rng = random.Random(5)
    for _ in range(15):
        dim = rng.choice((3, 4))
        rows = [[int(i == j) for j in range(dim)] for i in range(dim)]
        for _ in range(rng.randint(1, 3)):
            rows.append([rng.randint(-2, 2) for _ in range(dim)])
        got = extreme_rays(rows)
        assert got == _brute_force_rays(rows, dim)
        for ray in got:
            assert all(sum(a * b for a, b in zip(row, ray)) >= 0
                       for row in rows)
            assert tuple(reduce_content(list(ray))) == ray
