from itertools import product as iproduct

import pytest

from nsbox.boxes import ShapeError, marginal, tensor
from nsbox.extend import (all_extensions_factorize, build_extension_polytope,
                          product_extension)
from nsbox.families import dbox, local_deterministic, pr, uniform
from nsbox.polytope import enumerate_vertices


def test_extremal_bases_admit_only_product_extensions():
    for base in (pr(), dbox(3)):
        for env_in, env_out in iproduct((1, 2), (2, 3)):
            ok, witness = all_extensions_factorize(base, env_in, env_out)
            assert ok, (base.shape, env_in, env_out)
            assert witness is None


def test_interior_base_has_entangled_extensions():
    base = uniform(pr().shape)
    ok, witness = all_extensions_factorize(base, 1, 2)
    assert not ok
    witness.require_valid()
    assert marginal(witness, (0, 1)) == base
    assert witness != tensor(marginal(witness, (0, 1)), marginal(witness, (2,)))
    assert witness != product_extension(base, 1, 2)


def test_product_extension_is_always_a_member():
    for base in (pr(), uniform(pr().shape), dbox(3)):
        ext = build_extension_polytope(base, 2, 2)
        point = product_extension(base, 2, 2)
        assert ext.hrep.contains(point.table)
        assert marginal(point, (0, 1)) == base


def test_deterministic_base_extension_vertices_are_env_strategies():
    base = local_deterministic(0, 1, 1, 0)
    ext = build_extension_polytope(base, 2, 3)
    vrep = enumerate_vertices(ext.hrep)
    assert len(vrep.vertices) == 3 ** 2
    for v in vrep.vertices:
        assert v == tensor(marginal(v, (0, 1)), marginal(v, (2,)))
        assert marginal(v, (0, 1)) == base
        assert marginal(v, (2,)).is_deterministic()


def test_extension_guards():
    with pytest.raises(ShapeError):
        build_extension_polytope(product_extension(pr(), 1, 2), 1, 2)
    with pytest.raises(ShapeError):
        build_extension_polytope(pr(), 0, 2)
    with pytest.raises(ShapeError):
        build_extension_polytope(pr(), 1, 0)
    with pytest.raises(ShapeError):
        build_extension_polytope(pr(), 1.5, 2)
