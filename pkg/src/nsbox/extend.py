"""Extensions of a bipartite box by an environment party, and the check
that extremal boxes only extend as products."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random

from .boxes import Box, BoxShape, ShapeError, marginal, mix, tensor
from .families import uniform
from .polytope import HPolytope, build_hrep, enumerate_vertices


@dataclass(frozen=True)
class ExtensionPolytope:
    """Tripartite no-signalling boxes whose AB marginal equals the base for
    every environment input."""

    base: Box
    shape: BoxShape
    hrep: HPolytope


def _env_shape(env_inputs, env_outputs):
    if not (isinstance(env_inputs, int) and env_inputs >= 1):
        raise ShapeError("the environment needs at least one input")
    if not (isinstance(env_outputs, int) and env_outputs >= 1):
        raise ShapeError("the environment needs at least one output")
    return BoxShape(((env_outputs,) * env_inputs,))


def build_extension_polytope(base, env_inputs, env_outputs):
    """No-signalling constraints for parties A, B, E plus one row per
    (outcome pair, joint input) pinning the summed-over-E table to the
    base box.  Always nonempty: the base tensored with any environment
    distribution satisfies every row."""
    base.require_valid()
    if base.shape.parties != 2:
        raise ShapeError("extensions are built over bipartite bases")
    env = _env_shape(env_inputs, env_outputs)
    shape = BoxShape(base.shape.outputs + env.outputs)
    h = build_hrep(shape)
    extra = []
    for ins in shape.joint_inputs:
        x, y, e_in = ins
        for a in range(shape.outputs[0][x]):
            for b in range(shape.outputs[1][y]):
                row = [Fraction(0)] * shape.table_size
                for e in range(env_outputs):
                    row[shape.index((a, b, e), ins)] = Fraction(1)
                extra.append((tuple(row), base.prob((a, b), (x, y))))
    hrep = HPolytope(shape.table_size, h.equalities + tuple(extra), shape)
    return ExtensionPolytope(base, shape, hrep)


def _factorizes(point):
    ab = marginal(point, (0, 1))
    env = marginal(point, (2,))
    return point == tensor(ab, env)


def all_extensions_factorize(base, env_inputs, env_outputs,
                             max_rays=2_000_000, time_budget=None, threads=1):
    """Whether every extension splits as base times an environment
    distribution; on failure, also a validated counterexample vertex.

    Points with the pinned AB marginal that factorize form a convex set,
    so checking the vertices settles the whole polytope.  A sampled set of
    vertex midpoints re-checks that claim at runtime."""
    ext = build_extension_polytope(base, env_inputs, env_outputs)
    vrep = enumerate_vertices(ext.hrep, max_rays=max_rays,
                              time_budget=time_budget, threads=threads)
    witness = None
    for v in vrep.vertices:
        if not _factorizes(v):
            witness = v
            break
    if witness is not None:
        witness.require_valid()
        if marginal(witness, (0, 1)) != base:
            raise RuntimeError("witness does not reduce to the base box; "
                               "the extension rows are wrong")
        return False, witness
    rng = Random(0)
    n = len(vrep.vertices)
    for _ in range(min(50, n * (n - 1) // 2)):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        mid = mix(vrep.vertices[i], vrep.vertices[j], Fraction(1, 2))
        if not _factorizes(mid):
            raise RuntimeError("a midpoint fails to factorize although every "
                               "vertex does; the vertex list is suspect")
    return True, None


def product_extension(base, env_inputs, env_outputs):
    """The base tensored with a uniform environment; a member of every
    extension polytope."""
    return tensor(base, uniform(_env_shape(env_inputs, env_outputs)))
