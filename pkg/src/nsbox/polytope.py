"""H- and V-representations of no-signalling polytopes, vertex enumeration
and orbit classification."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct

import numpy as np

from . import relabel
from .boxes import Box, BoxShape, InvalidBoxError, ShapeError
from .dd import extreme_rays
from .families import dbox
from .linalg import clear_denominators, int_rank, nullspace_int


@dataclass(frozen=True)
class HPolytope:
    """Equalities (row, rhs) over the flat table; the only inequalities are
    positivity, one per coordinate."""

    ambient: int
    equalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    shape: BoxShape | None = None

    def positivity_rows(self):
        for i in range(self.ambient):
            row = [Fraction(0)] * self.ambient
            row[i] = Fraction(1)
            yield tuple(row)

    def contains(self, point):
        if len(point) != self.ambient:
            raise ShapeError("point has wrong dimension")
        if any(v < 0 for v in point):
            return False
        return all(sum(c * v for c, v in zip(row, point)) == rhs
                   for row, rhs in self.equalities)


@dataclass(frozen=True)
class VRep:
    vertices: tuple[Box, ...]
    full: bool = True


def normalization_rows(shape):
    """One indicator row per joint input: the block must sum to one."""
    n = shape.table_size
    rows = []
    for ins in shape.joint_inputs:
        row = [Fraction(0)] * n
        off, size = shape.block(ins)
        for i in range(off, off + size):
            row[i] = Fraction(1)
        rows.append(tuple(row))
    return rows


def build_hrep(shape):
    """Normalization and no-signalling equalities for a shape, one
    no-signalling family per party against the joint rest."""
    n = shape.table_size
    equalities = [(row, Fraction(1)) for row in normalization_rows(shape)]
    for k in range(shape.parties):
        others = [j for j in range(shape.parties) if j != k]
        for x in range(shape.inputs[k] - 1):
            for oins in iproduct(*[range(shape.inputs[j]) for j in others]):
                odims = [shape.outputs[j][xx] for j, xx in zip(others, oins)]
                for oouts in iproduct(*[range(d) for d in odims]):
                    row = [Fraction(0)] * n
                    for a in range(shape.outputs[k][x]):
                        idx = shape.index(_merge(k, a, others, oouts),
                                          _merge(k, x, others, oins))
                        row[idx] += 1
                    for a in range(shape.outputs[k][x + 1]):
                        idx = shape.index(_merge(k, a, others, oouts),
                                          _merge(k, x + 1, others, oins))
                        row[idx] -= 1
                    equalities.append((tuple(row), Fraction(0)))
    return HPolytope(n, tuple(equalities), shape)


def _merge(k, val, others, ovals):
    out = [None] * (len(others) + 1)
    out[k] = val
    for j, v in zip(others, ovals):
        out[j] = v
    return tuple(out)


@lru_cache(maxsize=None)
def _dimension_cached(shape):
    h = build_hrep(shape)
    rows = [clear_denominators(list(row)) for row, _ in h.equalities]
    return shape.table_size - int_rank(rows)


def dimension(shape):
    """Affine dimension of the no-signalling polytope of a shape."""
    return _dimension_cached(shape)


def _presolve_zeros(eq_int):
    """Coordinates forced to zero by same-sign rows with rhs 0; fixpoint."""
    ncols = len(eq_int[0]) - 1 if eq_int else 0
    fixed = set()
    changed = True
    while changed:
        changed = False
        for row in eq_int:
            rhs, coeffs = row[0], row[1:]
            if rhs != 0:
                continue
            live = [(i, c) for i, c in enumerate(coeffs) if c != 0 and i not in fixed]
            if not live:
                continue
            if all(c > 0 for _, c in live) or all(c < 0 for _, c in live):
                for i, _ in live:
                    fixed.add(i)
                changed = True
    return fixed


def enumerate_vertices(h, max_rays=2_000_000, time_budget=None, threads=1):
    """All vertices of {x >= 0, equalities}, via rays of the homogenized cone.

    Deterministic: vertices come back sorted by their flat tables.  Raises
    EnumerationCapError (never truncates silently) if caps are hit.
    """
    n = h.ambient
    eq_int = []
    seen = set()
    for row, rhs in h.equalities:
        cleared = clear_denominators([-rhs] + list(row))
        key = tuple(cleared)
        if key not in seen and any(cleared):
            seen.add(key)
            eq_int.append(cleared)
    if not eq_int:
        raise ShapeError("a polytope needs at least one equality (normalization)")

    fixed = _presolve_zeros(eq_int)
    keep = [i for i in range(n) if i not in fixed]
    col_of = {c: j for j, c in enumerate(keep)}
    reduced = []
    seen = set()
    for row in eq_int:
        r = [row[0]] + [row[1 + c] for c in keep]
        if any(r):
            key = tuple(r)
            if key not in seen:
                seen.add(key)
                reduced.append(r)

    basis = nullspace_int(reduced)
    if not basis:
        raise ShapeError("equalities admit only the zero solution; no polytope")
    q = len(basis)
    # one positivity row per surviving coordinate of (t, x'): the cone rows
    coord_rows = []
    for i in range(1 + len(keep)):
        coord_rows.append([vec[i] for vec in basis])
    rays = extreme_rays(coord_rows, max_rays=max_rays,
                        time_budget=time_budget, threads=threads)

    vertices = []
    for ray in rays:
        z = [sum(c * y for c, y in zip(coord_rows[i], ray)) for i in range(1 + len(keep))]
        t = z[0]
        assert t > 0, "homogenization ray with t <= 0 on a bounded polytope"
        point = [Fraction(0)] * n
        for c in keep:
            point[c] = Fraction(z[1 + col_of[c]], t)
        vertices.append(tuple(point))
    vertices.sort()
    if h.shape is not None:
        boxes = tuple(Box(h.shape, v) for v in vertices)
    else:
        boxes = tuple(vertices)
    return VRep(boxes, full=True)


def is_extremal(box, polytope=None):
    """Whether a valid box is a vertex: the equalities plus its tight
    positivity constraints pin it uniquely (rank argument, exact)."""
    box.require_valid()
    h = build_hrep(box.shape) if polytope is None else polytope
    if len(box.table) != h.ambient:
        raise ShapeError("box does not live in the polytope's ambient space")
    if not h.contains(box.table):
        raise InvalidBoxError(box.validate() if polytope is None else
                              _not_member_report())
    support = [i for i, v in enumerate(box.table) if v > 0]
    rows = []
    for row, _ in h.equalities:
        rows.append(clear_denominators([row[i] for i in support]))
    return int_rank(rows) == len(support)


def _not_member_report():
    from .boxes import ValidationReport
    return ValidationReport(("box is not a member of the given polytope",))


@dataclass(frozen=True)
class OrbitClass:
    representative: Box
    size: int
    members: tuple[int, ...]


def _index_permutation(shape, r):
    """A shape-preserving relabelling acts on flat tables as an index map:
    new_table[perm[i]] = old_table[i]."""
    if r.check_against(shape) != shape:
        raise ShapeError("relabelling does not preserve the shape")
    perm = [0] * shape.table_size
    n = shape.parties
    for ins, outs in shape.entries():
        ins2 = [0] * n
        outs2 = [0] * n
        for k in range(n):
            j = r.party_perm[k]
            ins2[j] = r.input_perms[k][ins[k]]
            outs2[j] = r.output_perms[k][ins[k]][outs[k]]
        perm[shape.index(outs, ins)] = shape.index(tuple(outs2), tuple(ins2))
    return perm


def classify_vertices(vrep, allow_party_permutation=True):
    """Partition a complete vertex list into relabelling orbits.

    Returns OrbitClass tuples sorted by representative table; representatives
    are the lexicographically smallest members."""
    if not vrep.vertices:
        return ()
    if not vrep.full:
        raise ShapeError("classification needs a complete vertex list")
    shape = vrep.vertices[0].shape
    gens = relabel.generators(shape, allow_party_permutation)
    perms = [np.argsort(np.array(_index_permutation(shape, g))) for g in gens]
    # fancy-index form: new_table = old_table[inv_perm]

    values = sorted({v for b in vrep.vertices for v in b.table})
    if len(values) > 255:
        raise ShapeError("too many distinct entries for byte classification")
    val_id = {v: i for i, v in enumerate(values)}
    arrays = [np.array([val_id[v] for v in b.table], dtype=np.uint8)
              for b in vrep.vertices]
    index_of = {arr.tobytes(): i for i, arr in enumerate(arrays)}
    if len(index_of) != len(arrays):
        raise ShapeError("duplicate vertices in VRep")

    unseen = set(range(len(arrays)))
    classes = []
    while unseen:
        start = min(unseen)
        frontier = [arrays[start]]
        orbit_keys = {arrays[start].tobytes()}
        while frontier:
            nxt = []
            for arr in frontier:
                for perm in perms:
                    arr2 = arr[perm]
                    key = arr2.tobytes()
                    if key not in orbit_keys:
                        orbit_keys.add(key)
                        nxt.append(arr2)
            frontier = nxt
        members = []
        for key in orbit_keys:
            idx = index_of.get(key)
            if idx is None:
                raise ShapeError(
                    "orbit leaves the vertex list; VRep is not a complete "
                    "enumeration of a relabelling-closed set")
            members.append(idx)
        rep_key = min(orbit_keys)
        rep = vrep.vertices[index_of[rep_key]]
        members.sort()
        classes.append(OrbitClass(rep, len(members), tuple(members)))
        unseen -= set(members)
    classes.sort(key=lambda c: c.representative.table)
    return tuple(classes)


def lift_box(box, target_shape):
    """Embed a box into a shape with more outputs per input (identity map on
    outcomes, zero probability on the new ones)."""
    if box.shape.inputs != target_shape.inputs:
        raise ShapeError("lifting cannot change input structure")
    for k in range(box.shape.parties):
        for x in range(box.shape.inputs[k]):
            if box.shape.outputs[k][x] > target_shape.outputs[k][x]:
                raise ShapeError("lifting cannot drop outputs")

    def fn(outs, ins):
        for k, a in enumerate(outs):
            if a >= box.shape.outputs[k][ins[k]]:
                return Fraction(0)
        return box.prob(outs, ins)

    return Box.from_function(target_shape, fn)


@dataclass(frozen=True)
class KBoxClass:
    representative: Box
    size: int
    k: int | None          # None marks the deterministic (local) classes
    lifted: bool

    @property
    def nonlocal_(self):
        return self.k is not None


@dataclass(frozen=True)
class KBoxCensus:
    shape: BoxShape
    classes: tuple[KBoxClass, ...]

    @property
    def all_nonlocal_matched(self):
        return all(c.k is not None for c in self.classes if not c.representative.is_deterministic())

    @property
    def ks(self):
        return tuple(sorted({c.k for c in self.classes if c.k is not None}))

    @property
    def vertex_count(self):
        return sum(c.size for c in self.classes)


def kbox_census(d_alice, d_bob, max_rays=2_000_000, time_budget=None, threads=1):
    """Enumerate a two-input bipartite polytope and match every non-local
    vertex class to a (possibly lifted) k-box by exhaustive relabelling
    search; k runs over 2..min(output counts)."""
    d_alice, d_bob = tuple(d_alice), tuple(d_bob)
    if len(d_alice) != 2 or len(d_bob) != 2:
        raise ShapeError("the census covers two-input bipartite shapes")
    shape = BoxShape((d_alice, d_bob))
    vrep = enumerate_vertices(build_hrep(shape), max_rays=max_rays,
                              time_budget=time_budget, threads=threads)
    classes = classify_vertices(vrep)
    kmax = min(min(d_alice), min(d_bob))
    out = []
    for cls in classes:
        rep = cls.representative
        if rep.is_deterministic():
            out.append(KBoxClass(rep, cls.size, None, _uses_partial_outputs(rep)))
            continue
        found = []
        for k in range(2, kmax + 1):
            target = lift_box(dbox(k), shape)
            if relabel.equivalent_under_relabelling(rep, target) is not None:
                found.append(k)
        if len(found) != 1:
            raise ShapeError(
                f"non-local vertex class matched k-boxes {found}; expected "
                f"exactly one match")
        out.append(KBoxClass(rep, cls.size, found[0], _uses_partial_outputs(rep)))
    return KBoxCensus(shape, tuple(out))


def _uses_partial_outputs(box):
    """Whether some outcome of some (party, input) never occurs."""
    for k in range(box.shape.parties):
        m = box.marginal([k])
        for x in range(box.shape.inputs[k]):
            for a in range(box.shape.outputs[k][x]):
                if m.prob((a,), (x,)) == 0:
                    return True
    return False
