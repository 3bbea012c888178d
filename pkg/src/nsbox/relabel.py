"""The finite group of reversible local relabellings acting on boxes."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .boxes import Box, BoxShape, ShapeError


def _check_perm(p, n, what):
    if len(p) != n or sorted(p) != list(range(n)):
        raise ShapeError(f"{what}: {tuple(p)!r} is not a permutation of 0..{n - 1}")


@dataclass(frozen=True)
class Relabelling:
    """A local symmetry: permute parties, each party's inputs, and each
    party's outputs conditionally on that party's input.

    ``party_perm[k]`` is the slot party k moves to; ``input_perms[k][x]`` the
    new input index; ``output_perms[k][x][a]`` the new output index.  Input
    and output permutations are indexed by the original party and input.
    """

    party_perm: tuple[int, ...]
    input_perms: tuple[tuple[int, ...], ...]
    output_perms: tuple[tuple[tuple[int, ...], ...], ...]

    @classmethod
    def identity(cls, shape):
        return cls(
            tuple(range(shape.parties)),
            tuple(tuple(range(m)) for m in shape.inputs),
            tuple(tuple(tuple(range(d)) for d in per_party)
                  for per_party in shape.outputs),
        )

    def check_against(self, shape):
        """Validate against a shape; returns the shape of the relabelled box."""
        n = shape.parties
        _check_perm(self.party_perm, n, "party permutation")
        if len(self.input_perms) != n or len(self.output_perms) != n:
            raise ShapeError("relabelling arity does not match shape")
        new_outputs = [None] * n
        for k in range(n):
            m = shape.inputs[k]
            _check_perm(self.input_perms[k], m, f"party {k} input permutation")
            if len(self.output_perms[k]) != m:
                raise ShapeError(f"party {k}: need one output permutation per input")
            per = [None] * m
            for x in range(m):
                d = shape.outputs[k][x]
                _check_perm(self.output_perms[k][x], d,
                            f"party {k} input {x} output permutation")
                per[self.input_perms[k][x]] = d
            new_outputs[self.party_perm[k]] = tuple(per)
        return BoxShape(tuple(new_outputs))


def apply_relabelling(box, r):
    """Permute a box's table along a relabelling; shape may move under the
    party permutation but relabelling a box twice with r then inverse(r)
    always restores it."""
    shape = box.shape
    new_shape = r.check_against(shape)
    table = [None] * new_shape.table_size
    n = shape.parties
    for ins, outs in shape.entries():
        ins2 = [0] * n
        outs2 = [0] * n
        for k in range(n):
            j = r.party_perm[k]
            ins2[j] = r.input_perms[k][ins[k]]
            outs2[j] = r.output_perms[k][ins[k]][outs[k]]
        table[new_shape.index(tuple(outs2), tuple(ins2))] = box.prob(outs, ins)
    return Box(new_shape, tuple(table))


def compose(r1, r2):
    """The relabelling "apply r1, then r2"."""
    n = len(r1.party_perm)
    if len(r2.party_perm) != n:
        raise ShapeError("composing relabellings of different party counts")
    pp = tuple(r2.party_perm[r1.party_perm[k]] for k in range(n))
    ips = []
    ops = []
    for k in range(n):
        j = r1.party_perm[k]
        ip = tuple(r2.input_perms[j][r1.input_perms[k][x]]
                   for x in range(len(r1.input_perms[k])))
        op = tuple(
            tuple(r2.output_perms[j][r1.input_perms[k][x]][r1.output_perms[k][x][a]]
                  for a in range(len(r1.output_perms[k][x])))
            for x in range(len(r1.output_perms[k])))
        ips.append(ip)
        ops.append(op)
    return Relabelling(pp, tuple(ips), tuple(ops))


def inverse(r):
    n = len(r.party_perm)
    pp = [0] * n
    for k in range(n):
        pp[r.party_perm[k]] = k
    ips = [None] * n
    ops = [None] * n
    for k in range(n):
        j = r.party_perm[k]
        m = len(r.input_perms[k])
        ip = [0] * m
        op = [None] * m
        for x in range(m):
            x2 = r.input_perms[k][x]
            ip[x2] = x
            d = len(r.output_perms[k][x])
            oinv = [0] * d
            for a in range(d):
                oinv[r.output_perms[k][x][a]] = a
            op[x2] = tuple(oinv)
        ips[j] = tuple(ip)
        ops[j] = tuple(op)
    return Relabelling(tuple(pp), tuple(ips), tuple(ops))


def _with_input_perm(shape, k, perm):
    r = Relabelling.identity(shape)
    ips = list(r.input_perms)
    ips[k] = perm
    # output permutations stay indexed by the original input, so identity is fine
    return Relabelling(r.party_perm, tuple(ips), r.output_perms)


def _with_output_swap(shape, k, x, a):
    r = Relabelling.identity(shape)
    ops = [list(p) for p in r.output_perms]
    sw = list(ops[k][x])
    sw[a], sw[a + 1] = sw[a + 1], sw[a]
    ops[k] = list(ops[k])
    ops[k][x] = tuple(sw)
    return Relabelling(r.party_perm, r.input_perms, tuple(tuple(p) for p in ops))


def _with_party_swap(shape, k, l):
    r = Relabelling.identity(shape)
    pp = list(r.party_perm)
    pp[k], pp[l] = pp[l], pp[k]
    return Relabelling(tuple(pp), r.input_perms, r.output_perms)


def generators(shape, allow_party_permutation=True):
    """Shape-preserving generators: input transpositions between inputs with
    equal output counts, adjacent output transpositions, and swaps of parties
    with identical signatures."""
    gens = []
    for k in range(shape.parties):
        m = shape.inputs[k]
        for x in range(m):
            for x2 in range(x + 1, m):
                if shape.outputs[k][x] == shape.outputs[k][x2]:
                    perm = list(range(m))
                    perm[x], perm[x2] = perm[x2], perm[x]
                    gens.append(_with_input_perm(shape, k, tuple(perm)))
        for x in range(m):
            for a in range(shape.outputs[k][x] - 1):
                gens.append(_with_output_swap(shape, k, x, a))
    if allow_party_permutation:
        for k in range(shape.parties):
            for l in range(k + 1, shape.parties):
                if shape.outputs[k] == shape.outputs[l]:
                    gens.append(_with_party_swap(shape, k, l))
    return gens


def group(shape, allow_party_permutation=True):
    """All shape-preserving relabellings, by closure of the generators."""
    gens = generators(shape, allow_party_permutation)
    ident = Relabelling.identity(shape)
    seen = {ident: None}
    frontier = [ident]
    while frontier:
        nxt = []
        for r in frontier:
            for g in gens:
                rg = compose(r, g)
                if rg not in seen:
                    seen[rg] = None
                    nxt.append(rg)
        frontier = nxt
    return list(seen)


def orbit(box, allow_party_permutation=True):
    """All distinct boxes reachable by relabelling; BFS over generators."""
    gens = generators(box.shape, allow_party_permutation)
    seen = {box.table: box}
    frontier = [box]
    while frontier:
        nxt = []
        for b in frontier:
            for g in gens:
                b2 = apply_relabelling(b, g)
                if b2.table not in seen:
                    seen[b2.table] = b2
                    nxt.append(b2)
        frontier = nxt
    return list(seen.values())


def canonical_form(box, allow_party_permutation=True):
    """The lexicographically smallest table in the box's orbit."""
    return min(orbit(box, allow_party_permutation), key=lambda b: b.table)


def _party_permutations_matching(a_shape, b_shape):
    from itertools import permutations
    n = a_shape.parties
    for pp in permutations(range(n)):
        moved = [None] * n
        for k in range(n):
            moved[pp[k]] = a_shape.outputs[k]
        if tuple(moved) == b_shape.outputs:
            yield pp


def equivalent_under_relabelling(a, b, allow_party_permutation=True):
    """Search the relabelling group for a witness mapping a onto b.

    Returns the witness Relabelling, or None.  When the flag is set the two
    shapes may differ by a party permutation; otherwise they must be equal.
    """
    if a.shape.parties != b.shape.parties:
        return None
    starts = []
    if a.shape == b.shape:
        starts.append((a, Relabelling.identity(a.shape)))
    if allow_party_permutation:
        for pp in _party_permutations_matching(a.shape, b.shape):
            if pp == tuple(range(a.shape.parties)) and a.shape == b.shape:
                continue
            r0 = Relabelling(
                pp,
                tuple(tuple(range(m)) for m in a.shape.inputs),
                tuple(tuple(tuple(range(d)) for d in per) for per in a.shape.outputs),
            )
            starts.append((apply_relabelling(a, r0), r0))
    if not starts:
        return None
    # BFS within b's shape, remembering how each table was reached
    gens = generators(b.shape, allow_party_permutation)
    seen = {}
    frontier = []
    for moved, r0 in starts:
        if moved.table not in seen:
            seen[moved.table] = (moved, r0)
            frontier.append(moved)
    while frontier:
        if b.table in seen:
            break
        nxt = []
        for cur in frontier:
            _, path = seen[cur.table]
            for g in gens:
                cur2 = apply_relabelling(cur, g)
                if cur2.table not in seen:
                    seen[cur2.table] = (cur2, compose(path, g))
                    nxt.append(cur2)
        frontier = nxt
    hit = seen.get(b.table)
    return hit[1] if hit else None
