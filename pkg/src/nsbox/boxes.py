"""Correlation boxes: exact conditional probability tables p(outputs | inputs)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

Rational = Fraction


class ShapeError(ValueError):
    """Indices, tables or operands that do not fit a box shape."""


class InvalidBoxError(ValueError):
    """An operation needed a valid box and validation failed."""

    def __init__(self, report):
        super().__init__("invalid box: " + "; ".join(report.problems))
        self.report = report


def _as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise ShapeError(f"table entries must be Fraction or int, got {type(v).__name__}")


@dataclass(frozen=True)
class BoxShape:
    """Output counts per (party, input); fixes the canonical table layout.

    ``outputs[k][x]`` is the number of outputs party ``k`` has for input ``x``.
    The flat table runs over joint inputs with party 0 slowest, and inside
    each joint-input block over joint outputs, again party 0 slowest.
    """

    outputs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        outs = tuple(tuple(int(d) for d in per_party) for per_party in self.outputs)
        if not outs:
            raise ShapeError("a shape needs at least one party")
        for k, per_party in enumerate(outs):
            if not per_party:
                raise ShapeError(f"party {k} has no inputs")
            for x, d in enumerate(per_party):
                if d < 1:
                    raise ShapeError(f"party {k}, input {x}: output count {d} < 1")
        object.__setattr__(self, "outputs", outs)
        joint = tuple(iproduct(*[range(len(p)) for p in outs]))
        offsets = {}
        pos = 0
        for ins in joint:
            offsets[ins] = pos
            pos += math.prod(outs[k][x] for k, x in enumerate(ins))
        object.__setattr__(self, "_joint_inputs", joint)
        object.__setattr__(self, "_offsets", offsets)
        object.__setattr__(self, "_size", pos)

    @classmethod
    def homogeneous(cls, parties, inputs, outputs):
        return cls(((outputs,) * inputs,) * parties)

    @classmethod
    def from_string(cls, text):
        """Parse shape strings like ``2,2/2,2`` or ``2:3/2:3,3``.

        Parties are separated by ``/``.  A party is a comma list of output
        counts, one per input; ``M:d`` is shorthand for M inputs with d
        outputs each, and ``M:d1,...,dM`` spells the counts out.
        """
        try:
            parties = []
            for token in text.split("/"):
                token = token.strip()
                if not token:
                    raise ValueError
                if ":" in token:
                    head, _, tail = token.partition(":")
                    m = int(head)
                    ds = [int(t) for t in tail.split(",")]
                    if len(ds) == 1:
                        ds = ds * m
                    if len(ds) != m:
                        raise ShapeError(
                            f"shape token {token!r}: {m} inputs but {len(ds)} output counts")
                else:
                    ds = [int(t) for t in token.split(",")]
                parties.append(tuple(ds))
        except ValueError as e:
            if isinstance(e, ShapeError):
                raise
            raise ShapeError(f"cannot parse shape string {text!r}") from None
        return cls(tuple(parties))

    def __str__(self):
        return "/".join(",".join(str(d) for d in p) for p in self.outputs)

    @property
    def parties(self):
        return len(self.outputs)

    @property
    def inputs(self):
        """Input count per party."""
        return tuple(len(p) for p in self.outputs)

    @property
    def table_size(self):
        return self._size

    @property
    def joint_inputs(self):
        return self._joint_inputs

    def outputs_at(self, ins):
        return tuple(self.outputs[k][x] for k, x in enumerate(ins))

    def joint_outputs(self, ins):
        return iproduct(*[range(d) for d in self.outputs_at(ins)])

    def block(self, ins):
        """(offset, size) of the table slice for one joint input."""
        try:
            off = self._offsets[tuple(ins)]
        except KeyError:
            raise ShapeError(f"joint input {tuple(ins)!r} not in shape {self}") from None
        return off, math.prod(self.outputs_at(ins))

    def index(self, outs, ins):
        ins = tuple(ins)
        off, _ = self.block(ins)
        dims = self.outputs_at(ins)
        if len(outs) != len(dims):
            raise ShapeError(f"joint output {tuple(outs)!r} has wrong arity for {self}")
        idx = 0
        for a, d in zip(outs, dims):
            if not 0 <= a < d:
                raise ShapeError(f"output {tuple(outs)!r} out of range at input {ins}")
            idx = idx * d + a
        return off + idx

    def entries(self):
        """Yield (joint_input, joint_output) pairs in canonical table order."""
        for ins in self._joint_inputs:
            for outs in self.joint_outputs(ins):
                yield ins, outs


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[str, ...]

    @property
    def ok(self):
        return not self.problems

    def __str__(self):
        return "ok" if self.ok else "\n".join(self.problems)


@dataclass(frozen=True)
class Box:
    """A conditional probability table over a BoxShape, entries exact rationals.

    Construction only checks structure (table length); probabilistic
    soundness is a separate, explicit step: ``validate`` reports violations,
    ``require_valid`` raises on them.
    """

    shape: BoxShape
    table: tuple[Fraction, ...]

    def __post_init__(self):
        tab = tuple(_as_fraction(v) for v in self.table)
        if len(tab) != self.shape.table_size:
            raise ShapeError(
                f"table has {len(tab)} entries, shape {self.shape} needs "
                f"{self.shape.table_size}")
        object.__setattr__(self, "table", tab)

    @classmethod
    def from_function(cls, shape, fn):
        """Fill the table by calling ``fn(joint_output, joint_input)``."""
        return cls(shape, tuple(fn(outs, ins) for ins, outs in shape.entries()))

    def prob(self, outs, ins):
        return self.table[self.shape.index(outs, ins)]

    def block(self, ins):
        off, size = self.shape.block(ins)
        return self.table[off:off + size]

    def validate(self):
        """Check positivity, normalization and no-signalling, all exactly."""
        problems = []
        for ins, outs in self.shape.entries():
            v = self.prob(outs, ins)
            if v < 0:
                problems.append(f"negative entry p{outs}|{ins} = {v}")
        for ins in self.shape.joint_inputs:
            s = sum(self.block(ins))
            if s != 1:
                problems.append(f"input {ins}: block sums to {s}, not 1")
        problems.extend(self._signalling_problems())
        return ValidationReport(tuple(problems))

    def _signalling_problems(self):
        shape = self.shape
        problems = []
        for k in range(shape.parties):
            others = [j for j in range(shape.parties) if j != k]
            for x in range(shape.inputs[k] - 1):
                for oins in iproduct(*[range(shape.inputs[j]) for j in others]):
                    ins_lo = _merge(k, x, others, oins)
                    ins_hi = _merge(k, x + 1, others, oins)
                    odims = [shape.outputs[j][xx] for j, xx in zip(others, oins)]
                    for oouts in iproduct(*[range(d) for d in odims]):
                        lo = sum(self.prob(_merge(k, a, others, oouts), ins_lo)
                                 for a in range(shape.outputs[k][x]))
                        hi = sum(self.prob(_merge(k, a, others, oouts), ins_hi)
                                 for a in range(shape.outputs[k][x + 1]))
                        if lo != hi:
                            problems.append(
                                f"party {k} signals: marginal of parties {tuple(others)} "
                                f"at output {oouts}|input {oins} is {lo} for "
                                f"input {x} but {hi} for input {x + 1}")
        return problems

    def require_valid(self):
        report = self.validate()
        if not report.ok:
            raise InvalidBoxError(report)
        return self

    def marginal(self, parties):
        """Box on a party subset (ascending original order), outputs summed out.

        Well-definedness is checked: if the summed-out parties can steer the
        kept marginal through their inputs, the marginal does not exist and
        InvalidBoxError is raised.
        """
        keep = sorted(set(int(k) for k in parties))
        if not keep:
            raise ShapeError("marginal needs a nonempty party subset")
        if keep[0] < 0 or keep[-1] >= self.shape.parties:
            raise ShapeError(f"party subset {keep} out of range for {self.shape}")
        if len(keep) != len(tuple(parties)):
            raise ShapeError("party subset has repeats")
        drop = [j for j in range(self.shape.parties) if j not in keep]
        new_shape = BoxShape(tuple(self.shape.outputs[k] for k in keep))
        result = None
        for dins in iproduct(*[range(self.shape.inputs[j]) for j in drop]):
            table = []
            for kins, kouts in new_shape.entries():
                ins = _merge_many(keep, kins, drop, dins)
                ddims = [self.shape.outputs[j][x] for j, x in zip(drop, dins)]
                total = Fraction(0)
                for douts in iproduct(*[range(d) for d in ddims]):
                    total += self.prob(_merge_many(keep, kouts, drop, douts), ins)
                table.append(total)
            table = tuple(table)
            if result is None:
                result = table
            elif result != table:
                raise InvalidBoxError(ValidationReport((
                    f"marginal over parties {keep} ill-defined: depends on the "
                    f"dropped parties' inputs {tuple(drop)}",)))
        return Box(new_shape, result)

    def is_deterministic(self):
        return all(v == 0 or v == 1 for v in self.table)

    def __repr__(self):
        return f"Box({self.shape}, <{len(self.table)} entries>)"


def _merge(k, val, others, ovals):
    out = [None] * (len(others) + 1)
    out[k] = val
    for j, v in zip(others, ovals):
        out[j] = v
    return tuple(out)


def _merge_many(idx_a, vals_a, idx_b, vals_b):
    out = [None] * (len(idx_a) + len(idx_b))
    for j, v in zip(idx_a, vals_a):
        out[j] = v
    for j, v in zip(idx_b, vals_b):
        out[j] = v
    return tuple(out)


def validate(box):
    return box.validate()


def marginal(box, parties):
    return box.marginal(parties)


def mix(a, b, weight):
    """weight*a + (1-weight)*b, entrywise."""
    if a.shape != b.shape:
        raise ShapeError("mixing boxes of different shapes")
    w = _as_fraction(weight)
    return Box(a.shape, tuple(w * x + (1 - w) * y for x, y in zip(a.table, b.table)))


def product(a, b):
    """Composite box: each party feeds one input to each factor and keeps both outputs.

    Party k's composite input x encodes (x0, x1) as x = M0*x1 + x0 where M0
    is that party's input count in ``a``; the composite output encodes
    (a0, a1) as d0*a1 + a0 likewise.  ``a`` is the low digit.
    """
    if a.shape.parties != b.shape.parties:
        raise ShapeError("product needs boxes with the same party count")
    n = a.shape.parties
    new_outputs = []
    for k in range(n):
        per = []
        for xb in range(b.shape.inputs[k]):
            for xa in range(a.shape.inputs[k]):
                per.append(a.shape.outputs[k][xa] * b.shape.outputs[k][xb])
        new_outputs.append(tuple(per))
    shape = BoxShape(tuple(new_outputs))

    def fn(outs, ins):
        ins_a, ins_b, outs_a, outs_b = [], [], [], []
        for k, (x, o) in enumerate(zip(ins, outs)):
            ma = a.shape.inputs[k]
            xa, xb = x % ma, x // ma
            da = a.shape.outputs[k][xa]
            ins_a.append(xa)
            ins_b.append(xb)
            outs_a.append(o % da)
            outs_b.append(o // da)
        return (a.prob(tuple(outs_a), tuple(ins_a))
                * b.prob(tuple(outs_b), tuple(ins_b)))

    return Box.from_function(shape, fn)


def tensor(a, b):
    """Juxtapose two boxes on disjoint party sets (a's parties first)."""
    shape = BoxShape(a.shape.outputs + b.shape.outputs)
    na = a.shape.parties

    def fn(outs, ins):
        return a.prob(outs[:na], ins[:na]) * b.prob(outs[na:], ins[na:])

    return Box.from_function(shape, fn)


def has_unique_completion(box):
    """Whether each party's outcome is pinned by both inputs plus the other outcome.

    True iff for every (x, y) and every a with p(a|x) > 0 there is exactly
    one b with p(ab|xy) > 0, and symmetrically with the parties swapped.
    """
    if box.shape.parties != 2:
        raise ShapeError("unique completion is defined for bipartite boxes")
    marg = [box.marginal([0]), box.marginal([1])]
    for x, y in box.shape.joint_inputs:
        for a in range(box.shape.outputs[0][x]):
            if marg[0].prob((a,), (x,)) > 0:
                hits = sum(1 for b in range(box.shape.outputs[1][y])
                           if box.prob((a, b), (x, y)) > 0)
                if hits != 1:
                    return False
        for b in range(box.shape.outputs[1][y]):
            if marg[1].prob((b,), (y,)) > 0:
                hits = sum(1 for a in range(box.shape.outputs[0][x])
                           if box.prob((a, b), (x, y)) > 0)
                if hits != 1:
                    return False
    return True
