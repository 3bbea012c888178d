"""Per-party adaptive circuits over component boxes: validation, exact
evaluation, and the stock conversion protocols between named boxes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

from .boxes import Box, BoxShape
from .families import dbox, pr


class WiringError(ValueError):
    """A wiring references out-of-scope data or misuses a component side."""


@dataclass(frozen=True)
class Step:
    """One use of a component box side; the input table is a total function
    of the protocol input and this party's earlier step outputs."""

    component: int
    side: int
    inputs: dict


@dataclass(frozen=True)
class PartyProgram:
    steps: tuple[Step, ...]
    outputs: dict   # (protocol input, *step outputs) -> final output


@dataclass(frozen=True)
class Component:
    """A box together with the protocol party playing each of its sides."""

    box: Box
    parties: tuple[int, ...]


@dataclass(frozen=True)
class Wiring:
    shape: BoxShape
    components: tuple[Component, ...]
    programs: tuple[PartyProgram, ...]


def _side_output_range(box, side):
    return max(box.shape.outputs[side])


def _validate(wiring, boxes):
    shape = wiring.shape
    if len(wiring.programs) != shape.parties:
        raise WiringError("one program per protocol party is required")
    if len(boxes) != len(wiring.components):
        raise WiringError("component box count mismatch")
    for comp, box in zip(wiring.components, boxes):
        if box.shape != comp.box.shape:
            raise WiringError("component override changes the box shape")
        if len(comp.parties) != box.shape.parties:
            raise WiringError("component assignment must name one protocol "
                              "party per box party")
        if any(not 0 <= p < shape.parties for p in comp.parties):
            raise WiringError("component assigned to a nonexistent party")

    used = set()
    for k, prog in enumerate(wiring.programs):
        for st in prog.steps:
            if not 0 <= st.component < len(boxes):
                raise WiringError(f"step references component {st.component} "
                                  "which does not exist")
            comp = wiring.components[st.component]
            if not 0 <= st.side < len(comp.parties):
                raise WiringError("step references a nonexistent box side")
            if comp.parties[st.side] != k:
                raise WiringError(
                    f"party {k} uses side {st.side} of component "
                    f"{st.component}, which belongs to party "
                    f"{comp.parties[st.side]}")
            key = (st.component, st.side)
            if key in used:
                raise WiringError(f"component {st.component} side {st.side} "
                                  "is used twice")
            used.add(key)
    expected = {(c, s) for c, comp in enumerate(wiring.components)
                for s in range(len(comp.parties))}
    if used != expected:
        missing = sorted(expected - used)
        raise WiringError(f"unused component sides: {missing}")

    for k, prog in enumerate(wiring.programs):
        ranges = []
        for step_no, st in enumerate(prog.steps):
            box = boxes[st.component]
            for x in range(shape.inputs[k]):
                for prev in iproduct(*[range(r) for r in ranges]):
                    key = (x, *prev)
                    if key not in st.inputs:
                        raise WiringError(
                            f"party {k} step {step_no} has no input for "
                            f"scope {key}")
                    val = st.inputs[key]
                    if not 0 <= val < box.shape.inputs[st.side]:
                        raise WiringError(
                            f"party {k} step {step_no} feeds input {val} "
                            "outside the component's input range")
            ranges.append(_side_output_range(box, st.side))
        for x in range(shape.inputs[k]):
            for prev in iproduct(*[range(r) for r in ranges]):
                key = (x, *prev)
                if key not in prog.outputs:
                    raise WiringError(
                        f"party {k} has no final output for scope {key}")
                val = prog.outputs[key]
                if not 0 <= val < shape.outputs[k][x]:
                    raise WiringError(
                        f"party {k} output {val} is outside the declared "
                        "output range")


def evaluate_wiring(wiring, components=None):
    """The box a wiring simulates, by exact enumeration.

    For every joint protocol input, every joint assignment of component
    outputs is weighted by the product of the component probabilities at the
    inputs the traces induce.  Components may be overridden positionally;
    they are validated first, so signalling components are rejected."""
    boxes = ([c.box for c in wiring.components] if components is None
             else list(components))
    for b in boxes:
        b.require_valid()
    _validate(wiring, boxes)
    shape = wiring.shape

    sides = [(c, s) for c, comp in enumerate(wiring.components)
             for s in range(len(comp.parties))]
    pos = {cs: i for i, cs in enumerate(sides)}
    ranges = [range(_side_output_range(boxes[c], s)) for c, s in sides]

    table = [Fraction(0)] * shape.table_size
    for ins in shape.joint_inputs:
        for assign in iproduct(*ranges):
            comp_ins = [[None] * len(comp.parties)
                        for comp in wiring.components]
            outs = []
            for k, prog in enumerate(wiring.programs):
                prev = []
                for st in prog.steps:
                    comp_ins[st.component][st.side] = st.inputs[(ins[k], *prev)]
                    prev.append(assign[pos[(st.component, st.side)]])
                outs.append(prog.outputs[(ins[k], *prev)])
            weight = Fraction(1)
            for c, box in enumerate(boxes):
                cins = tuple(comp_ins[c])
                couts = tuple(assign[pos[(c, s)]]
                              for s in range(box.shape.parties))
                if any(o >= box.shape.outputs[s][x]
                       for s, (o, x) in enumerate(zip(couts, cins))):
                    weight = Fraction(0)
                    break
                weight *= box.prob(couts, cins)
                if not weight:
                    break
            if weight:
                table[shape.index(tuple(outs), ins)] += weight
    return Box(shape, tuple(table))


def _identity_table(n_inputs):
    return {(x,): x for x in range(n_inputs)}


def _p1(d, dp):
    shape = BoxShape.homogeneous(2, 2, d * dp)
    comps = (Component(dbox(d), (0, 1)), Component(dbox(dp), (0, 1)))
    alice = PartyProgram(
        steps=(Step(0, 0, _identity_table(2)),
               Step(1, 0, {(x, al): x if al == d - 1 else 0
                           for x in range(2) for al in range(d)})),
        outputs={(x, al, alp): alp * d + al
                 for x in range(2) for al in range(d) for alp in range(dp)})
    bob = PartyProgram(
        steps=(Step(0, 1, _identity_table(2)),
               Step(1, 1, {(y, be): y for y in range(2) for be in range(d)})),
        outputs={(y, be, bep): bep * d + be
                 for y in range(2) for be in range(d) for bep in range(dp)})
    return Wiring(shape, comps, (alice, bob))


def _p2(d, dp):
    shape = BoxShape.homogeneous(2, 2, d)
    comps = (Component(dbox(d * dp), (0, 1)),)
    alice = PartyProgram(
        steps=(Step(0, 0, _identity_table(2)),),
        outputs={(x, al): al % d for x in range(2) for al in range(d * dp)})
    bob = PartyProgram(
        steps=(Step(0, 1, _identity_table(2)),),
        outputs={(y, be): be % d for y in range(2) for be in range(d * dp)})
    return Wiring(shape, comps, (alice, bob))


def _p3(d, dp, n):
    shape = BoxShape.homogeneous(2, 2, dp)
    comps = tuple(Component(dbox(d), (0, 1)) for _ in range(n))
    alice_steps = []
    bob_steps = []
    for i in range(n):
        alice_steps.append(Step(i, 0, {
            (x, *prev): x if all(a == d - 1 for a in prev) else 0
            for x in range(2) for prev in iproduct(range(d), repeat=i)}))
        bob_steps.append(Step(i, 1, {
            (y, *prev): y
            for y in range(2) for prev in iproduct(range(d), repeat=i)}))

    def digits_mod(vals):
        return sum(a * d ** i for i, a in enumerate(vals)) % dp

    alice = PartyProgram(tuple(alice_steps), {
        (x, *alphas): digits_mod(alphas)
        for x in range(2) for alphas in iproduct(range(d), repeat=n)})
    bob = PartyProgram(tuple(bob_steps), {
        (y, *betas): digits_mod(betas)
        for y in range(2) for betas in iproduct(range(d), repeat=n)})
    return Wiring(shape, comps, (alice, bob))


def _xor_pair_program(first, second, my_input_count=2):
    """Feed the protocol input into two box sides and output the XOR."""
    return PartyProgram(
        steps=(Step(first[0], first[1], _identity_table(my_input_count)),
               Step(second[0], second[1],
                    {(x, o1): x for x in range(my_input_count)
                     for o1 in range(2)})),
        outputs={(x, o1, o2): o1 ^ o2 for x in range(my_input_count)
                 for o1 in range(2) for o2 in range(2)})


def _p5():
    shape = BoxShape.homogeneous(3, 2, 2)
    comps = (Component(pr(), (0, 1)), Component(pr(), (0, 2)))
    alice = _xor_pair_program((0, 0), (1, 0))
    bob = PartyProgram((Step(0, 1, _identity_table(2)),),
                       {(y, b): b for y in range(2) for b in range(2)})
    charles = PartyProgram((Step(1, 1, _identity_table(2)),),
                           {(z, c): c for z in range(2) for c in range(2)})
    return Wiring(shape, comps, (alice, bob, charles))


def _p6():
    shape = BoxShape.homogeneous(3, 2, 2)
    comps = (Component(pr(), (0, 1)), Component(pr(), (0, 2)),
             Component(pr(), (1, 2)))
    alice = _xor_pair_program((0, 0), (1, 0))
    bob = _xor_pair_program((0, 1), (2, 0))
    charles = _xor_pair_program((1, 1), (2, 1))
    return Wiring(shape, comps, (alice, bob, charles))


def _chain_program(first, second):
    """Feed the protocol input into one side, its output into another, and
    output the second result."""
    return PartyProgram(
        steps=(Step(first[0], first[1], _identity_table(2)),
               Step(second[0], second[1],
                    {(x, o1): o1 for x in range(2) for o1 in range(2)})),
        outputs={(x, o1, o2): o2 for x in range(2)
                 for o1 in range(2) for o2 in range(2)})


def _p7():
    shape = BoxShape.homogeneous(3, 2, 2)
    comps = (Component(pr(), (0, 1)), Component(pr(), (0, 2)),
             Component(pr(), (1, 2)))
    alice = _chain_program((0, 0), (1, 0))
    bob = _chain_program((0, 1), (2, 0))
    charles = _xor_pair_program((1, 1), (2, 1))
    return Wiring(shape, comps, (alice, bob, charles))


def preset(name, *params):
    """The stock wirings: P1(d, d'), P2(d, d'), P3(d, d', n), P5, P6, P7."""
    key = str(name).upper()
    arity = {"P1": 2, "P2": 2, "P3": 3, "P5": 0, "P6": 0, "P7": 0}
    if key not in arity:
        raise WiringError(f"unknown preset {name!r}")
    if len(params) != arity[key]:
        raise WiringError(f"{key} takes {arity[key]} parameters, "
                          f"got {len(params)}")
    try:
        params = tuple(int(p) for p in params)
    except ValueError as exc:
        raise WiringError(f"bad parameters for {key}: {exc}") from None
    if key == "P3" and params[2] < 1:
        raise WiringError("P3 needs at least one component box")
    if any(p < 2 for p in params[:2]):
        raise WiringError("box dimensions must be at least 2")
    maker = {"P1": _p1, "P2": _p2, "P3": _p3,
             "P5": _p5, "P6": _p6, "P7": _p7}[key]
    return maker(*params)


def protocol3_error(d, dp, n):
    """Worst-case (over joint inputs) total variation distance between the
    chained-conversion output and the exact target box; zero exactly when
    d' divides d**n."""
    got = evaluate_wiring(preset("P3", d, dp, n))
    want = dbox(dp)
    worst = Fraction(0)
    for ins in got.shape.joint_inputs:
        off, size = got.shape.block(ins)
        tv = sum(abs(got.table[off + i] - want.table[off + i])
                 for i in range(size)) / 2
        worst = max(worst, tv)
    return worst
