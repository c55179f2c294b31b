"""Explicit AND/OR circuits over literals, truth-table evaluation, and the
named function families used throughout: the Minsky-Papert function and its
symmetric form, surjectivity, the selector lift that converts threshold
degree into threshold density, and the recursive hard-circuit family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import FnTable, box, hypercube, weight_slice
from .errors import PreconditionError
from .oracles import bool_table

F = Fraction

# a reference is ("lit", var, negated) or ("gate", index)
Ref = tuple


@dataclass
class Gate:
    op: str  # "and" | "or"
    children: tuple[Ref, ...]

    def __post_init__(self):
        if self.op not in ("and", "or"):
            raise PreconditionError(f"unknown gate op {self.op!r}")
        if not self.children:
            raise PreconditionError("gate needs at least one child")


@dataclass
class CircuitDesc:
    """A DAG of AND/OR gates over input literals.

    Statistics (size, depth, bottom fan-in, monotonicity) are recomputed
    from the structure on each call, never cached.
    """

    n_inputs: int
    gates: list[Gate] = field(default_factory=list)
    output: Ref = ("lit", 0, False)

    def _check_ref(self, ref: Ref, upto: int) -> None:
        kind = ref[0]
        if kind == "lit":
            _, var, neg = ref
            if not (0 <= var < self.n_inputs):
                raise PreconditionError(f"literal {ref} out of range")
        elif kind == "gate":
            if not (0 <= ref[1] < upto):
                raise PreconditionError(f"gate reference {ref} not yet defined (acyclic order)")
        else:
            raise PreconditionError(f"bad reference {ref}")

    def validate(self) -> None:
        for i, g in enumerate(self.gates):
            for ref in g.children:
                self._check_ref(ref, i)
        self._check_ref(self.output, len(self.gates))

    def add_gate(self, op: str, children: Iterable[Ref]) -> Ref:
        g = Gate(op, tuple(children))
        for ref in g.children:
            self._check_ref(ref, len(self.gates))
        self.gates.append(g)
        return ("gate", len(self.gates) - 1)

    # ---------------------------------------------------------- statistics

    def size(self) -> int:
        return len(self.gates)

    def _depths(self) -> list[int]:
        d = []
        for g in self.gates:
            d.append(1 + max((d[r[1]] if r[0] == "gate" else 0) for r in g.children))
        return d

    def depth(self) -> int:
        if self.output[0] == "lit":
            return 0
        return self._depths()[self.output[1]]

    def bottom_fanin(self) -> int:
        """Largest fan-in among gates all of whose children are literals."""
        best = 0
        for g in self.gates:
            if all(r[0] == "lit" for r in g.children):
                best = max(best, len(g.children))
        return best

    def is_monotone(self) -> bool:
        for g in self.gates:
            for r in g.children:
                if r[0] == "lit" and r[2]:
                    return False
        return self.output[0] != "lit" or not self.output[2]

    # ---------------------------------------------------------- evaluation

    def evaluate(self, x: Sequence[int]) -> int:
        if len(x) != self.n_inputs:
            raise PreconditionError("arity mismatch")
        vals: list[int] = []

        def ref_val(ref: Ref) -> int:
            if ref[0] == "lit":
                _, var, neg = ref
                return 1 - x[var] if neg else x[var]
            return vals[ref[1]]

        for g in self.gates:
            bits = [ref_val(r) for r in g.children]
            vals.append(int(all(bits)) if g.op == "and" else int(any(bits)))
        return ref_val(self.output)

    def truth_table(self) -> FnTable:
        if self.n_inputs > 20:
            raise PreconditionError("truth table limited to 20 inputs")
        dom = hypercube(self.n_inputs)
        return bool_table(dom, (p for p in dom.points() if self.evaluate(p)))

    def pruned(self) -> "CircuitDesc":
        """Drop gates unreachable from the output, renumbering the rest."""
        if self.output[0] == "lit":
            c = CircuitDesc(self.n_inputs)
            c.output = self.output
            return c
        alive: set[int] = set()
        stack = [self.output[1]]
        while stack:
            i = stack.pop()
            if i in alive:
                continue
            alive.add(i)
            for r in self.gates[i].children:
                if r[0] == "gate":
                    stack.append(r[1])
        out = CircuitDesc(self.n_inputs)
        mapping: dict[int, Ref] = {}
        for i in sorted(alive):
            kids = tuple(mapping[r[1]] if r[0] == "gate" else r
                         for r in self.gates[i].children)
            mapping[i] = out.add_gate(self.gates[i].op, kids)
        out.output = mapping[self.output[1]]
        return out

    def merge_like_gates(self) -> "CircuitDesc":
        """Splice children of same-op gates into their parents; the standard
        normalization before counting layers."""
        out = CircuitDesc(self.n_inputs)
        mapping: dict[int, Ref] = {}

        def remap(ref: Ref) -> Ref:
            return mapping[ref[1]] if ref[0] == "gate" else ref

        for i, g in enumerate(self.gates):
            children: list[Ref] = []
            for r in map(remap, g.children):
                if r[0] == "gate" and out.gates[r[1]].op == g.op:
                    children.extend(out.gates[r[1]].children)
                else:
                    children.append(r)
            dedup = list(dict.fromkeys(children))
            mapping[i] = out.add_gate(g.op, dedup)
        out.output = remap(self.output)
        return out.pruned()

    def monotonized(self) -> "CircuitDesc":
        """Replace every negated literal with a fresh unnegated input.

        The doubled circuit is monotone and contains the original as the
        restriction pairing each new input with the negation of its twin,
        so its threshold degree is no smaller.
        """
        out = CircuitDesc(2 * self.n_inputs)
        shift = self.n_inputs

        def fix(ref: Ref) -> Ref:
            if ref[0] == "lit" and ref[2]:
                return ("lit", ref[1] + shift, False)
            return ref

        for g in self.gates:
            out.gates.append(Gate(g.op, tuple(fix(r) for r in g.children)))
        out.output = fix(self.output)
        return out

    def negated(self) -> "CircuitDesc":
        """De Morgan dual: same DAG with ops swapped and literals negated."""
        out = CircuitDesc(self.n_inputs)
        for g in self.gates:
            kids = tuple(("lit", r[1], not r[2]) if r[0] == "lit" else r for r in g.children)
            out.gates.append(Gate("or" if g.op == "and" else "and", kids))
        if self.output[0] == "lit":
            out.output = ("lit", self.output[1], not self.output[2])
        else:
            out.output = self.output
        return out

    def to_dot(self) -> str:
        lines = ["digraph circuit {"]
        for i, g in enumerate(self.gates):
            lines.append(f'  g{i} [label="{g.op.upper()}"];')
            for r in g.children:
                if r[0] == "lit":
                    name = f'x{r[1]}' + ("n" if r[2] else "")
                    lines.append(f'  {name} [shape=box,label="{"!" if r[2] else ""}x{r[1]}"];')
                    lines.append(f"  {name} -> g{i};")
                else:
                    lines.append(f"  g{r[1]} -> g{i};")
        if self.output[0] == "gate":
            lines.append(f"  g{self.output[1]} -> out;")
        else:
            lines.append(f"  x{self.output[1]} -> out;")
        lines.append('  out [shape=doublecircle,label="out"];')
        lines.append("}")
        return "\n".join(lines)


def literal(n_inputs: int, var: int = 0) -> CircuitDesc:
    c = CircuitDesc(n_inputs)
    c.output = ("lit", var, False)
    return c


def mp(m: int, r: int) -> CircuitDesc:
    """AND of m ORs of r fresh variables each; depth 2, size m+1."""
    if m < 1 or r < 1:
        raise PreconditionError("need m, r >= 1")
    c = CircuitDesc(m * r)
    ors = [c.add_gate("or", (("lit", i * r + j, False) for j in range(r))) for i in range(m)]
    c.output = c.add_gate("and", ors)
    return c


def mp_star_table(m: int, r: int) -> FnTable:
    """The symmetric Minsky-Papert function on {0..r}^m: 1 iff every block
    weight is nonzero."""
    if m < 1 or r < 1:
        raise PreconditionError("need m, r >= 1")
    dom = box([r] * m)
    return bool_table(dom, (p for p in dom.points() if all(v >= 1 for v in p)))


def mp_table(m: int, r: int) -> FnTable:
    return mp(m, r).truth_table()


def surj_table(n: int, r: int) -> FnTable:
    """Surjectivity of n items into r buckets, in its symmetric form: the
    block-weight vector determines the answer, so the table lives on the
    exact-weight-n slice of {0..n}^r."""
    if r < 1 or n < 1:
        raise PreconditionError("need n, r >= 1")
    dom = weight_slice(box([n] * r), n, n)
    if r > n:
        return bool_table(dom, [])  # pigeonhole: never surjective
    return bool_table(dom, (p for p in dom.points() if all(v >= 1 for v in p)))


def krause_pudlak(f_circuit: CircuitDesc) -> CircuitDesc:
    """Selector lift: on inputs (x, y, z), feed (not z_i and x_i) or
    (z_i and y_i) into input i of f."""
    n = f_circuit.n_inputs
    out = CircuitDesc(3 * n)

    selectors: list[Ref] = []
    neg_selectors: list[Ref] = []
    for i in range(n):
        a = out.add_gate("and", [("lit", 2 * n + i, True), ("lit", i, False)])
        b = out.add_gate("and", [("lit", 2 * n + i, False), ("lit", n + i, False)])
        selectors.append(out.add_gate("or", [a, b]))
        na = out.add_gate("or", [("lit", 2 * n + i, False), ("lit", i, True)])
        nb = out.add_gate("or", [("lit", 2 * n + i, True), ("lit", n + i, True)])
        neg_selectors.append(out.add_gate("and", [na, nb]))

    offset = len(out.gates)

    def remap(ref: Ref) -> Ref:
        if ref[0] == "lit":
            return neg_selectors[ref[1]] if ref[2] else selectors[ref[1]]
        return ("gate", ref[1] + offset)

    for g in f_circuit.gates:
        out.gates.append(Gate(g.op, tuple(remap(r) for r in g.children)))
    out.output = remap(f_circuit.output)
    out.validate()
    return out.pruned()


def parity2_circuit() -> CircuitDesc:
    c = CircuitDesc(2)
    a = c.add_gate("and", [("lit", 0, False), ("lit", 1, True)])
    b = c.add_gate("and", [("lit", 0, True), ("lit", 1, False)])
    c.output = c.add_gate("or", [a, b])
    return c


def build_fkn(k: int, n: int) -> CircuitDesc:
    """The recursive monotone family: a single literal at depth one, the
    Minsky-Papert circuit at depth two, and one amplification step on top
    of the k-2 member after that.  Toy-scale parameters."""
    if k < 1:
        raise PreconditionError("need k >= 1")
    if k == 1:
        return literal(max(n, 1))
    if k == 2:
        s = round(n ** (1 / 3))
        while s ** 3 > n:
            s -= 1
        if s < 1:
            raise PreconditionError(f"degenerate parameters: n={n} too small for depth 2")
        return mp(s, s * s)
    if k == 3:
        from .amplification import amplify_circuit_once

        inner = literal(1)
        m = max(1, round(n ** (1 / 2)))
        theta = max(2, n // max(1, m))
        circ, _ = amplify_circuit_once(inner, m, theta)
        return circ if circ.is_monotone() else circ.monotonized()
    raise PreconditionError("toy recursion implemented for k <= 3")
