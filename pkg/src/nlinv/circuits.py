"""Negation-limited inverter problems as clause sets.

A fact ``P(pattern, list)`` says that the signal ``pattern`` (one bit per
truth-table row) can be built from the inputs and the inverters recorded in
``list``.  The list is open-tailed, ``L(inv(a), L(inv(b), v))``, so facts
built with fewer inverters are more general and subsume the rest.

The usable list holds three gate rules and a denial::

    -P(x,l) | -P(y,l) | P(and(x,y),l)
    -P(x,l) | -P(y,l) | P(or(x,y),l)
    -P(x,l) | P(not(x), snoc(l, inv(not(x))))
    -P(out_1,l) | ... | -P(out_m,l)

``and``, ``or``, ``not`` and ``snoc`` are interpreted: the simplifier
evaluates them whenever their arguments are known.  ``snoc`` puts the new
inverter at the open end of the list, so inverters appear in the order they
were introduced and a list reads as a chain of contexts, each extending the
previous one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from . import terms as T
from .clauses import Clause, Literal, make_clause
from .saturation import Limits, Outcome, ProofDag, ProverConfig, saturate
from .inference import RuleConfig

MAX_INPUTS = 16


@dataclass(frozen=True)
class SignalPattern:
    """A signal's bit column, row 0 first."""

    bits: str

    def __post_init__(self):
        if not self.bits or set(self.bits) - {"0", "1"}:
            raise ValueError(f"bad signal pattern {self.bits!r}")

    @classmethod
    def from_int(cls, value: int, rows: int) -> "SignalPattern":
        return cls(format(value, f"0{rows}b"))

    @property
    def rows(self) -> int:
        return len(self.bits)

    @property
    def value(self) -> int:
        return int(self.bits, 2)

    def __invert__(self) -> "SignalPattern":
        return SignalPattern.from_int(self.value ^ ((1 << self.rows) - 1), self.rows)

    def __and__(self, other: "SignalPattern") -> "SignalPattern":
        return SignalPattern.from_int(self.value & other.value, self.rows)

    def __or__(self, other: "SignalPattern") -> "SignalPattern":
        return SignalPattern.from_int(self.value | other.value, self.rows)

    def __str__(self) -> str:
        return self.bits


def input_patterns(n: int) -> List[SignalPattern]:
    """Truth-table columns for ``n`` inputs, rows in binary counting order."""
    if not 1 <= n <= MAX_INPUTS:
        raise ValueError(f"input count must be in 1..{MAX_INPUTS}, got {n}")
    rows = 1 << n
    return [SignalPattern("".join(str((r >> (n - 1 - i)) & 1) for r in range(rows)))
            for i in range(n)]


@dataclass(frozen=True)
class CircuitProblem:
    rows: int
    inputs: Tuple[SignalPattern, ...]
    outputs: Tuple[SignalPattern, ...]
    budget: int
    name: str = "problem"

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("a problem needs at least one input")
        if not self.outputs:
            raise ValueError("a problem needs at least one output")
        if self.budget < 0:
            raise ValueError("budget must be >= 0")
        for p in self.inputs + self.outputs:
            if p.rows != self.rows:
                raise ValueError(f"pattern {p} does not have {self.rows} rows")

    def with_budget(self, budget: int) -> "CircuitProblem":
        return CircuitProblem(self.rows, self.inputs, self.outputs, budget, self.name)


def ninv_problem(n: int, budget: int) -> CircuitProblem:
    """Invert ``n`` inputs with at most ``budget`` NOT gates."""
    ins = tuple(input_patterns(n))
    return CircuitProblem(1 << n, ins, tuple(~p for p in ins), budget, f"ninv {n} {budget}")


def inverter_problem() -> CircuitProblem:
    """The two-inverter puzzle: three inputs, three complemented outputs, two NOTs."""
    return CircuitProblem(**{**ninv_problem(3, 2).__dict__, "name": "2inv"})


def identity_problem(n: int) -> CircuitProblem:
    ins = tuple(input_patterns(n))
    return CircuitProblem(1 << n, ins, ins, 0, f"identity {n}")


BCD_CURRENT = ("0000000011", "0000111100", "0011001100", "0101010101")
BCD_NEXT = ("0000000111", "0001111000", "0110011001", "1010101010")
BCD_NEXT_LISTING = ("0000000110", "0001111000", "0110011000", "1010101010")
DENIALS = ("table-derived", "paper-literal")


def bcd_problem(denial: str = "table-derived") -> CircuitProblem:
    """Next-state function of the decade counter with two NOT gates.

    ``denial="paper-literal"`` uses the output columns as printed in the
    published clause listing, which differ from the state table in two places.
    """
    if denial not in DENIALS:
        raise ValueError(f"denial must be one of {DENIALS}")
    outs = BCD_NEXT if denial == "table-derived" else BCD_NEXT_LISTING
    name = "bcd" if denial == "table-derived" else "bcd paper-literal"
    return CircuitProblem(10, tuple(map(SignalPattern, BCD_CURRENT)),
                          tuple(map(SignalPattern, outs)), 2, name)


def parse_problem(text: str, name: str = "problem") -> CircuitProblem:
    """Read the ``rows`` / ``input`` / ``output`` / ``budget`` text format."""
    rows = budget = None
    ins: List[SignalPattern] = []
    outs: List[SignalPattern] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<keyword> <value>', got {raw!r}")
        key, value = parts
        try:
            if key == "rows":
                rows = int(value)
            elif key == "budget":
                budget = int(value)
            elif key == "input":
                ins.append(SignalPattern(value))
            elif key == "output":
                outs.append(SignalPattern(value))
            else:
                raise ValueError(f"unknown keyword {key!r}")
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from None
    if rows is None:
        rows = ins[0].rows if ins else 0
    if budget is None:
        raise ValueError("missing 'budget' line")
    return CircuitProblem(rows, tuple(ins), tuple(outs), budget, name)


def format_problem(p: CircuitProblem) -> str:
    lines = [f"# {p.name}", f"rows {p.rows}"]
    lines += [f"input {s}" for s in p.inputs]
    lines += [f"output {s}" for s in p.outputs]
    lines.append(f"budget {p.budget}")
    return "\n".join(lines) + "\n"


def builtin_problem(spec: str, denial: str = "table-derived") -> Optional[CircuitProblem]:
    """Resolve ``2inv``, ``bcd``, ``ninv <n> <k>`` or ``identity <n>``; None otherwise.

    Colons work as separators too (``ninv:3:2``).
    """
    words = spec.replace(":", " ").split()
    if not words:
        return None
    head, args = words[0], words[1:]
    try:
        nums = [int(a) for a in args]
    except ValueError:
        return None
    if head == "2inv" and not nums:
        return inverter_problem()
    if head == "bcd" and not nums:
        return bcd_problem(denial)
    if head == "ninv" and len(nums) == 2:
        return ninv_problem(*nums)
    if head == "identity" and len(nums) == 1:
        return identity_problem(nums[0])
    return None


# -- the clause encoding ------------------------------------------------------


P_ = T.intern("P", 2)
L_ = T.intern("L", 2)
INV_ = T.intern("inv", 1)
AND_ = T.intern("and", 2)
OR_ = T.intern("or", 2)
NOT_ = T.intern("not", 1)
SNOC_ = T.intern("snoc", 2)


class PatternAlgebra:
    """Pattern constants for one row count, with eager evaluation."""

    def __init__(self, rows: int):
        self.rows = rows
        self.full = (1 << rows) - 1
        self._value: Dict[int, int] = {}      # symbol id -> bits
        self._term: Dict[int, tuple] = {}     # bits -> constant term

    def term(self, value: int) -> tuple:
        t = self._term.get(value)
        if t is None:
            t = T.const(format(value, f"0{self.rows}b"))
            self._term[value] = t
            self._value[t[0]] = value
        return t

    def value(self, t) -> Optional[int]:
        """Bits of a ground pattern term, or None if it is not one."""
        if type(t) is int:
            return None
        if len(t) == 1:
            v = self._value.get(t[0])
            if v is None:
                name = T.symbol_name(t[0])
                if len(name) == self.rows and not set(name) - {"0", "1"}:
                    v = self._value[t[0]] = int(name, 2)
            return v
        f = t[0]
        if f == NOT_:
            a = self.value(t[1])
            return None if a is None else a ^ self.full
        if f == AND_ or f == OR_:
            a = self.value(t[1])
            if a is None:
                return None
            b = self.value(t[2])
            if b is None:
                return None
            return a & b if f == AND_ else a | b
        return None

    def evaluate(self, t):
        if type(t) is int or len(t) == 1:
            return t
        v = self.value(t)
        return t if v is None else self.term(v)

    def simplify(self, atom):
        """Evaluate interpreted functions inside a ``P`` atom."""
        if atom[0] != P_:
            return atom
        x, l = atom[1], atom[2]
        if type(x) is tuple and len(x) > 1:
            x = self.evaluate(x)
        if type(l) is tuple and l[0] == SNOC_:
            l = self._snoc(l)
        return (P_, x, l)

    def _snoc(self, t):
        lst, item = t[1], t[2]
        if type(item) is tuple and item[0] == INV_:
            item = (INV_, self.evaluate(item[1]))
        cells = []
        while type(lst) is tuple and lst[0] == L_:
            cells.append(lst[1])
            lst = lst[2]
        if type(lst) is not int:
            return (SNOC_, t[1], item)
        out = (L_, item, lst)
        for head in reversed(cells):
            out = (L_, head, out)
        return out


def inverter_count(lst) -> int:
    """Closed ``L`` cells of a list term; the open tail counts 0."""
    n = 0
    while type(lst) is tuple and lst[0] == L_:
        n += 1
        lst = lst[2]
    return n


def enforce_budget(c, budget: int) -> bool:
    """True to keep: no ``P`` literal of ``c`` carries more than ``budget`` inverters."""
    literals = c.literals if isinstance(c, Clause) else c
    for lit in literals:
        atom = lit[1]
        if atom[0] == P_ and inverter_count(atom[2]) > budget:
            return False
    return True


def _budget_filter(budget: int):
    def keep(literals):
        for lit in literals:
            atom = lit[1]
            if atom[0] == P_:
                lst, n = atom[2], 0
                while type(lst) is tuple and lst[0] == L_:
                    n += 1
                    lst = lst[2]
                if n > budget:
                    return False
        return True
    return keep


@dataclass
class Encoding:
    problem: CircuitProblem
    algebra: PatternAlgebra
    usable: List[Clause]
    sos: List[Clause]

    def prover_config(self, rule: RuleConfig = RuleConfig(), limits: Limits = Limits(),
                      pick_given: str = "weight", enforce: bool = True, **kw) -> ProverConfig:
        keep = _budget_filter(self.problem.budget) if enforce else None
        return ProverConfig(rule=rule, limits=limits, pick_given=pick_given,
                            simplify=self.algebra.simplify, keep=keep, keep_reason="budget", **kw)


def encode_problem(p: CircuitProblem) -> Encoding:
    alg = PatternAlgebra(p.rows)
    counter = itertools.count()
    x, y, l = (T.var(counter) for _ in range(3))
    pos, neg = (lambda a: Literal(True, a)), (lambda a: Literal(False, a))
    usable = [
        make_clause([neg((P_, x, l)), neg((P_, y, l)), pos((P_, (AND_, x, y), l))],
                    id=1, label="and", counter=counter),
        make_clause([neg((P_, x, l)), neg((P_, y, l)), pos((P_, (OR_, x, y), l))],
                    id=2, label="or", counter=counter),
        make_clause([neg((P_, x, l)),
                     pos((P_, (NOT_, x), (SNOC_, l, (INV_, (NOT_, x)))))],
                    id=3, label="not", counter=counter),
        make_clause([neg((P_, alg.term(o.value), l)) for o in p.outputs],
                    id=4, label="denial", counter=counter),
    ]
    sos = [make_clause([pos((P_, alg.term(s.value), T.var(counter)))],
                       id=5 + i, label=f"input {i + 1}", counter=counter)
           for i, s in enumerate(p.inputs)]
    return Encoding(p, alg, usable, sos)


def prove(p: CircuitProblem, rule: RuleConfig = RuleConfig(), limits: Limits = Limits(),
          pick_given: str = "weight", trace_file=None, **kw) -> Tuple[Outcome, Optional["Circuit"]]:
    """Saturate the encoding of ``p``; on refutation also extract the circuit."""
    enc = encode_problem(p)
    outcome = saturate(enc.usable, enc.sos, enc.prover_config(rule, limits, pick_given, **kw),
                       trace_file=trace_file)
    circuit = extract_circuit(outcome.proof, p) if outcome.refuted else None
    return outcome, circuit


# -- circuits -------------------------------------------------------------------


class Gate(NamedTuple):
    op: str                 # input | and | or | not
    args: Tuple[int, ...]   # input index for "input", node indices otherwise


@dataclass
class Circuit:
    """Gate DAG; node ``i`` may only use nodes ``< i``."""

    gates: List[Gate] = field(default_factory=list)
    outputs: List[int] = field(default_factory=list)

    def add(self, op: str, *args: int) -> int:
        self.gates.append(Gate(op, tuple(args)))
        return len(self.gates) - 1

    @property
    def not_count(self) -> int:
        return sum(g.op == "not" for g in self.gates)

    @property
    def gate_count(self) -> int:
        return sum(g.op != "input" for g in self.gates)

    def evaluate(self, inputs: Sequence[int], rows: int) -> List[int]:
        """Bit patterns of every node, given input patterns as ints."""
        full = (1 << rows) - 1
        vals: List[int] = []
        for i, g in enumerate(self.gates):
            if g.op != "input" and any(a >= i or a < 0 for a in g.args):
                raise ValueError(f"node {i} uses a later node")
            if g.op == "input":
                vals.append(inputs[g.args[0]])
            elif g.op == "and":
                vals.append(vals[g.args[0]] & vals[g.args[1]])
            elif g.op == "or":
                vals.append(vals[g.args[0]] | vals[g.args[1]])
            elif g.op == "not":
                vals.append(vals[g.args[0]] ^ full)
            else:
                raise ValueError(f"unknown gate {g.op!r}")
        return vals

    def format(self) -> str:
        names = []
        lines = []
        for i, g in enumerate(self.gates):
            if g.op == "input":
                names.append(f"i{g.args[0] + 1}")
                continue
            names.append(f"g{i}")
            lines.append(f"g{i} = {g.op.upper()}({', '.join(names[a] for a in g.args)})")
        lines += [f"o{k + 1} = {names[n]}" for k, n in enumerate(self.outputs)]
        lines.append(f"# {self.gate_count} gates, {self.not_count} NOT")
        return "\n".join(lines) + "\n"


def verify_circuit(c: Circuit, p: CircuitProblem) -> bool:
    """Every output matches on all rows and the NOT count fits the budget."""
    if c.not_count > p.budget or len(c.outputs) != len(p.outputs):
        return False
    try:
        vals = c.evaluate([s.value for s in p.inputs], p.rows)
    except (ValueError, IndexError):
        return False
    return all(0 <= n < len(vals) and vals[n] == o.value for n, o in zip(c.outputs, p.outputs))


def _nucleus_label(c: Clause, nodes: Dict[int, Clause]) -> str:
    while c.rule == "factor":
        c = nodes[c.parents[0]]
    return c.label


def extract_circuit(proof: ProofDag, p: CircuitProblem) -> Circuit:
    """Read the gate applications of a hyper or UR refutation as a circuit."""
    alg = PatternAlgebra(p.rows)
    for s in p.inputs + p.outputs:
        alg.term(s.value)
    nodes = proof.by_id()
    circuit = Circuit([Gate("input", (i,)) for i in range(len(p.inputs))])
    by_pattern: Dict[int, int] = {}
    for i, s in enumerate(p.inputs):
        by_pattern.setdefault(s.value, i)

    def fact_pattern(c: Clause) -> int:
        if len(c.literals) != 1 or not c.literals[0].positive or c.literals[0].atom[0] != P_:
            raise ValueError(f"clause {c.id} is not a P fact")
        v = alg.value(c.literals[0].atom[1])
        if v is None:
            raise ValueError(f"clause {c.id} has no ground pattern")
        return v

    def node(c: Clause) -> int:
        pat = fact_pattern(c)
        if pat in by_pattern:
            return by_pattern[pat]
        if c.rule == "factor":
            return node(nodes[c.parents[0]])
        if c.rule not in ("ur", "hyper"):
            raise ValueError(f"cannot read a gate from rule {c.rule!r} (clause {c.id})")
        op = _nucleus_label(nodes[c.parents[0]], nodes)
        args = [node(nodes[i]) for i in c.parents[1:]]
        if pat in by_pattern:
            return by_pattern[pat]
        if op == "not" and len(args) == 1 or op in ("and", "or") and len(args) == 2:
            by_pattern[pat] = circuit.add(op, *args)
            return by_pattern[pat]
        raise ValueError(f"clause {c.id}: nucleus {op!r} is not a gate rule")

    facts: Dict[int, Clause] = {}
    for c in proof.nodes:
        lits = c.literals
        if len(lits) == 1 and lits[0].positive and lits[0].atom[0] == P_:
            v = alg.value(lits[0].atom[1])
            if v is not None:
                facts.setdefault(v, c)
    for o in p.outputs:
        fact = facts.get(o.value)
        if fact is None:
            raise ValueError(f"the proof never derives output {o}")
        circuit.outputs.append(node(fact))
    return circuit


# -- the brute-force oracle -------------------------------------------------------


def _extend_closure(origin: Dict[int, tuple], order: List[int], start: int) -> None:
    # close order[start:] against everything under AND and OR, in place
    i = start
    while i < len(order):
        a = order[i]
        for j in range(i + 1):
            b = order[j]
            for op, r in (("and", a & b), ("or", a | b)):
                if r not in origin:
                    origin[r] = (op, a, b)
                    order.append(r)
        i += 1


def monotone_closure(generators: Iterable[int]) -> Dict[int, tuple]:
    """Every pattern reachable from ``generators`` by AND and OR, with provenance."""
    origin: Dict[int, tuple] = {}
    order: List[int] = []
    for k, g in enumerate(generators):
        if g not in origin:
            origin[g] = ("input", k)
            order.append(g)
    _extend_closure(origin, order, 0)
    return origin


def _witness(origin: Dict[int, tuple], outputs: Sequence[int]) -> Circuit:
    circuit = Circuit()
    built: Dict[int, int] = {}

    def build(pat: int) -> int:
        if pat in built:
            return built[pat]
        how = origin[pat]
        if how[0] == "input":
            idx = circuit.add("input", how[1])
        elif how[0] == "not":
            idx = circuit.add("not", build(how[1]))
        else:
            a, b = build(how[1]), build(how[2])
            idx = circuit.add(how[0], a, b)
        built[pat] = idx
        return idx

    circuit.outputs = [build(o) for o in outputs]
    # inputs first, in index order, so the node list reads naturally
    order = sorted(range(len(circuit.gates)),
                   key=lambda i: (circuit.gates[i].op != "input",
                                  circuit.gates[i].args[0] if circuit.gates[i].op == "input" else i))
    remap = {old: new for new, old in enumerate(order)}
    gates = []
    for old in order:
        g = circuit.gates[old]
        gates.append(g if g.op == "input" else Gate(g.op, tuple(remap[a] for a in g.args)))
    return Circuit(gates, [remap[o] for o in circuit.outputs])


def brute_force_search(p: CircuitProblem, max_budget: int = 3) -> Optional[Circuit]:
    """Exhaustive synthesis: a witness circuit, or None if none fits the budget.

    Level ``k`` holds every distinct closure reachable with ``k`` NOT gates;
    each NOT inverts a pattern of the current closure.  Levels are explored
    in order and branches in pattern-discovery order, so the witness is
    deterministic and uses as few NOT gates as possible.
    """
    if p.rows > 1 << MAX_INPUTS or p.budget > max_budget:
        raise ValueError("problem too large for exhaustive search")
    full = (1 << p.rows) - 1
    outs = [o.value for o in p.outputs]
    origin = monotone_closure(s.value for s in p.inputs)
    level = [(origin, list(origin))]
    seen = {frozenset(origin)}
    for k in range(p.budget + 1):
        nxt = []
        for origin, order in level:
            if all(o in origin for o in outs):
                return _witness(origin, outs)
            if k == p.budget:
                continue
            for pat in order:
                q = pat ^ full
                if q in origin:
                    continue
                o2 = dict(origin)
                o2[q] = ("not", pat)
                ord2 = order + [q]
                _extend_closure(o2, ord2, len(order))
                key = frozenset(o2)
                if key not in seen:
                    seen.add(key)
                    nxt.append((o2, ord2))
        level = nxt
    return None


def is_monotone(pattern: int, inputs: Sequence[int], rows: int) -> bool:
    """True if raising any input bit in a row never lowers the pattern's bit."""
    n = len(inputs)
    row_inputs = [tuple((inp >> (rows - 1 - r)) & 1 for inp in inputs) for r in range(rows)]
    bit = [(pattern >> (rows - 1 - r)) & 1 for r in range(rows)]
    for r1 in range(rows):
        for r2 in range(rows):
            if bit[r1] > bit[r2] and all(a <= b for a, b in zip(row_inputs[r1], row_inputs[r2])):
                return False
    return True


def markov_bound(n: int) -> int:
    """Inverters necessary and sufficient to invert ``n`` signals: ceil(log2(n+1))."""
    return math.ceil(math.log2(n + 1))
