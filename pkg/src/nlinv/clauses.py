"""Literals, clauses, subsumption, factoring and unit conflict."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from . import terms as T
from .terms import Term


class Literal(NamedTuple):
    positive: bool
    atom: tuple

    def negate(self) -> "Literal":
        return Literal(not self.positive, self.atom)

    def __str__(self) -> str:
        return format_literal(self)


@dataclass(eq=False, slots=True)
class Clause:
    """A clause with provenance.

    ``rule`` is ``"input"`` for clauses given to the prover, otherwise the
    name of the inference that produced it.  ``parents`` lists the ids of
    the clauses used; for hyper and UR inferences the nucleus comes first,
    followed by the satellites in nucleus-literal order.
    """

    id: int
    literals: Tuple[Literal, ...]
    rule: str = "input"
    parents: Tuple[int, ...] = ()
    weight: int = 0
    label: str = ""

    def __len__(self) -> int:
        return len(self.literals)

    @property
    def is_empty(self) -> bool:
        return not self.literals

    @property
    def is_unit(self) -> bool:
        return len(self.literals) == 1

    @property
    def is_positive(self) -> bool:
        return all(lit.positive for lit in self.literals)

    @property
    def is_negative(self) -> bool:
        return all(not lit.positive for lit in self.literals)

    @property
    def is_horn(self) -> bool:
        return sum(lit.positive for lit in self.literals) <= 1

    def variables(self) -> set:
        out = set()
        for lit in self.literals:
            out |= T.variables(lit.atom)
        return out

    def __str__(self) -> str:
        return format_clause(self)

    def __repr__(self) -> str:
        return f"Clause({self.id}: {format_clause(self)})"


class ClauseList:
    """An ordered, named list of clauses (usable, sos or passive)."""

    def __init__(self, role: str, clauses: Iterable[Clause] = ()):
        self.role = role
        self._items: Dict[int, Clause] = {}
        for c in clauses:
            self.append(c)

    def append(self, c: Clause) -> None:
        self._items[c.id] = c

    def remove(self, c: Clause) -> None:
        del self._items[c.id]

    def __contains__(self, c: Clause) -> bool:
        return c.id in self._items

    def __iter__(self) -> Iterator[Clause]:
        return iter(self._items.values())

    def __len__(self) -> int:
        return len(self._items)

    def ids(self) -> List[int]:
        return list(self._items)


# -- construction ------------------------------------------------------------


def weight(literals: Iterable[Literal]) -> int:
    return sum(T.size(lit.atom) for lit in literals)


def _shape(t: Term):
    # ordering key in which every variable looks the same
    if type(t) is int:
        return (-1,)
    if len(t) == 1:
        return (t[0],)
    return (t[0], *map(_shape, t[1:]))


def literal_key(lit: Literal):
    return (lit.atom[0], not lit.positive, _shape(lit.atom))


def canonical_literals(literals: Iterable[Literal]) -> Tuple[Literal, ...]:
    """Drop duplicate literals and sort into the canonical order."""
    lits = list(dict.fromkeys(literals))
    if len(lits) > 1:
        lits.sort(key=literal_key)
    return tuple(lits)


def is_tautology(literals: Sequence[Literal]) -> bool:
    if len(literals) < 2:
        return False
    pos = {lit.atom for lit in literals if lit.positive}
    return any(not lit.positive and lit.atom in pos for lit in literals)


def rename_literals(literals: Iterable[Literal], counter: Optional[Iterator[int]] = None
                    ) -> Tuple[Literal, ...]:
    mapping: Dict[int, int] = {}
    counter = T.default_vars if counter is None else counter
    return tuple(Literal(lit.positive, T._rename(lit.atom, counter, mapping)) for lit in literals)


def make_clause(literals: Iterable[Literal], rule: str = "input", parents: Sequence[int] = (),
                id: int = 0, label: str = "", counter: Optional[Iterator[int]] = None) -> Clause:
    """Canonicalize, rename apart and weigh a new clause."""
    lits = rename_literals(canonical_literals(literals), counter)
    return Clause(id, lits, rule, tuple(parents), weight(lits), label)


# -- subsumption -------------------------------------------------------------


def subsumes(c: Clause, d: Clause) -> bool:
    """θ-subsumption with the length guard ``len(c) <= len(d)``."""
    return literals_subsume(c.literals, d.literals)


def literals_subsume(c: Sequence[Literal], d: Sequence[Literal]) -> bool:
    if len(c) > len(d):
        return False
    if len(c) == 1:
        sign, atom = c[0]
        for lit in d:
            if lit[0] == sign and T.match_into(atom, lit[1], {}):
                return True
        return False
    return _subsume_from(c, 0, d, {})


def _subsume_from(c, i, d, s) -> bool:
    if i == len(c):
        return True
    sign, atom = c[i]
    for lit in d:
        if lit[0] != sign:
            continue
        s2 = dict(s)
        if T.match_into(atom, lit[1], s2) and _subsume_from(c, i + 1, d, s2):
            return True
    return False


def subsumer_of(c: Clause, d: Clause) -> Optional[T.Substitution]:
    """The matching substitution witnessing ``subsumes(c, d)``, if any."""
    if len(c) > len(d):
        return None
    return _witness(c.literals, 0, d.literals, {})


def _witness(c, i, d, s):
    if i == len(c):
        return s
    sign, atom = c[i]
    for lit in d:
        if lit[0] != sign:
            continue
        s2 = dict(s)
        if T.match_into(atom, lit[1], s2):
            out = _witness(c, i + 1, d, s2)
            if out is not None:
                return out
    return None


# -- factoring and unit conflict ---------------------------------------------


def factor_literals(literals: Sequence[Literal]) -> List[Tuple[Literal, ...]]:
    """Single-step factors: unify two same-sign literals and merge them."""
    out = []
    seen = set()
    for i, j in itertools.combinations(range(len(literals)), 2):
        a, b = literals[i], literals[j]
        if a.positive != b.positive or a.atom[0] != b.atom[0]:
            continue
        s: T.Substitution = {}
        if not T.unify_into(a.atom, b.atom, s):
            continue
        lits = canonical_literals(Literal(l.positive, T.apply(s, l.atom)) for l in literals)
        key = tuple((l.positive, _shape(l.atom)) for l in lits)
        if key not in seen:
            seen.add(key)
            out.append(lits)
    return out


def factors(c: Clause, counter: Optional[Iterator[int]] = None) -> List[Clause]:
    return [make_clause(lits, "factor", (c.id,), counter=counter)
            for lits in factor_literals(c.literals)]


def unit_conflict(u: Clause, w: Clause, id: int = 0) -> Optional[Clause]:
    """The empty clause if units ``u`` and ``w`` are complementary and unify."""
    if not (u.is_unit and w.is_unit):
        return None
    a, b = u.literals[0], w.literals[0]
    if a.positive == b.positive or a.atom[0] != b.atom[0]:
        return None
    atom_b = b.atom
    if u.variables() & w.variables():
        atom_b = T.rename_apart(atom_b)
    if not T.unify_into(a.atom, atom_b, {}):
        return None
    return Clause(id, (), "unit_conflict", (u.id, w.id), 0)


# -- printing and parsing -----------------------------------------------------


def format_literal(lit: Literal, names=None) -> str:
    return ("" if lit.positive else "-") + T.format_term(lit.atom, names)


def format_literals(literals: Sequence[Literal]) -> str:
    if not literals:
        return "$F"
    names = T.var_names(T.ordered_vars(lit.atom for lit in literals))
    return " | ".join(format_literal(lit, names) for lit in literals)


def format_clause(c: Clause) -> str:
    return format_literals(c.literals)


_TOKEN = re.compile(r"\s*(?:([A-Za-z0-9_$']+)|(.))")


def _tokens(text: str) -> List[str]:
    out = []
    for m in _TOKEN.finditer(text):
        tok = m.group(1) or m.group(2)
        if tok and not tok.isspace():
            out.append(tok)
    return out


class _Parser:
    # identifiers starting with u..z are variables
    def __init__(self, text: str, variables: Dict[str, int], counter):
        self.toks = _tokens(text)
        self.pos = 0
        self.vars = variables
        self.counter = counter

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected or 'token'}, got {tok!r}")
        self.pos += 1
        return tok

    def term(self) -> Term:
        name = self.take()
        if not re.fullmatch(r"[A-Za-z0-9_$']+", name):
            raise ValueError(f"bad symbol {name!r}")
        if self.peek() == "(":
            self.take("(")
            args = [self.term()]
            while self.peek() == ",":
                self.take(",")
                args.append(self.term())
            self.take(")")
            return T.fn(name, *args)
        if name[0] in "uvwxyz":
            v = self.vars.get(name)
            if v is None:
                v = self.vars[name] = T.var(self.counter)
            return v
        return T.const(name)

    def literal(self) -> Literal:
        positive = True
        while self.peek() in ("-", "~"):
            self.take()
            positive = not positive
        atom = self.term()
        if type(atom) is int:
            raise ValueError("a literal's atom cannot be a variable")
        return Literal(positive, atom)

    def literals(self) -> List[Literal]:
        if self.peek() == "$F":
            self.take()
            return []
        out = [self.literal()]
        while self.peek() == "|":
            self.take("|")
            out.append(self.literal())
        if self.peek() == ".":
            self.take(".")
        if self.peek() is not None:
            raise ValueError(f"trailing input at {self.peek()!r}")
        return out


def parse_term(text: str, variables: Optional[Dict[str, int]] = None, counter=None) -> Term:
    p = _Parser(text, {} if variables is None else variables, counter)
    t = p.term()
    if p.peek() is not None:
        raise ValueError(f"trailing input at {p.peek()!r}")
    return t


def parse_literals(text: str, variables: Optional[Dict[str, int]] = None, counter=None
                   ) -> List[Literal]:
    return _Parser(text, {} if variables is None else variables, counter).literals()


def parse_clause(text: str, id: int = 0, label: str = "", counter=None) -> Clause:
    """Parse ``-P(x,y) | Q(a)`` style clause text."""
    lits = parse_literals(text, counter=counter)
    T.check_arities(lit.atom for lit in lits)
    return make_clause(lits, id=id, label=label, counter=counter)
