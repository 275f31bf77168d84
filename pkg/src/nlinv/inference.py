"""Hyper-resolution, UR-resolution and binary resolution.

Each rule generates every conclusion in which a designated *given* clause
takes part, either as the nucleus or as one of the satellites.  The
partners come from a :class:`Usable` list, which keeps the literal
indexes the rules need.

The generators yield raw conclusions ``(literals, rule, parents)``; the
saturation loop normalizes them.  ``hyper_resolve`` and friends wrap the
generators and return finished :class:`Clause` objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from . import terms as T
from .clauses import Clause, ClauseList, Literal, make_clause, rename_literals, _shape
from .index import LiteralIndex

Conclusion = Tuple[Tuple[Literal, ...], str, Tuple[int, ...]]

RULES = ("hyper", "ur", "binary")
POLARITIES = ("both", "positive", "negative")


@dataclass(frozen=True)
class RuleConfig:
    rule: str = "ur"
    ur_polarity: str = "both"

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.ur_polarity not in POLARITIES:
            raise ValueError(f"unknown UR polarity {self.ur_polarity!r}")


class Usable(ClauseList):
    """The usable list together with the indexes inference needs."""

    def __init__(self, clauses: Iterable[Clause] = ()):
        self.units = LiteralIndex()        # unit clauses -> (clause, 0)
        self.positive = LiteralIndex()     # literals of positive clauses -> (clause, i)
        self.literals = LiteralIndex()     # every literal -> (clause, i)
        self.nonunit: Dict[int, Clause] = {}
        self.nonpositive: Dict[int, Clause] = {}
        self._entries: Dict[int, list] = {}
        super().__init__("usable", clauses)

    def append(self, c: Clause) -> None:
        super().append(c)
        entries = []
        lits = c.literals
        positive = all(lit.positive for lit in lits)
        if len(lits) == 1:
            item = (c, 0)
            self.units.insert(lits[0].positive, lits[0].atom, item)
            entries.append((self.units, lits[0].positive, lits[0].atom, item))
        elif lits:
            self.nonunit[c.id] = c
        if not positive:
            self.nonpositive[c.id] = c
        for i, lit in enumerate(lits):
            item = (c, i)
            self.literals.insert(lit.positive, lit.atom, item)
            entries.append((self.literals, lit.positive, lit.atom, item))
            if positive:
                self.positive.insert(lit.positive, lit.atom, item)
                entries.append((self.positive, lit.positive, lit.atom, item))
        self._entries[c.id] = entries

    def remove(self, c: Clause) -> None:
        super().remove(c)
        for index, sign, atom, item in self._entries.pop(c.id, ()):
            index.remove(sign, atom, item)
        self.nonunit.pop(c.id, None)
        self.nonpositive.pop(c.id, None)


def _as_usable(usable: Union[Usable, Iterable[Clause]], given: Clause) -> Usable:
    if not isinstance(usable, Usable):
        usable = Usable(usable)
    if given not in usable:
        usable.append(given)
    return usable


# -- the shared clash search ---------------------------------------------------


def _clash(nucleus, todo, i, s, used, sats, residual, lookup, given, counter):
    """Clash nucleus literals ``todo[i:]`` against satellites from ``lookup``.

    ``todo`` holds ``(position, forbid_given)`` pairs; ``forbid_given``
    keeps the given clause out of positions that precede its own, so each
    inference is produced once.  Yields ``(subst, sats, residual)``.
    """
    if i == len(todo):
        yield s, sats, residual
        return
    j, forbid = todo[i]
    sign, atom = nucleus.literals[j]
    for clause, li in lookup(not sign, T.apply(s, atom)):
        if forbid and clause is given:
            continue
        lits = clause.literals
        if clause.id in used:
            lits = rename_literals(lits, counter)
        s2 = dict(s)
        if not T.unify_into(atom, lits[li][1], s2):
            continue
        rest = lits[:li] + lits[li + 1:] if len(lits) > 1 else ()
        yield from _clash(nucleus, todo, i + 1, s2, used | {clause.id}, sats + ((j, clause.id),),
                          residual + rest, lookup, given, counter)


def _memoized(lookup):
    # usable is fixed while one given clause is processed; the index treats
    # all variables alike, so queries with the same shape share results
    cache = {}

    def cached(sign, atom):
        key = (sign, _shape(atom))
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = lookup(sign, atom)
        return hit
    return cached


def _parents(nucleus: Clause, sats) -> Tuple[int, ...]:
    return (nucleus.id,) + tuple(cid for _, cid in sorted(sats))


def _instantiate(s, literals) -> Tuple[Literal, ...]:
    return tuple(Literal(lit[0], T.apply(s, lit[1])) for lit in literals)


# -- UR-resolution -------------------------------------------------------------


def _polarity_ok(positive: bool, polarity: str) -> bool:
    return polarity == "both" or (polarity == "positive") == positive


def ur_inferences(given: Clause, usable: Usable, polarity: str = "both",
                  counter=None) -> Iterator[Conclusion]:
    lookup = _memoized(usable.units.unifiable)
    lits = given.literals
    if len(lits) > 1:
        # given is the nucleus; satellites are usable units
        for k, (sign, atom) in enumerate(lits):
            if not _polarity_ok(sign, polarity):
                continue
            todo = [(j, False) for j in range(len(lits)) if j != k]
            for s, sats, _ in _clash(given, todo, 0, {}, frozenset((given.id,)), (), (),
                                     lookup, given, counter):
                yield (Literal(sign, T.apply(s, atom)),), "ur", _parents(given, sats)
        return
    if not lits:
        return
    gsign, gatom = lits[0]
    for nucleus in list(usable.nonunit.values()):
        nlits = nucleus.literals
        n = len(nlits)
        for i in range(n):
            sign, atom = nlits[i]
            if sign == gsign or atom[0] != gatom[0]:
                continue
            s0: T.Substitution = {}
            if not T.unify_into(atom, gatom, s0):
                continue
            for k in range(n):
                if k == i or not _polarity_ok(nlits[k][0], polarity):
                    continue
                todo = [(j, j < i) for j in range(n) if j != i and j != k]
                for s, sats, _ in _clash(nucleus, todo, 0, s0, frozenset((nucleus.id, given.id)),
                                         ((i, given.id),), (), lookup, given, counter):
                    ksign, katom = nlits[k]
                    yield (Literal(ksign, T.apply(s, katom)),), "ur", _parents(nucleus, sats)


# -- hyper-resolution --------------------------------------------------------------


def hyper_inferences(given: Clause, usable: Usable, counter=None) -> Iterator[Conclusion]:
    lookup = _memoized(usable.positive.unifiable)
    lits = given.literals
    negs = [j for j, lit in enumerate(lits) if not lit[0]]
    if negs:
        # given is the nucleus
        keep = tuple(lit for lit in lits if lit[0])
        todo = [(j, False) for j in negs]
        for s, sats, residual in _clash(given, todo, 0, {}, frozenset((given.id,)), (), (),
                                        lookup, given, counter):
            yield _instantiate(s, keep + residual), "hyper", _parents(given, sats)
        return
    for nucleus in list(usable.nonpositive.values()):
        nlits = nucleus.literals
        nnegs = [j for j, lit in enumerate(nlits) if not lit[0]]
        keep = tuple(lit for lit in nlits if lit[0])
        for i in nnegs:
            atom = nlits[i][1]
            for gi, (_, gatom) in enumerate(lits):
                if gatom[0] != atom[0]:
                    continue
                s0: T.Substitution = {}
                if not T.unify_into(atom, gatom, s0):
                    continue
                todo = [(j, j < i) for j in nnegs if j != i]
                gres = lits[:gi] + lits[gi + 1:]
                for s, sats, residual in _clash(nucleus, todo, 0, s0,
                                                frozenset((nucleus.id, given.id)),
                                                ((i, given.id),), gres, lookup, given, counter):
                    yield _instantiate(s, keep + residual), "hyper", _parents(nucleus, sats)


# -- binary resolution ---------------------------------------------------------------


def binary_inferences(given: Clause, usable: Usable, counter=None) -> Iterator[Conclusion]:
    glits = given.literals
    for gi, (sign, atom) in enumerate(glits):
        for clause, ci in list(usable.literals.unifiable(not sign, atom)):
            clits = clause.literals
            if clause is given:
                clits = rename_literals(clits, counter)
            s: T.Substitution = {}
            if not T.unify_into(atom, clits[ci][1], s):
                continue
            rest = glits[:gi] + glits[gi + 1:] + clits[:ci] + clits[ci + 1:]
            yield _instantiate(s, rest), "binary", (given.id, clause.id)


def inferences(given: Clause, usable: Usable, config: RuleConfig, counter=None
               ) -> Iterator[Conclusion]:
    if config.rule == "ur":
        return ur_inferences(given, usable, config.ur_polarity, counter)
    if config.rule == "hyper":
        return hyper_inferences(given, usable, counter)
    return binary_inferences(given, usable, counter)


# -- convenience wrappers ----------------------------------------------------------


def _finish(conclusions: Iterable[Conclusion], counter) -> List[Clause]:
    out, seen = [], set()
    for lits, rule, parents in conclusions:
        c = make_clause(lits, rule, parents, counter=counter)
        key = tuple((lit.positive, _shape(lit.atom)) for lit in c.literals)
        if key not in seen:
            seen.add(key)
            out.append(c)
    return out


def hyper_resolve(given: Clause, usable: Union[Usable, Iterable[Clause]],
                  counter=None) -> List[Clause]:
    """Distinct hyper-resolvents in which ``given`` takes part."""
    return _finish(hyper_inferences(given, _as_usable(usable, given), counter), counter)


def ur_resolve(given: Clause, usable: Union[Usable, Iterable[Clause]], polarity: str = "both",
               counter=None) -> List[Clause]:
    """Distinct UR-resolvents in which ``given`` takes part."""
    return _finish(ur_inferences(given, _as_usable(usable, given), polarity, counter), counter)


def binary_resolve(given: Clause, usable: Union[Usable, Iterable[Clause]],
                   counter=None) -> List[Clause]:
    return _finish(binary_inferences(given, _as_usable(usable, given), counter), counter)
