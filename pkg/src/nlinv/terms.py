"""First-order terms, substitutions and unification.

Terms are plain Python values so that the hot loops stay cheap:

* a variable is an ``int`` (its id),
* a compound is a ``tuple`` whose first element is an interned symbol id
  followed by the argument terms.  Constants are 1-tuples.

Symbols are interned by ``(name, arity)``, so ``P/1`` and ``P/2`` are
different symbols.  Use :func:`check_arities` when a single problem must
use each name with one arity only.

Substitutions are dicts mapping variable ids to terms.  Internally the
prover works with *triangular* substitutions (a binding may mention other
bound variables); :func:`mgu` and :func:`simultaneous_mgu` return
normalized, idempotent ones.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

Term = Union[int, tuple]
Substitution = Dict[int, Term]

_names: List[str] = []
_arities: List[int] = []
_ids: Dict[Tuple[str, int], int] = {}

#: arity of every interned symbol, indexed by symbol id
ARITY = _arities

# Variable ids handed out when the caller does not supply a counter.
default_vars = itertools.count()


def intern(name: str, arity: int) -> int:
    key = (name, arity)
    sym = _ids.get(key)
    if sym is None:
        sym = len(_names)
        _ids[key] = sym
        _names.append(name)
        _arities.append(arity)
    return sym


def symbol_name(sym: int) -> str:
    return _names[sym]


def fn(name: str, *args: Term) -> tuple:
    """Build the compound ``name(args...)``."""
    return (intern(name, len(args)),) + args


def const(name: str) -> tuple:
    return (intern(name, 0),)


def var(counter: Optional[Iterator[int]] = None) -> int:
    return next(default_vars if counter is None else counter)


def is_var(t: Term) -> bool:
    return type(t) is int


def functor(t: tuple) -> Tuple[str, int]:
    return _names[t[0]], len(t) - 1


def check_arities(terms: Iterable[Term]) -> Dict[str, int]:
    """Raise ``ValueError`` if a symbol name is used with two arities."""
    seen: Dict[str, int] = {}
    for t in terms:
        for sub in subterms(t):
            if type(sub) is int:
                continue
            name, arity = _names[sub[0]], len(sub) - 1
            prev = seen.setdefault(name, arity)
            if prev != arity:
                raise ValueError(f"symbol {name!r} used with arity {prev} and {arity}")
    return seen


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        t = stack.pop()
        yield t
        if type(t) is not int:
            stack.extend(reversed(t[1:]))


def variables(t: Term) -> set:
    return {s for s in subterms(t) if type(s) is int}


def size(t: Term) -> int:
    """Number of symbol occurrences (variables included)."""
    if type(t) is int or len(t) == 1:
        return 1
    n = 1
    for a in t[1:]:
        n += 1 if (type(a) is int or len(a) == 1) else size(a)
    return n


def depth(t: Term) -> int:
    if type(t) is int or len(t) == 1:
        return 0
    return 1 + max(depth(a) for a in t[1:])


def is_ground(t: Term) -> bool:
    if type(t) is int:
        return False
    return all(is_ground(a) for a in t[1:])


# -- substitutions ---------------------------------------------------------


def walk(t: Term, s: Substitution) -> Term:
    while type(t) is int:
        b = s.get(t)
        if b is None:
            return t
        t = b
    return t


def apply(s: Substitution, t: Term) -> Term:
    """Instantiate ``t`` under ``s``, following binding chains."""
    if type(t) is int:
        b = s.get(t)
        if b is None:
            return t
        return apply(s, b)
    if len(t) == 1:
        return t
    return (t[0], *[a if (type(a) is not int and len(a) == 1) else apply(s, a) for a in t[1:]])


def normalize(s: Substitution) -> Substitution:
    """Resolve a triangular substitution into an idempotent one."""
    out = {}
    for v in s:
        t = apply(s, v)
        if t != v:
            out[v] = t
    return out


def compose(s1: Substitution, s2: Substitution) -> Substitution:
    """The substitution equivalent to applying ``s1`` and then ``s2``."""
    out = {v: apply(s2, t) for v, t in s1.items()}
    for v, t in s2.items():
        out.setdefault(v, t)
    return {v: t for v, t in out.items() if t != v}


def occurs(v: int, t: Term, s: Substitution) -> bool:
    stack = [t]
    while stack:
        t = stack.pop()
        while type(t) is int:
            if t == v:
                return True
            b = s.get(t)
            if b is None:
                break
            t = b
        if type(t) is not int and len(t) > 1:
            stack.extend(t[1:])
    return False


def unify_into(a: Term, b: Term, s: Substitution) -> bool:
    """Extend the triangular substitution ``s`` in place to unify ``a`` and ``b``.

    On failure ``s`` may hold partial bindings; callers pass a copy.
    """
    stack = [(a, b)]
    pop = stack.pop
    while stack:
        a, b = pop()
        while type(a) is int:
            x = s.get(a)
            if x is None:
                break
            a = x
        while type(b) is int:
            x = s.get(b)
            if x is None:
                break
            b = x
        if a == b:
            continue
        if type(a) is int:
            if type(b) is not int and occurs(a, b, s):
                return False
            s[a] = b
        elif type(b) is int:
            if occurs(b, a, s):
                return False
            s[b] = a
        else:
            if a[0] != b[0]:
                return False
            stack.extend(zip(a[1:], b[1:]))
    return True


def mgu(a: Term, b: Term) -> Optional[Substitution]:
    """Most general unifier of ``a`` and ``b``, or ``None``."""
    s: Substitution = {}
    if not unify_into(a, b, s):
        return None
    return normalize(s)


def simultaneous_mgu(pairs: Sequence[Tuple[Term, Term]]) -> Optional[Substitution]:
    """One substitution unifying every pair at once, or ``None``."""
    s: Substitution = {}
    for a, b in pairs:
        if not unify_into(a, b, s):
            return None
    return normalize(s)


def match_into(pattern: Term, target: Term, s: Substitution) -> bool:
    """One-way matching: bind only variables of ``pattern``.

    Target variables are treated as constants, so pattern and target may
    share variable ids.
    """
    stack = [(pattern, target)]
    pop = stack.pop
    while stack:
        p, t = pop()
        if type(p) is int:
            b = s.get(p)
            if b is None:
                s[p] = t
            elif b != t:
                return False
        elif type(t) is int or p[0] != t[0]:
            return False
        elif len(p) > 1:
            stack.extend(zip(p[1:], t[1:]))
    return True


def match(pattern: Term, target: Term) -> Optional[Substitution]:
    s: Substitution = {}
    return s if match_into(pattern, target, s) else None


def rename_apart(t: Term, counter: Optional[Iterator[int]] = None,
                 mapping: Optional[Dict[int, int]] = None) -> Term:
    """Copy ``t`` with every variable replaced by a fresh one.

    Pass the same ``mapping`` to rename several terms consistently.
    """
    if counter is None:
        counter = default_vars
    if mapping is None:
        mapping = {}
    return _rename(t, counter, mapping)


def _rename(t, counter, mapping):
    if type(t) is int:
        v = mapping.get(t)
        if v is None:
            v = mapping[t] = next(counter)
        return v
    if len(t) == 1:
        return t
    return (t[0], *[_rename(a, counter, mapping) for a in t[1:]])


# -- printing ----------------------------------------------------------------

_VAR_NAMES = ("x", "y", "z", "u", "w", "v")


def var_names(vs: Iterable[int]) -> Dict[int, str]:
    """Readable names for variables in order of first appearance."""
    names = {}
    for v in vs:
        if v not in names:
            i = len(names)
            names[v] = _VAR_NAMES[i] if i < len(_VAR_NAMES) else f"v{i}"
    return names


def format_term(t: Term, names: Optional[Dict[int, str]] = None) -> str:
    if type(t) is int:
        if names and t in names:
            return names[t]
        return f"_{t}"
    name = _names[t[0]]
    if len(t) == 1:
        return name
    return name + "(" + ",".join(format_term(a, names) for a in t[1:]) + ")"


def ordered_vars(terms: Iterable[Term]) -> List[int]:
    out: List[int] = []
    seen = set()
    for t in terms:
        for s in subterms(t):
            if type(s) is int and s not in seen:
                seen.add(s)
                out.append(s)
    return out
