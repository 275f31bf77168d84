"""Discrimination-tree term index.

Stored terms are flattened in preorder; every variable becomes the same
wildcard key, so retrieval is a filter: callers still run the real
unification or matching on each candidate.
"""

from __future__ import annotations

from typing import Any, Dict, Iterator, List, Tuple

from .terms import ARITY, Term

VAR = -1
LEAF = None


def flatten(t: Term) -> List[int]:
    out: List[int] = []
    stack = [t]
    while stack:
        t = stack.pop()
        if type(t) is int:
            out.append(VAR)
        else:
            out.append(t[0])
            if len(t) > 1:
                stack.extend(reversed(t[1:]))
    return out


class DiscTree:
    def __init__(self) -> None:
        self.root: Dict[Any, Any] = {}
        self.size = 0

    def __len__(self) -> int:
        return self.size

    def insert(self, term: Term, item: Any) -> None:
        node = self.root
        for key in flatten(term):
            nxt = node.get(key)
            if nxt is None:
                nxt = node[key] = {}
            node = nxt
        leaf = node.get(LEAF)
        if leaf is None:
            leaf = node[LEAF] = []
        leaf.append(item)
        self.size += 1

    def remove(self, term: Term, item: Any) -> bool:
        node = self.root
        for key in flatten(term):
            node = node.get(key)
            if node is None:
                return False
        leaf = node.get(LEAF)
        if leaf:
            for i, x in enumerate(leaf):
                if x is item:
                    del leaf[i]
                    self.size -= 1
                    return True
        return False

    def unifiable(self, query: Term) -> List[Any]:
        """Items whose term may unify with ``query``."""
        keys, ends = flatten_with_ends(query)
        n = len(keys)
        out: List[Any] = []
        stack = [(self.root, 0)]
        pop, push = stack.pop, stack.append
        while stack:
            node, i = pop()
            if i == n:
                leaf = node.get(LEAF)
                if leaf:
                    out.extend(leaf)
                continue
            k = keys[i]
            if k == VAR:
                for n2 in _skip(node, 1):
                    push((n2, i + 1))
                continue
            child = node.get(k)
            if child is not None:
                push((child, i + 1))
            child = node.get(VAR)
            if child is not None:
                push((child, ends[i]))
        return out

    def generalizations(self, query: Term) -> List[Any]:
        """Items whose term may match onto ``query`` (stored is more general)."""
        keys, ends = flatten_with_ends(query)
        n = len(keys)
        out: List[Any] = []
        stack = [(self.root, 0)]
        pop, push = stack.pop, stack.append
        while stack:
            node, i = pop()
            if i == n:
                leaf = node.get(LEAF)
                if leaf:
                    out.extend(leaf)
                continue
            k = keys[i]
            if k != VAR:
                child = node.get(k)
                if child is not None:
                    push((child, i + 1))
            child = node.get(VAR)
            if child is not None:
                push((child, ends[i]))
        return out

    def instances(self, query: Term) -> List[Any]:
        """Items whose term may be an instance of ``query``."""
        keys, _ = flatten_with_ends(query)
        n = len(keys)
        out: List[Any] = []
        stack = [(self.root, 0)]
        pop, push = stack.pop, stack.append
        while stack:
            node, i = pop()
            if i == n:
                leaf = node.get(LEAF)
                if leaf:
                    out.extend(leaf)
                continue
            k = keys[i]
            if k == VAR:
                for n2 in _skip(node, 1):
                    push((n2, i + 1))
                continue
            child = node.get(k)
            if child is not None:
                push((child, i + 1))
        return out

    def __iter__(self) -> Iterator[Any]:
        return _all(self.root)


def flatten_with_ends(t: Term) -> Tuple[List[int], List[int]]:
    """Preorder keys plus, for each position, the index just past its subterm."""
    keys: List[int] = []
    ends: List[int] = []
    _flat(t, keys, ends)
    return keys, ends


def _flat(t, keys, ends):
    i = len(keys)
    ends.append(0)
    if type(t) is int:
        keys.append(VAR)
        ends[i] = i + 1
        return
    keys.append(t[0])
    for a in t[1:]:
        if type(a) is int:
            keys.append(VAR)
            ends.append(len(keys))
        elif len(a) == 1:
            keys.append(a[0])
            ends.append(len(keys))
        else:
            _flat(a, keys, ends)
    ends[i] = len(keys)


def _all(node):
    for key, child in node.items():
        if key is LEAF:
            yield from child
        else:
            yield from _all(child)


def _skip(node, n):
    # every node reached after skipping n complete stored subterms
    if n == 0:
        yield node
        return
    for key, child in node.items():
        if key is LEAF:
            continue
        if key == VAR or ARITY[key] == 0:
            if n == 1:
                yield child
            else:
                yield from _skip(child, n - 1)
        else:
            yield from _skip(child, n - 1 + ARITY[key])


class LiteralIndex:
    """Two discrimination trees, one per literal sign."""

    def __init__(self) -> None:
        self.trees = {True: DiscTree(), False: DiscTree()}

    def insert(self, positive: bool, atom: Term, item: Any) -> None:
        self.trees[positive].insert(atom, item)

    def remove(self, positive: bool, atom: Term, item: Any) -> bool:
        return self.trees[positive].remove(atom, item)

    def unifiable(self, positive: bool, atom: Term) -> List[Any]:
        return self.trees[positive].unifiable(atom)

    def generalizations(self, positive: bool, atom: Term) -> List[Any]:
        return self.trees[positive].generalizations(atom)

    def instances(self, positive: bool, atom: Term) -> List[Any]:
        return self.trees[positive].instances(atom)

    def __len__(self) -> int:
        return len(self.trees[True]) + len(self.trees[False])
