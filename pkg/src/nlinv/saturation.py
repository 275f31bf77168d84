"""Given-clause saturation with a set of support.

Each step picks a given clause from the set of support and moves it to
usable. It then generates every conclusion the active rule can draw with the
given clause taking part, and pushes each conclusion through the retention
pipeline.  The SOS size is recorded after every pick.
"""

from __future__ import annotations

import heapq
import itertools
import time
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, TextIO, Tuple

from . import terms as T
from .clauses import (Clause, ClauseList, Literal, canonical_literals, factor_literals,
                      is_tautology, literals_subsume, rename_literals, subsumes, weight)
from .index import LiteralIndex
from .inference import RuleConfig, Usable, inferences

TRACE_HEADER = "iteration,sos_size,given_id,given_weight"
TRACE_FLUSH_EVERY = 1000


@dataclass(frozen=True)
class Limits:
    max_given: Optional[int] = None
    max_seconds: Optional[float] = None
    max_weight: Optional[int] = None
    max_retained: Optional[int] = None

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")


@dataclass
class Stats:
    clauses_generated: int = 0
    clauses_forward_subsumed: int = 0
    subsumed_by_sos: int = 0
    sos_size_final: int = 0
    sos_size_peak: int = 0
    given_count: int = 0
    retained: int = 0
    back_subsumed: int = 0
    discarded: Dict[str, int] = field(default_factory=dict)
    wall_seconds: float = 0.0
    cpu_seconds: float = 0.0

    def discard(self, reason: str) -> None:
        self.discarded[reason] = self.discarded.get(reason, 0) + 1

    @property
    def discarded_total(self) -> int:
        return sum(self.discarded.values())

    def as_dict(self) -> dict:
        d = asdict(self)
        d["discarded"] = dict(sorted(self.discarded.items()))
        return d


def variant_key(literals: Sequence[Literal]) -> tuple:
    """Equal for clauses that differ only by a renaming of variables."""
    mapping: Dict[int, int] = {}
    counter = itertools.count()
    return tuple((lit[0], T._rename(lit[1], counter, mapping)) for lit in literals)


class TracePoint(NamedTuple):
    iteration: int
    sos_size: int
    given_id: int
    given_weight: int

    def csv_row(self) -> str:
        return f"{self.iteration},{self.sos_size},{self.given_id},{self.given_weight}"


def parse_pick_given(spec: str) -> int:
    """Return the FIFO ratio for a pick-given spec.

    ``weight`` -> 0 (never FIFO), ``fifo`` -> 1 (always), ``ratio:r`` -> r
    (every r-th pick is FIFO, the others lightest-first).
    """
    if spec == "weight":
        return 0
    if spec == "fifo":
        return 1
    if spec.startswith("ratio:"):
        r = int(spec.split(":", 1)[1])
        if r < 1:
            raise ValueError("pick-given ratio must be >= 1")
        return r
    raise ValueError(f"unknown pick-given strategy {spec!r}")


class Sos:
    """Set of support: lightest-first heap plus FIFO queue, lazily pruned."""

    def __init__(self, clauses: Iterable[Clause] = ()):
        self.role = "sos"
        self._heap: List[Tuple[int, int, Clause]] = []
        self._fifo: deque = deque()
        self._live: Dict[int, Clause] = {}
        self._seq = itertools.count()
        for c in clauses:
            self.append(c)

    def append(self, c: Clause) -> None:
        self._live[c.id] = c
        heapq.heappush(self._heap, (c.weight, next(self._seq), c))
        self._fifo.append(c)

    def remove(self, c: Clause) -> None:
        del self._live[c.id]

    def __contains__(self, c: Clause) -> bool:
        return c.id in self._live

    def __len__(self) -> int:
        return len(self._live)

    def __iter__(self):
        return iter(list(self._live.values()))

    def pop_lightest(self) -> Clause:
        heap, live = self._heap, self._live
        while True:
            c = heapq.heappop(heap)[2]
            if live.get(c.id) is c:
                del live[c.id]
                return c

    def pop_fifo(self) -> Clause:
        fifo, live = self._fifo, self._live
        while True:
            c = fifo.popleft()
            if live.get(c.id) is c:
                del live[c.id]
                return c


def select_given(sos: Sos, strategy: str = "weight", pick_number: int = 1) -> Clause:
    """Remove and return the next given clause.

    ``pick_number`` counts picks from 1; under ``ratio:r`` every r-th pick
    takes the oldest clause instead of the lightest.
    """
    if not len(sos):
        raise IndexError("select_given from an empty set of support")
    r = parse_pick_given(strategy)
    if r and pick_number % r == 0:
        return sos.pop_fifo()
    return sos.pop_lightest()


@dataclass
class ProofDag:
    """Ancestor-closed refutation, topologically ordered (parents first)."""

    nodes: List[Clause]

    @property
    def root(self) -> Clause:
        return self.nodes[-1]

    def by_id(self) -> Dict[int, Clause]:
        return {c.id: c for c in self.nodes}

    def inputs(self) -> List[Clause]:
        return [c for c in self.nodes if c.rule == "input"]

    def __len__(self) -> int:
        return len(self.nodes)

    def format(self) -> str:
        lines = []
        for c in self.nodes:
            origin = c.rule if not c.parents else f"{c.rule} {','.join(map(str, c.parents))}"
            label = f"  % {c.label}" if c.label else ""
            lines.append(f"{c.id} [{origin}] {c}.{label}")
        return "\n".join(lines) + "\n"


def extract_proof(empty: Clause, clauses: Dict[int, Clause]) -> ProofDag:
    seen: Dict[int, Clause] = {}
    stack = [empty]
    while stack:
        c = stack.pop()
        if c.id in seen:
            continue
        seen[c.id] = c
        stack.extend(clauses[p] for p in c.parents)
    return ProofDag([seen[i] for i in sorted(seen)])


@dataclass
class ProverConfig:
    rule: RuleConfig = field(default_factory=RuleConfig)
    limits: Limits = field(default_factory=Limits)
    pick_given: str = "weight"
    back_subsumption: bool = False
    factoring: bool = True
    # rewrites each atom of a new clause (interpreted functions)
    simplify: Optional[Callable[[T.Term], T.Term]] = None
    # retention filter; a false result discards the clause with ``keep_reason``
    keep: Optional[Callable[[Sequence[Literal]], bool]] = None
    keep_reason: str = "filtered"

    def __post_init__(self):
        parse_pick_given(self.pick_given)


@dataclass
class Outcome:
    status: str                      # refutation | sos_exhausted | limit
    limit: Optional[str]
    proof: Optional[ProofDag]
    stats: Stats
    trace: List[TracePoint]

    @property
    def refuted(self) -> bool:
        return self.status == "refutation"


class _Refuted(Exception):
    def __init__(self, empty: Clause):
        self.empty = empty


class Prover:
    """Owns one saturation run: the clause lists, indexes, stats and trace."""

    def __init__(self, usable: Iterable[Clause] = (), sos: Iterable[Clause] = (),
                 config: Optional[ProverConfig] = None, passive: Iterable[Clause] = (),
                 trace_file: Optional[TextIO] = None):
        self.config = config or ProverConfig()
        self.stats = Stats()
        self.trace: List[TracePoint] = []
        self.trace_file = trace_file
        self.vars = itertools.count()
        self.ids = itertools.count(1)
        self.clauses: Dict[int, Clause] = {}
        self.where: Dict[int, str] = {}
        self.usable = Usable()
        self.sos = Sos()
        self.passive = ClauseList("passive")
        self._subsumers = LiteralIndex()   # retained clauses, keyed by first literal
        self._units = LiteralIndex()       # retained unit clauses
        self._variants: Dict[int, Clause] = {}     # hash of variant key -> retained clause
        self._pending_usable_removals: List[Clause] = []
        self._empty: Optional[Clause] = None

        for c in usable:
            self._retain(self._restamp(c), "usable")
        for c in passive:
            self._retain(self._restamp(c), "passive")
        initial_sos = [self._restamp(c) for c in sos]
        for c in initial_sos:
            self._retain(c, "sos")
        self.initial_sos_ids = frozenset(c.id for c in initial_sos)
        self.input_ids = frozenset(self.clauses)
        if self.config.factoring:
            try:
                for c in initial_sos:
                    self._process_factors(c)
            except _Refuted as r:
                self._empty = r.empty

    # -- bookkeeping ---------------------------------------------------------------

    def _restamp(self, c: Clause) -> Clause:
        lits = rename_literals(c.literals, self.vars)
        return Clause(next(self.ids), lits, c.rule, c.parents, weight(lits), c.label)

    def _retain(self, c: Clause, where: str, key: Optional[tuple] = None) -> None:
        self.clauses[c.id] = c
        self._variants.setdefault(hash(variant_key(c.literals) if key is None else key), c)
        self.where[c.id] = where
        if where == "usable":
            self.usable.append(c)
        elif where == "sos":
            self.sos.append(c)
            if len(self.sos) > self.stats.sos_size_peak:
                self.stats.sos_size_peak = len(self.sos)
        else:
            self.passive.append(c)
        if c.literals:
            lit = c.literals[0]
            self._subsumers.insert(lit.positive, lit.atom, c)
            if len(c.literals) == 1:
                self._units.insert(lit.positive, lit.atom, c)

    def _forget(self, c: Clause) -> None:
        where = self.where.pop(c.id)
        if where == "sos":
            self.sos.remove(c)
        elif where == "usable":
            self._pending_usable_removals.append(c)
        h = hash(variant_key(c.literals))
        if self._variants.get(h) is c:
            del self._variants[h]
        lit = c.literals[0]
        self._subsumers.remove(lit.positive, lit.atom, c)
        if len(c.literals) == 1:
            self._units.remove(lit.positive, lit.atom, c)

    def _unit_conflict(self, c: Clause) -> Optional[Clause]:
        sign, atom = c.literals[0]
        for u in self._units.unifiable(not sign, atom):
            if T.unify_into(atom, u.literals[0].atom, {}):
                empty = Clause(next(self.ids), (), "unit_conflict", (c.id, u.id), 0)
                self.clauses[empty.id] = empty
                self.stats.clauses_generated += 1
                self.stats.retained += 1
                return empty
        return None

    # -- the retention pipeline ---------------------------------------------------------

    def process_new_clause(self, literals: Sequence[Literal], rule: str,
                           parents: Tuple[int, ...]) -> Tuple[str, object]:
        """Run one conclusion through the retention tests.

        Returns ``("retained", clause)``, ``("discarded", reason)`` or
        ``("refutation", empty_clause)``.
        """
        try:
            return self._process(literals, rule, parents)
        except _Refuted as r:
            return "refutation", r.empty

    def _process(self, literals, rule, parents):
        stats = self.stats
        cfg = self.config
        stats.clauses_generated += 1

        simplify = cfg.simplify
        if simplify is not None:
            literals = [Literal(lit[0], simplify(lit[1])) for lit in literals]
        if len(literals) > 1:
            literals = canonical_literals(literals)
            if is_tautology(literals):
                stats.discard("tautology")
                return "discarded", "tautology"
        max_weight = cfg.limits.max_weight
        w = None
        if max_weight is not None:
            w = weight(literals)
            if w > max_weight:
                stats.discard("weight")
                return "discarded", "weight"
        if cfg.keep is not None and not cfg.keep(literals):
            stats.discard(cfg.keep_reason)
            return "discarded", cfg.keep_reason

        n = len(literals)
        key = variant_key(literals)
        d = self._variants.get(hash(key))
        if d is not None and variant_key(d.literals) != key:
            d = None
        if d is None:
            for sign, atom in literals:
                for cand in self._subsumers.generalizations(sign, atom):
                    if len(cand.literals) <= n and literals_subsume(cand.literals, literals):
                        d = cand
                        break
                if d is not None:
                    break
        if d is not None:
            stats.clauses_forward_subsumed += 1
            if self.where.get(d.id) == "sos":
                stats.subsumed_by_sos += 1
            stats.discard("forward_subsumed")
            return "discarded", "forward_subsumed"

        lits = rename_literals(literals, self.vars)
        c = Clause(next(self.ids), lits, rule, tuple(parents), weight(lits) if w is None else w)
        stats.retained += 1
        if not lits:
            self.clauses[c.id] = c
            raise _Refuted(c)
        if n == 1:
            empty = self._unit_conflict(c)
            if empty is not None:
                self._retain(c, "sos", key)
                raise _Refuted(empty)
        if cfg.back_subsumption:
            self._back_subsume(c)
        self._retain(c, "sos", key)
        if cfg.factoring and n > 1:
            self._process_factors(c)
        return "retained", c

    def _process_factors(self, c: Clause) -> None:
        for lits in factor_literals(c.literals):
            self._process(lits, "factor", (c.id,))

    def _back_subsume(self, c: Clause) -> None:
        victims = [d for d in itertools.chain(self.usable, self.sos)
                   if len(d.literals) >= len(c.literals) and subsumes(c, d)]
        for d in victims:
            self._forget(d)
            self.stats.back_subsumed += 1

    # -- the main loop -----------------------------------------------------------------------

    def _record(self, given: Clause) -> None:
        point = TracePoint(self.stats.given_count, len(self.sos), given.id, given.weight)
        self.trace.append(point)
        if self.trace_file is not None:
            self.trace_file.write(point.csv_row() + "\n")
            if point.iteration % TRACE_FLUSH_EVERY == 0:
                self.trace_file.flush()

    def _limit_hit(self, started: float) -> Optional[str]:
        lim = self.config.limits
        if lim.max_given is not None and self.stats.given_count >= lim.max_given:
            return "max_given"
        if lim.max_retained is not None and self.stats.retained >= lim.max_retained:
            return "max_retained"
        if lim.max_seconds is not None and time.perf_counter() - started >= lim.max_seconds:
            return "max_seconds"
        return None

    def run(self) -> Outcome:
        wall0, cpu0 = time.perf_counter(), time.process_time()
        if self.trace_file is not None:
            self.trace_file.write(TRACE_HEADER + "\n")
        status, limit = "sos_exhausted", None
        empty = self._empty
        try:
            if empty is not None:
                raise _Refuted(empty)
            while len(self.sos):
                limit = self._limit_hit(wall0)
                if limit is not None:
                    status = "limit"
                    break
                self._step(wall0)
        except _Refuted as r:
            status, limit, empty = "refutation", None, r.empty
        except _TimeUp:
            status, limit = "limit", "max_seconds"
        stats = self.stats
        stats.sos_size_final = len(self.sos)
        stats.wall_seconds = time.perf_counter() - wall0
        stats.cpu_seconds = time.process_time() - cpu0
        if self.trace_file is not None:
            self.trace_file.flush()
        proof = extract_proof(empty, self.clauses) if status == "refutation" else None
        return Outcome(status, limit, proof, stats, self.trace)

    def _step(self, wall0: float) -> None:
        stats = self.stats
        stats.given_count += 1
        given = select_given(self.sos, self.config.pick_given, stats.given_count)
        self.where[given.id] = "usable"
        self.usable.append(given)
        self._record(given)
        if len(given.literals) == 1:
            empty = self._unit_conflict(given)
            if empty is not None:
                raise _Refuted(empty)
        max_seconds = self.config.limits.max_seconds
        process = self._process
        for k, (lits, rule, parents) in enumerate(
                inferences(given, self.usable, self.config.rule, self.vars)):
            process(lits, rule, parents)
            if max_seconds is not None and k % 1024 == 1023 \
                    and time.perf_counter() - wall0 >= max_seconds:
                raise _TimeUp()
        if self._pending_usable_removals:
            for d in self._pending_usable_removals:
                self.usable.remove(d)
            self._pending_usable_removals.clear()


class _TimeUp(Exception):
    pass


def saturate(usable: Iterable[Clause], sos: Iterable[Clause],
             config: Optional[ProverConfig] = None, passive: Iterable[Clause] = (),
             trace_file: Optional[TextIO] = None) -> Outcome:
    """Run the given-clause loop to a refutation, an empty SOS or a limit."""
    return Prover(usable, sos, config, passive, trace_file).run()
