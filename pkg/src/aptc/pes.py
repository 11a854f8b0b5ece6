"""Prime event structures with silent events.

A PES here is a finite set of events with strict causality (transitively
closed), irreflexive symmetric conflict (hereditarily closed), a labelling,
and a set of *completions*: the configurations in which the compiled term
has successfully terminated.

``direct_compile`` gives the denotational semantics of the sequential/
alternative/parallel fragment; ``compile_basic`` compiles basic terms (the
output of the rewrite engine) through the same construction, so event
identities are positional paths into the term.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import ResourceBound
from .rewrite import BT, bt_to_term
from .terms import Alt, Atom, EventLabel, Par, Seq, Term

__all__ = [
    "PES", "Pomset", "direct_compile", "compile_basic", "configurations",
    "pomset_transitions", "step_transitions", "weak_pomset_transitions",
    "is_terminating", "export_pes",
]

Config = frozenset  # of event ids (str)

CONFIG_BOUND = 2 ** 16


# ---------------------------------------------------------------------------
# Structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PES:
    labels: Mapping[str, EventLabel]
    order: frozenset[tuple[str, str]]  # strict causality e < e'
    conflict: frozenset[tuple[str, str]]  # canonical (sorted) pairs
    completions: frozenset[Config]
    _causes: Mapping[str, frozenset] = field(default=None, repr=False,
                                             compare=False)

    def causes(self, e: str) -> frozenset:
        return self._causes[e]

    def conflicts_with(self, a: str, b: str) -> bool:
        return (min(a, b), max(a, b)) in self.conflict


def make_pes(
    labels: Mapping[str, EventLabel],
    order: Iterable[tuple[str, str]],
    conflict: Iterable[tuple[str, str]],
    completions: Iterable[Config],
) -> PES:
    """Close causality transitively and conflict hereditarily."""
    ids = set(labels)
    lt: set[tuple[str, str]] = set(order)
    changed = True
    while changed:  # transitive closure
        changed = False
        for (a, b), (c, d) in itertools.product(list(lt), list(lt)):
            if b == c and (a, d) not in lt:
                lt.add((a, d))
                changed = True
    cf: set[tuple[str, str]] = {
        (min(a, b), max(a, b)) for a, b in conflict if a != b
    }
    changed = True
    while changed:  # hereditary closure: a#b and b<c implies a#c
        changed = False
        for a, b in list(cf):
            for x, y in ((a, b), (b, a)):
                for c, d in lt:
                    if c == y:
                        p = (min(x, d), max(x, d))
                        if x != d and p not in cf:
                            cf.add(p)
                            changed = True
    causes = {
        e: frozenset(a for a, b in lt if b == e) for e in ids
    }
    return PES(dict(labels), frozenset(lt), frozenset(cf),
               frozenset(frozenset(c) for c in completions), causes)


# ---------------------------------------------------------------------------
# Compilation
# ---------------------------------------------------------------------------


def direct_compile(t: Term, prefix: str = "") -> PES:
    """Denotational PES of a term over atoms, ``.``, ``+`` and ``||``.

    Sequencing duplicates the right-hand structure once per completion of
    the left (each copy caused by that completion), which keeps the result
    a prime event structure.
    """
    if isinstance(t, Atom):
        if t.label.kind == "deadlock":
            return make_pes({}, (), (), ())
        e = prefix + "e"
        return make_pes({e: t.label}, (), (), (frozenset({e}),))
    if isinstance(t, Alt):
        l = direct_compile(t.left, prefix + "0.")
        r = direct_compile(t.right, prefix + "1.")
        cross = [(a, b) for a in l.labels for b in r.labels]
        return make_pes(
            {**l.labels, **r.labels}, l.order | r.order,
            set(l.conflict) | set(r.conflict) | set(cross),
            l.completions | r.completions,
        )
    if isinstance(t, Par):
        l = direct_compile(t.left, prefix + "0.")
        r = direct_compile(t.right, prefix + "1.")
        comps = {
            c1 | c2 for c1 in l.completions for c2 in r.completions
        }
        return make_pes(
            {**l.labels, **r.labels}, l.order | r.order,
            set(l.conflict) | set(r.conflict), comps,
        )
    if isinstance(t, Seq):
        l = direct_compile(t.left, prefix + "L.")
        labels = dict(l.labels)
        order = set(l.order)
        conflict = set(l.conflict)
        comps: set[Config] = set()
        for i, done in enumerate(sorted(l.completions, key=sorted)):
            copy = direct_compile(t.right, f"{prefix}R{i}.")
            labels.update(copy.labels)
            order |= copy.order
            order |= {(k, e) for k in done for e in copy.labels}
            conflict |= copy.conflict
            comps |= {done | c for c in copy.completions}
        return make_pes(labels, order, conflict, comps)
    raise ValueError(
        f"direct_compile covers atoms, '.', '+', '||'; normalize "
        f"{type(t).__name__} terms first"
    )


def compile_basic(b) -> PES:
    """Compile a basic term (rewrite-engine output or a Term in basic form)
    to its prime event structure."""
    from .rewrite import is_basic

    if isinstance(b, BT):
        b = bt_to_term(b)
    if not is_basic(b):
        raise ValueError("compile_basic requires a basic term")
    return direct_compile(b)


# ---------------------------------------------------------------------------
# Configurations and transitions
# ---------------------------------------------------------------------------


def _compatible(p: PES, c: Config, e: str) -> bool:
    return all(not p.conflicts_with(e, x) for x in c)


def configurations(p: PES, bound: int = CONFIG_BOUND) -> frozenset[Config]:
    """All finite configurations (downward-closed conflict-free sets)."""
    seen: set[Config] = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        c = frontier.pop()
        for e in p.labels:
            if e in c or not p.causes(e) <= c or not _compatible(p, c, e):
                continue
            c2 = c | {e}
            if c2 not in seen:
                seen.add(c2)
                if len(seen) > bound:
                    raise ResourceBound(
                        f"configuration bound of {bound} exceeded"
                    )
                frontier.append(c2)
    return frozenset(seen)


def is_terminating(p: PES, c: Config) -> bool:
    return c in p.completions


@dataclass(frozen=True)
class Pomset:
    """A finite labelled strict partial order, compared up to isomorphism."""

    events: tuple[str, ...]
    labels: tuple[tuple[str, EventLabel], ...]
    order: frozenset[tuple[str, str]]

    @staticmethod
    def of(p: PES, xs: frozenset) -> "Pomset":
        evs = tuple(sorted(xs))
        return Pomset(
            evs,
            tuple((e, p.labels[e]) for e in evs),
            frozenset((a, b) for a, b in p.order if a in xs and b in xs),
        )

    def label_multiset(self) -> tuple:
        return tuple(sorted(l.key() for _, l in self.labels))

    def iso(self, other: "Pomset") -> bool:
        """Label- and order-preserving bijection exists."""
        if len(self.events) != len(other.events):
            return False
        if self.label_multiset() != other.label_multiset():
            return False
        la, lb = dict(self.labels), dict(other.labels)

        def extend(m: dict) -> bool:
            if len(m) == len(self.events):
                return True
            a = next(e for e in self.events if e not in m)
            for b in other.events:
                if b in m.values() or la[a] != lb[b]:
                    continue
                ok = all(
                    ((a, x) in self.order) == ((b, y) in other.order)
                    and ((x, a) in self.order) == ((y, b) in other.order)
                    for x, y in m.items()
                )
                if ok and extend({**m, a: b}):
                    return True
            return False

        return extend({})


def _extension_candidates(p: PES, c: Config) -> list[str]:
    cand = {e for e in p.labels if e not in c and _compatible(p, c, e)}
    changed = True
    while changed:  # keep only events whose missing causes are candidates
        changed = False
        for e in list(cand):
            if not p.causes(e) <= (c | cand):
                cand.discard(e)
                changed = True
    return sorted(cand)


def _extensions(p: PES, c: Config) -> list[frozenset]:
    """All nonempty X with c ∪ X a configuration."""
    cand = _extension_candidates(p, c)
    if len(cand) > 20:
        raise ResourceBound(
            f"pomset extension width {len(cand)} exceeds the cap of 20"
        )
    out = []
    for r in range(1, len(cand) + 1):
        for xs in itertools.combinations(cand, r):
            x = frozenset(xs)
            if any(p.conflicts_with(a, b) for a, b in
                   itertools.combinations(xs, 2)):
                continue
            if all((p.causes(e) - c) <= x for e in x):
                out.append(x)
    return out


def pomset_transitions(p: PES, c: Config):
    """All (Pomset, target configuration) transitions from c."""
    return {(Pomset.of(p, x), frozenset(c | x)) for x in _extensions(p, c)}


def step_transitions(p: PES, c: Config):
    """Pomset transitions whose events are pairwise concurrent, projected to
    label multisets."""
    out = set()
    for x in _extensions(p, c):
        if any((a, b) in p.order or (b, a) in p.order
               for a, b in itertools.combinations(sorted(x), 2)):
            continue
        labels = tuple(sorted((p.labels[e] for e in x),
                              key=lambda l: l.key()))
        out.add((labels, frozenset(c | x)))
    return out


def weak_pomset_transitions(p: PES, c: Config):
    """Pomset transitions projected to their visible part (empty visible
    parts, i.e. pure silent moves, are omitted)."""
    out = set()
    for x in _extensions(p, c):
        vis = frozenset(e for e in x if p.labels[e].is_visible)
        if vis:
            out.add((Pomset.of(p, vis), frozenset(c | x)))
    return out


# ---------------------------------------------------------------------------
# Text export
# ---------------------------------------------------------------------------


def export_pes(p: PES) -> str:
    """Line-oriented export: events, immediate causality, direct conflict."""
    lines = [f"event {e} {p.labels[e]}" for e in sorted(p.labels)]
    lines += [f"le {a} {b}" for a, b in sorted(p.order)]
    lines += [f"conf {a} {b}" for a, b in sorted(p.conflict)]
    return "\n".join(lines) + ("\n" if lines else "")
