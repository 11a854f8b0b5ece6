"""Finite step-labelled transition systems by SOS exploration.

``sos_steps`` gives the outgoing step transitions of a term (recursive
specifications are unfolded on demand), where a step may fire any nonempty
subset of a head of simultaneously enabled, pairwise-concurrent events; the
events left behind become a parallel residue.  ``explore`` is the
breadth-first closure of ``sos_steps`` with eq_ac canonicalization of
states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import ResourceBound, UnguardedRecursion
from .rewrite import _Engine, mk_step
from .terms import (
    Abstract, Alt, Atom, Comm, ConflictElim, Encap, EventLabel, FullPar,
    Par, Project, RecCall, Rename, RecSpec, Seq, Signature, Term, Unless,
    canonical_print, par_of,
)

__all__ = ["StepLTS", "GuardReport", "sos_steps", "explore",
           "check_guarded_linear", "export_aldebaran"]

_MAX_UNFOLD = 100


@dataclass(frozen=True)
class StepLTS:
    """States are canonical term strings; transition targets are state
    indices, with -1 standing for successful termination."""

    states: tuple[str, ...]
    transitions: frozenset[tuple[int, tuple[str, ...], int]]
    initial: int = 0

    @property
    def terminating(self) -> frozenset[int]:
        return frozenset(s for s, _, d in self.transitions if d < 0)


# ---------------------------------------------------------------------------
# Head normal form
# ---------------------------------------------------------------------------

Head = frozenset  # of (step: tuple[EventLabel, ...], cont: Term | None)


class _Explorer:
    def __init__(self, sig: Signature,
                 specs: Mapping[str, RecSpec] | None = None):
        self.sig = sig
        self.specs = dict(specs or {})
        self.eng = _Engine(sig, budget=10_000_000, collect=False,
                           reverse=False)

    def _merge_cont(self, c1: Optional[Term], c2: Optional[Term],
                    strict: bool) -> Optional[Term]:
        if c1 is None and c2 is None:
            return None
        if c1 is None:
            return c2
        if c2 is None:
            return c1
        return FullPar(c1, c2, strict)

    @staticmethod
    def _single_event(h: Head) -> bool:
        if len(h) != 1:
            return False
        (step, cont), = h
        return cont is None and len(step) == 1 and step[0].is_visible

    def hnf(self, t: Term, depth: int = 0) -> Head:
        """One layer of behaviour: enabled steps with term residues.
        A summand headed by shadows only can also skip them silently (a
        shadow terminates without an action when nothing absorbs it)."""
        base = self._hnf(t, depth)
        out = set(base)
        frontier = list(base)
        while frontier:
            step, cont = frontier.pop()
            if cont is not None and all(l.kind == "shadow" for l in step):
                for s2 in self._hnf(cont, depth):
                    if s2 not in out:
                        out.add(s2)
                        frontier.append(s2)
        return frozenset(out)

    def _hnf(self, t: Term, depth: int = 0) -> Head:
        if depth > _MAX_UNFOLD:
            raise UnguardedRecursion(
                "no guarded head within the unfolding bound; the "
                "specification is unguarded"
            )
        if isinstance(t, Atom):
            if t.label.kind == "deadlock":
                return frozenset()
            return frozenset({((t.label,), None)})
        if isinstance(t, Alt):
            return self.hnf(t.left, depth) | self.hnf(t.right, depth)
        if isinstance(t, Seq):
            out = set()
            for step, cont in self.hnf(t.left, depth):
                out.add((step, t.right if cont is None else Seq(cont, t.right)))
            return frozenset(out)
        if isinstance(t, Par):
            out = set()
            for s1, c1 in self.hnf(t.left, depth):
                for s2, c2 in self.hnf(t.right, depth):
                    res = self.eng._absorb_shadows(s1, s2)
                    if res is None:
                        continue
                    r1, r2 = res
                    if not self.eng._conflict_free(r1, r2):
                        continue
                    out.add((mk_step(r1 + r2),
                             self._merge_cont(c1, c2, False)))
            return frozenset(out)
        if isinstance(t, Comm):
            out = set()
            for s1, c1 in self.hnf(t.left, depth):
                for s2, c2 in self.hnf(t.right, depth):
                    if len(s1) != 1 or len(s2) != 1:
                        continue
                    c = self.sig.gamma_get(s1[0], s2[0])
                    if c is None:
                        continue
                    out.add(((c,), self._merge_cont(c1, c2, False)))
            return frozenset(out)
        if isinstance(t, FullPar):
            h1 = self.hnf(t.left, depth)
            h2 = self.hnf(t.right, depth)
            if not t.strict and self._single_event(h1) \
                    and self._single_event(h2):
                out = set()
                (s1, _), = h1
                (s2, _), = h2
                out.add((s1, t.right))  # sequentialize either way
                out.add((s2, t.left))
                res = self.eng._absorb_shadows(s1, s2)
                if res is not None and self.eng._conflict_free(*res):
                    out.add((mk_step(res[0] + res[1]), None))
                c = self.sig.gamma_get(s1[0], s2[0])
                if c is not None:
                    out.add(((c,), None))
                return frozenset(out)
            out = set()
            for s1, c1 in h1:
                for s2, c2 in h2:
                    step = self.eng._lockstep_step(s1, s2)
                    if step is None:
                        continue
                    out.add((step, self._merge_cont(c1, c2, True)))
            return frozenset(out)
        if isinstance(t, Encap):
            out = set()
            for step, cont in self.hnf(t.body, depth):
                if any(l in t.labels for l in step):
                    continue
                out.add((step,
                         None if cont is None else Encap(t.labels, cont)))
            return frozenset(out)
        if isinstance(t, Abstract):
            out = set()
            for step, cont in self.hnf(t.body, depth):
                from .terms import TAU
                step2 = mk_step(TAU if l in t.labels else l for l in step)
                out.add((step2,
                         None if cont is None else Abstract(t.labels, cont)))
            return frozenset(out)
        if isinstance(t, Project):
            if t.depth <= 0:
                return frozenset()
            out = set()
            for step, cont in self.hnf(t.body, depth):
                out.add((step,
                         None if cont is None else Project(t.depth - 1, cont)))
            return frozenset(out)
        if isinstance(t, Rename):
            out = set()
            for step, cont in self.hnf(t.body, depth):
                step2 = mk_step(self.sig.rename_label(t.fname, l)
                                for l in step)
                out.add((step2,
                         None if cont is None else Rename(t.fname, cont)))
            return frozenset(out)
        if isinstance(t, (ConflictElim, Unless)):
            return self.hnf(self.eng.theta_term(t), depth)
        if isinstance(t, RecCall):
            spec = self.specs.get(t.spec)
            if spec is None:
                raise ValueError(f"unknown recursive specification {t.spec!r}")
            if t.var not in spec.equations:
                raise ValueError(f"unknown variable {t.var!r} in {t.spec!r}")
            return self.hnf(spec.equations[t.var], depth + 1)
        raise TypeError(f"unknown term node {t!r}")


def _subsets(step: tuple) -> list[tuple[tuple, tuple]]:
    """All (fired, left-behind) splits of a step with fired nonempty."""
    n = len(step)
    out = []
    for mask in range(1, 2 ** n):
        fired = tuple(step[i] for i in range(n) if mask >> i & 1)
        rest = tuple(step[i] for i in range(n) if not mask >> i & 1)
        out.append((fired, rest))
    return out


def sos_steps(t: Term, sig: Signature,
              specs: Mapping[str, RecSpec] | None = None):
    """Outgoing transitions of t: a set of (step, residue) pairs, where the
    step is a sorted tuple of labels (a nonempty subset of a head of
    simultaneously enabled pairwise-concurrent events) and the residue is a
    Term or None for successful termination."""
    ex = _Explorer(sig, specs)
    out = set()
    for step, cont in ex.hnf(t):
        for fired, rest in _subsets(step):
            if not rest:
                tgt = cont
            else:
                rest_term = par_of([Atom(l) for l in rest])
                tgt = rest_term if cont is None else Seq(rest_term, cont)
            out.add((mk_step(fired), tgt))
    return out


def explore(t: Term, sig: Signature,
            specs: Mapping[str, RecSpec] | None = None,
            max_states: int = 10_000) -> StepLTS:
    """Breadth-first SOS closure with eq_ac-canonical states."""
    ex = _Explorer(sig, specs)
    key0 = canonical_print(t)
    states = {key0: 0}
    terms = [t]
    transitions: set[tuple[int, tuple[str, ...], int]] = set()
    i = 0
    while i < len(terms):
        cur = terms[i]
        for step, cont in ex.hnf(cur):
            for fired, rest in _subsets(step):
                if not rest:
                    tgt = cont
                else:
                    rest_term = par_of([Atom(l) for l in rest])
                    tgt = rest_term if cont is None else Seq(rest_term, cont)
                label = tuple(str(l) for l in mk_step(fired))
                if tgt is None:
                    transitions.add((i, label, -1))
                    continue
                key = canonical_print(tgt)
                if key not in states:
                    if len(states) >= max_states:
                        raise ResourceBound(
                            f"state bound of {max_states} exceeded"
                        )
                    states[key] = len(terms)
                    terms.append(tgt)
                transitions.add((i, label, states[key]))
        i += 1
    ordered = [None] * len(states)
    for k, v in states.items():
        ordered[v] = k
    return StepLTS(tuple(ordered), frozenset(transitions), 0)


# ---------------------------------------------------------------------------
# Guarded linear form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GuardReport:
    """Verdicts for a recursive specification: linear iff every right-hand
    side is a sum of (a1||...||ak).X and (b1||...||bl) summands over atoms;
    guarded iff the reachability graph along tau-only steps between
    variables is acyclic."""

    linear: bool
    guarded: bool

    def __bool__(self) -> bool:
        return self.linear and self.guarded


def check_guarded_linear(spec: RecSpec) -> GuardReport:
    from .terms import flatten

    def is_guard(s: Term) -> bool:
        atoms = flatten(s, Par)
        return all(
            isinstance(a, Atom)
            and a.label.kind in ("visible", "silent") for a in atoms
        )

    linear = True
    tau_edges: set[tuple[str, str]] = set()
    for var, rhs in spec.equations.items():
        for summand in flatten(rhs, Alt):
            if is_guard(summand):
                step, tgt = summand, None
            elif isinstance(summand, Seq) and is_guard(summand.left) \
                    and isinstance(summand.right, RecCall) \
                    and summand.right.spec == spec.name:
                step, tgt = summand.left, summand.right.var
            else:
                linear = False
                continue
            if tgt is not None and all(
                a.label.kind == "silent" for a in flatten(step, Par)
            ):
                tau_edges.add((var, tgt))

    # guarded iff no cycle of tau-only steps among the variables
    guarded = True
    adj: dict[str, set[str]] = {}
    for a, b in tau_edges:
        adj.setdefault(a, set()).add(b)
    for start in adj:
        seen, frontier = set(), [start]
        while frontier:
            v = frontier.pop()
            for w in adj.get(v, ()):
                if w == start:
                    guarded = False
                    frontier = []
                    break
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        if not guarded:
            break
    return GuardReport(linear, guarded)


# ---------------------------------------------------------------------------
# Aldebaran export
# ---------------------------------------------------------------------------


def export_aldebaran(l: StepLTS) -> str:
    """Aldebaran (.aut) text; successful termination is a distinguished
    final state carrying a "tick" self-loop."""
    tick_state = len(l.states)
    has_tick = any(d < 0 for _, _, d in l.transitions)
    lines = []
    for src, step, dst in sorted(l.transitions):
        label = "|".join(step)
        target = tick_state if dst < 0 else dst
        lines.append(f'({src},"{label}",{target})')
    nstates = len(l.states) + (1 if has_tick else 0)
    if has_tick:
        lines.append(f'({tick_state},"tick",{tick_state})')
    header = f"des ({l.initial}, {len(lines)}, {nstates})"
    return "\n".join([header] + lines) + "\n"
