"""Rewrite engine: normalization of recursion-free terms to basic form.

The engine works with an internal canonical representation of basic terms
(``BT``): a set of summands, each a concurrent step (a multiset of event
labels executed simultaneously) followed by either termination, deadlock, or
a nested basic term.  The associativity/commutativity of ``+`` and ``||`` is
the data structure itself; all remaining table rows are applied left-to-right
by the smart constructors, so the result is a normal form by construction.

Deliberate semantic choices (documented in README):

* undefined ``gamma(e1,e2)`` collapses a forced communication to ``delta``;
* a full merge of two single-event, shadow-free processes expands to the
  four-way interleaving+step+communication sum, while any larger full merge
  runs both sides in lockstep (simultaneous steps, shadow absorption,
  communication pairing, declared conflicts and unmatched communicators
  yielding ``delta``); lockstep is sticky in continuations;
* conflict elimination ``theta`` and the unless operator are resolved on the
  syntax before evaluation, reading causal precedence off the source term.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import ResourceBound
from .terms import (
    Abstract, Alt, Atom, Comm, ConflictElim, DELTA, Encap, EventLabel,
    FullPar, Par, Project, RecCall, Rename, Seq, Signature, TAU, Term,
    Unless, alt_of, canonical_print, children, flatten, par_of, term_key,
)

__all__ = [
    "BT", "Summand", "DELTA_BT", "RewriteTrace", "normalize", "normalize_bt",
    "bt_to_term", "is_basic", "lpo_check", "lpo_greater", "RULES",
]


# ---------------------------------------------------------------------------
# Basic-term representation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Summand:
    """One alternative: a concurrent step, then cont (None meaning successful
    termination)."""

    step: tuple[EventLabel, ...]
    cont: Optional["BT"]


@dataclass(frozen=True)
class BT:
    """A basic term: a set of summands.  The empty set is deadlock."""

    summands: frozenset[Summand]

    @property
    def is_delta(self) -> bool:
        return not self.summands


DELTA_BT = BT(frozenset())
_TAU_SUMMAND_KEY = ((TAU,), None)


def mk_step(labels: Iterable[EventLabel]) -> tuple[EventLabel, ...]:
    """Sort a step; silent events contribute nothing next to other events."""
    labs = sorted(labels, key=lambda l: l.key())
    visible = [l for l in labs if l.kind != "silent"]
    if visible:
        return tuple(visible)
    return (TAU,)


def _is_tau_bt(b: Optional[BT]) -> bool:
    return b is not None and len(b.summands) == 1 and next(
        iter(b.summands)
    ) == Summand((TAU,), None)


def mk_summand(step: tuple[EventLabel, ...], cont: Optional[BT]) -> Summand:
    """Build a summand, applying the silent-step laws B1 and B2 to cont."""
    while cont is not None:
        if _is_tau_bt(cont):  # B1: e.tau = e
            cont = None
            continue
        changed = False
        for s in cont.summands:  # B2: e.(tau.(x+y) + x) = e.(x+y)
            if s.step == (TAU,) and s.cont is not None \
                    and (cont.summands - {s}) <= s.cont.summands:
                cont = s.cont
                changed = True
                break
        if not changed:
            break
    return Summand(step, cont)


def bt_of_atom(label: EventLabel) -> BT:
    if label.kind == "deadlock":
        return DELTA_BT
    return BT(frozenset({Summand((label,), None)}))


def bt_alt(x: BT, y: BT) -> BT:
    return BT(x.summands | y.summands)


def bt_to_term(b: Optional[BT]) -> Term:
    """Render a BT as a basic Term (summands and step members sorted)."""
    if b is None:
        raise ValueError("termination marker has no term form")
    if b.is_delta:
        return Atom(DELTA)
    parts = []
    for s in b.summands:
        step_term = par_of([Atom(l) for l in s.step])
        if s.cont is None:
            parts.append(step_term)
        else:
            parts.append(Seq(step_term, bt_to_term(s.cont)))
    parts.sort(key=term_key)
    return alt_of(parts)


# ---------------------------------------------------------------------------
# Trace
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceStep:
    rule: str
    path: tuple[int, ...]
    before: str
    after: str

    def __str__(self) -> str:
        p = ".".join(str(i) for i in self.path) if self.path else "ε"
        return f"{self.rule} @ {p} : {self.before} ==> {self.after}"


@dataclass
class RewriteTrace:
    steps: list[TraceStep] = field(default_factory=list)

    def __str__(self) -> str:
        return "\n".join(str(s) for s in self.steps)

    def __len__(self) -> int:
        return len(self.steps)


# ---------------------------------------------------------------------------
# Evaluator
# ---------------------------------------------------------------------------


class _Engine:
    def __init__(self, sig: Signature, budget: int, collect: bool,
                 reverse: bool):
        self.sig = sig
        self.budget = budget
        self.count = 0
        self.trace = RewriteTrace()
        self.collect = collect
        self.reverse = reverse

    # -- bookkeeping -----------------------------------------------------
    def tick(self, n: int = 1) -> None:
        self.count += n
        if self.count > self.budget:
            raise ResourceBound(
                f"rewrite step budget of {self.budget} exceeded"
            )

    def log(self, rule: str, path: tuple[int, ...], before: Term,
            after: Term) -> None:
        if self.collect:
            self.trace.steps.append(
                TraceStep(rule, path, canonical_print(before),
                          canonical_print(after))
            )

    def pairs(self, x: BT, y: BT):
        xs = sorted(x.summands, key=lambda s: term_key(bt_to_term(BT(frozenset({s})))))
        ys = sorted(y.summands, key=lambda s: term_key(bt_to_term(BT(frozenset({s})))))
        if self.reverse:
            xs, ys = list(reversed(xs)), list(reversed(ys))
        return itertools.product(xs, ys)

    # -- parallel composition ---------------------------------------------
    def _absorb_shadows(self, s1, s2):
        """SC laws: a shadow absorbs a matching real event on the other side;
        an unmatched shadow deadlocks the merged step.  Returns the two
        shadow-free residues or None for delta."""
        r1 = [l for l in s1 if l.kind != "shadow"]
        r2 = [l for l in s2 if l.kind != "shadow"]
        for sh in (l for l in s1 if l.kind == "shadow"):
            if sh.shadow_of[0] in r2:
                continue
            return None
        for sh in (l for l in s2 if l.kind == "shadow"):
            if sh.shadow_of[0] in r1:
                continue
            return None
        return r1, r2

    def _conflict_free(self, part1, part2) -> bool:
        return not any(
            self.sig.in_conflict(a, b) for a in part1 for b in part2
        )

    def _merge_cont(self, c1: Optional[BT], c2: Optional[BT],
                    strict: bool) -> Optional[BT]:
        if c1 is None and c2 is None:
            return None
        if c1 is None:
            return c2
        if c2 is None:
            return c1
        return self.fullpar(c1, c2, strict=strict)

    def par(self, x: BT, y: BT, path=()) -> BT:
        if x.is_delta or y.is_delta:  # P9/P10
            return DELTA_BT
        if _is_tau_bt(x):  # B3
            return y
        if _is_tau_bt(y):  # B3
            return x
        out: set[Summand] = set()
        for a, b in self.pairs(x, y):
            self.tick()
            res = self._absorb_shadows(a.step, b.step)
            if res is None:
                continue
            r1, r2 = res
            if not self._conflict_free(r1, r2):
                continue
            step = mk_step(r1 + r2)
            out.add(mk_summand(step, self._merge_cont(a.cont, b.cont, False)))
        return BT(frozenset(out))

    def comm(self, x: BT, y: BT, path=()) -> BT:
        out: set[Summand] = set()
        for a, b in self.pairs(x, y):
            self.tick()
            if len(a.step) != 1 or len(b.step) != 1:
                continue  # communication is defined on single events
            c = self.sig.gamma_get(a.step[0], b.step[0])
            if c is None:
                continue  # undefined gamma: C-law collapses to delta
            out.add(mk_summand((c,), self._merge_cont(a.cont, b.cont, False)))
        return BT(frozenset(out))

    # -- full merge --------------------------------------------------------
    @staticmethod
    def _single_event(x: BT) -> bool:
        if len(x.summands) != 1:
            return False
        s = next(iter(x.summands))
        return s.cont is None and len(s.step) == 1 \
            and s.step[0].kind != "shadow"

    def _lockstep_step(self, s1, s2):
        """Merge two simultaneous steps in lockstep mode, or None for delta."""
        res = self._absorb_shadows(s1, s2)
        if res is None:
            return None
        r1, r2 = res
        merged: list[EventLabel] = []
        left = list(r1)
        right = list(r2)
        for a in list(left):
            partner = next(
                (b for b in right if self.sig.gamma_get(a, b) is not None),
                None,
            )
            if partner is not None:
                merged.append(self.sig.gamma_get(a, partner))
                left.remove(a)
                right.remove(partner)
            elif self.sig.is_communicator(a):
                return None  # unmatched communicator deadlocks in lockstep
        if any(self.sig.is_communicator(b) for b in right):
            return None
        if not self._conflict_free(left, right):
            return None
        return mk_step(merged + left + right)

    def fullpar(self, x: BT, y: BT, strict: bool = False, path=()) -> BT:
        if x.is_delta or y.is_delta:
            return DELTA_BT
        if not strict and self._single_event(x) and self._single_event(y):
            # expansion of a two-event full merge:  a<>b = a.b+b.a+a||b+a|b
            return bt_alt(
                bt_alt(self.par(x, y), self.comm(x, y)),
                bt_alt(self.seq(x, y), self.seq(y, x)),
            )
        out: set[Summand] = set()
        for a, b in self.pairs(x, y):
            self.tick()
            step = self._lockstep_step(a.step, b.step)
            if step is None:
                continue
            out.add(mk_summand(step, self._merge_cont(a.cont, b.cont, True)))
        return BT(frozenset(out))

    # -- sequencing and the unary operators ---------------------------------
    def seq(self, x: BT, y: BT, path=()) -> BT:
        out: set[Summand] = set()
        for s in x.summands:  # A4/A5: distribute and reassociate
            self.tick()
            if s.cont is None:
                out.add(mk_summand(s.step, y))
            else:
                out.add(mk_summand(s.step, self.seq(s.cont, y)))
        return BT(frozenset(out))

    def encap(self, H: frozenset[EventLabel], x: BT) -> BT:
        out: set[Summand] = set()
        for s in x.summands:
            self.tick()
            if any(l in H for l in s.step):  # D2: dropped alternative
                continue
            cont = self.encap(H, s.cont) if s.cont is not None else None
            out.add(mk_summand(s.step, cont))
        return BT(frozenset(out))

    def abstract(self, I: frozenset[EventLabel], x: BT) -> BT:
        out: set[Summand] = set()
        for s in x.summands:
            self.tick()
            step = mk_step(TAU if l in I else l for l in s.step)
            cont = self.abstract(I, s.cont) if s.cont is not None else None
            out.add(mk_summand(step, cont))
        return BT(frozenset(out))

    def project(self, n: int, x: BT) -> BT:
        if n <= 0:
            return DELTA_BT  # PR1
        out: set[Summand] = set()
        for s in x.summands:
            self.tick()
            if s.cont is None:
                out.add(mk_summand(s.step, None))
            else:
                out.add(mk_summand(s.step, self.project(n - 1, s.cont)))
        return BT(frozenset(out))

    def rename(self, fname: str, x: BT) -> BT:
        out: set[Summand] = set()
        for s in x.summands:
            self.tick()
            step = mk_step(self.sig.rename_label(fname, l) for l in s.step)
            cont = self.rename(fname, s.cont) if s.cont is not None else None
            out.add(mk_summand(step, cont))
        return BT(frozenset(out))

    # -- theta / unless on the syntax ---------------------------------------
    def _visible_events(self, t: Term) -> frozenset[EventLabel]:
        out: set[EventLabel] = set()
        stack = [t]
        while stack:
            s = stack.pop()
            if isinstance(s, Atom):
                if s.label.is_visible:
                    out.add(s.label)
            else:
                stack.extend(children(s))
        return frozenset(out)

    def unless_term(self, x: Term, y: Term, path=()) -> Term:
        """x unless y: censor events of x against the events of y (U-laws).
        An event turns silent when it, or a causal predecessor of it inside
        x, is in declared conflict with an event of y."""
        right = self._visible_events(y)

        def censored(u: EventLabel, preceding: frozenset[EventLabel]) -> bool:
            for v in right:
                if self.sig.in_conflict(u, v):  # U25
                    return True
                if any(self.sig.in_conflict(w, v) for w in preceding):  # U27
                    return True
            return False

        def walk(t: Term, preceding: frozenset[EventLabel]) -> Term:
            self.tick()
            if isinstance(t, Atom):
                if t.label.is_visible and censored(t.label, preceding):
                    self.log("U25/U27", path, Unless(t, y), Atom(TAU))
                    return Atom(TAU)
                return t
            if isinstance(t, Seq):
                left = walk(t.left, preceding)
                return Seq(
                    left, walk(t.right, preceding | self._visible_events(t.left))
                )
            if isinstance(t, Alt):
                return Alt(walk(t.left, preceding), walk(t.right, preceding))
            if isinstance(t, Par):
                return Par(walk(t.left, preceding), walk(t.right, preceding))
            if isinstance(t, Comm):
                return Comm(walk(t.left, preceding), walk(t.right, preceding))
            if isinstance(t, FullPar):
                return FullPar(
                    walk(t.left, preceding), walk(t.right, preceding), t.strict
                )
            if isinstance(t, Encap):
                return Encap(t.labels, walk(t.body, preceding))
            if isinstance(t, Abstract):
                return Abstract(t.labels, walk(t.body, preceding))
            if isinstance(t, Project):
                return Project(t.depth, walk(t.body, preceding))
            if isinstance(t, Rename):
                return Rename(t.fname, walk(t.body, preceding))
            raise ValueError(
                f"unless is not defined over {type(t).__name__} operands"
            )

        return walk(x, frozenset())

    def theta_term(self, t: Term, path=()) -> Term:
        """Eliminate theta and unless from the syntax (CE19-CE24, U-laws)."""
        self.tick()
        if isinstance(t, Atom):
            return t  # CE19/CE20
        if isinstance(t, Seq):  # CE22
            return Seq(self.theta_term(t.left), self.theta_term(t.right))
        if isinstance(t, Alt):  # CE21
            l, r = self.theta_term(t.left), self.theta_term(t.right)
            out = Alt(self.unless_term(l, t.right, path),
                      self.unless_term(r, t.left, path))
            self.log("CE21", path, ConflictElim(t), out)
            return out
        if isinstance(t, (Par, Comm, FullPar)):  # CE23/CE24
            l, r = self.theta_term(t.left), self.theta_term(t.right)
            cls = type(t)
            mk = (lambda a, b: FullPar(a, b, t.strict)) \
                if isinstance(t, FullPar) else cls
            out = Alt(mk(self.unless_term(l, t.right, path), t.right),
                      mk(self.unless_term(r, t.left, path), t.left))
            self.log("CE23" if isinstance(t, Par) else "CE24", path,
                     ConflictElim(t), out)
            return out
        if isinstance(t, ConflictElim):
            return self.theta_term(t.body, path)
        if isinstance(t, Unless):
            return self.unless_term(
                self.theta_term(t.left, path), t.right, path
            )
        if isinstance(t, Encap):
            return Encap(t.labels, self.theta_term(t.body, path))
        if isinstance(t, Abstract):
            return Abstract(t.labels, self.theta_term(t.body, path))
        if isinstance(t, Project):
            return Project(t.depth, self.theta_term(t.body, path))
        if isinstance(t, Rename):
            return Rename(t.fname, self.theta_term(t.body, path))
        raise ValueError(
            f"theta is not defined over {type(t).__name__} operands"
        )

    # -- main dispatch -------------------------------------------------------
    def eval(self, t: Term, path: tuple[int, ...] = ()) -> BT:
        self.tick()
        if isinstance(t, Atom):
            return bt_of_atom(t.label)
        if isinstance(t, Alt):
            return bt_alt(self.eval(t.left, path + (0,)),
                          self.eval(t.right, path + (1,)))
        if isinstance(t, Seq):
            x = self.eval(t.left, path + (0,))
            if x.is_delta:
                self.log("A7", path, t, Atom(DELTA))
                return DELTA_BT
            y = self.eval(t.right, path + (1,))
            out = self.seq(x, y, path)
            if len(x.summands) > 1:
                self.log("A4", path, t, bt_to_term(out))
            return out
        if isinstance(t, Par):
            x = self.eval(t.left, path + (0,))
            y = self.eval(t.right, path + (1,))
            out = self.par(x, y, path)
            self.log("P4-P10", path, t, bt_to_term(out))
            return out
        if isinstance(t, Comm):
            x = self.eval(t.left, path + (0,))
            y = self.eval(t.right, path + (1,))
            out = self.comm(x, y, path)
            self.log("C11-C14", path, t, bt_to_term(out))
            return out
        if isinstance(t, FullPar):
            x = self.eval(t.left, path + (0,))
            y = self.eval(t.right, path + (1,))
            out = self.fullpar(x, y, t.strict, path)
            self.log("P1/SC", path, t, bt_to_term(out))
            return out
        if isinstance(t, (ConflictElim, Unless)):
            resolved = self.theta_term(t, path)
            return self.eval(resolved, path)
        if isinstance(t, Encap):
            out = self.encap(t.labels, self.eval(t.body, path + (0,)))
            self.log("D1-D6", path, t, bt_to_term(out))
            return out
        if isinstance(t, Abstract):
            out = self.abstract(t.labels, self.eval(t.body, path + (0,)))
            self.log("TI1-TI6", path, t, bt_to_term(out))
            return out
        if isinstance(t, Project):
            out = self.project(t.depth, self.eval(t.body, path + (0,)))
            self.log("PR1-PR6", path, t, bt_to_term(out))
            return out
        if isinstance(t, Rename):
            out = self.rename(t.fname, self.eval(t.body, path + (0,)))
            self.log("RN1-RN5", path, t, bt_to_term(out))
            return out
        if isinstance(t, RecCall):
            raise ValueError(
                "normalize is defined on recursion-free terms; unfold first"
            )
        raise TypeError(f"unknown term node {t!r}")


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------


def normalize_bt(t: Term, sig: Signature, *, budget: int = 1_000_000,
                 reverse: bool = False) -> BT:
    """Normalize to the internal basic-term representation (no trace)."""
    return _Engine(sig, budget, collect=False, reverse=reverse).eval(t)


def normalize(t: Term, sig: Signature, *, budget: int = 1_000_000,
              reverse: bool = False) -> tuple[Term, RewriteTrace]:
    """Normalize a recursion-free term to a basic term.

    ``reverse`` flips the innermost redex-selection order (for confluence
    testing); the result is eq_ac-equal either way.
    """
    eng = _Engine(sig, budget, collect=True, reverse=reverse)
    out = bt_to_term(eng.eval(t))
    return out, eng.trace


def is_basic(t: Term) -> bool:
    """True iff t is a basic term: a sum of concurrent steps chained by
    prefixing, where a step is an atom or a parallel product of atoms."""

    def is_step(s: Term) -> bool:
        return all(isinstance(p, Atom) for p in flatten(s, Par))

    if isinstance(t, Alt):
        return is_basic(t.left) and is_basic(t.right)
    if isinstance(t, Seq):
        return is_step(t.left) and is_basic(t.right)
    return is_step(t)


# ---------------------------------------------------------------------------
# Lexicographic path order on the oriented rules
# ---------------------------------------------------------------------------
#
# Rule terms are nested tuples ("op", arg, ...); lowercase strings are
# variables, uppercase strings are event metavariables (also variables for
# the ordering), and ("const", name) is a constant.  Precedence classes from
# high to low:
#     encap = hide = proj = rho = theta  >  unless  >  fullpar
#     >  par = comm  >  seq  >  alt  >  constants
# Statuses: seq compares left argument first; unless compares its right
# argument first; par/comm/fullpar/alt compare their arguments as multisets.
# The two rules that introduce a full merge in their right-hand side (the
# prefixed merge and communication laws) are stated with the merge already
# expanded one level, which is how the engine applies them.

_PREC = {
    "encap": 7, "hide": 7, "proj": 7, "rho": 7, "theta": 7,
    "unless": 6, "fullpar": 5, "par": 4, "comm": 4, "seq": 3, "alt": 2,
    "const": 1,
}
_STATUS = {
    "seq": "lex", "unless": "rlex", "proj": "lex",
    "par": "mul", "comm": "mul", "fullpar": "mul", "alt": "mul",
}


def _is_var(t) -> bool:
    return isinstance(t, str)


def _args(t) -> tuple:
    """Proper term arguments (the projection depth and constant names are
    not terms)."""
    if t[0] == "const":
        return ()
    return t[1:] if t[0] != "proj" else t[2:]


def _seq_args(t) -> list:
    """Arguments in comparison order; projection compares its depth first."""
    if t[0] == "const":
        return []
    if t[0] == "proj":
        return [t[1], *t[2:]]
    return list(t[1:])


def _occurs(v, t) -> bool:
    if _is_var(t):
        return t == v
    if isinstance(t, int):
        return False
    return any(_occurs(v, a) for a in _args(t))


def _mul_greater(ms, mt) -> bool:
    ms, mt = list(ms), list(mt)
    for x in list(mt):  # cancel equal elements
        if x in ms:
            ms.remove(x)
            mt.remove(x)
    if not mt:
        return bool(ms)
    return bool(ms) and all(
        any(lpo_greater(m, n) for m in ms) for n in mt
    )


def lpo_greater(s, t) -> bool:
    """s >_lpo t for rule terms (variables compare per the standard LPO;
    precedence-equal operators of multiset status form one equivalence
    class)."""
    if s == t:
        return False
    if isinstance(s, int) or isinstance(t, int):
        return isinstance(s, int) and isinstance(t, int) and s > t
    if _is_var(t):
        return _occurs(t, s)
    if _is_var(s):
        return False
    # case 1: some proper argument of s dominates or equals t
    if any(a == t or lpo_greater(a, t) for a in _args(s)):
        return True
    ps, pt = _PREC[s[0]], _PREC[t[0]]
    if ps > pt:
        return all(lpo_greater(s, a) for a in _args(t))
    if ps < pt:
        return False
    # equal precedence: same operator, or operators merged into one
    # multiset-status class
    status = _STATUS.get(s[0], "lex")
    if s[0] != t[0] and not (status == "mul" and _STATUS.get(t[0]) == "mul"):
        return False
    if not all(lpo_greater(s, a) for a in _args(t)):
        return False
    sa, ta = _seq_args(s), _seq_args(t)
    if status == "mul":
        return _mul_greater(sa, ta)
    if status == "rlex":
        sa, ta = sa[::-1], ta[::-1]
    for a, b in zip(sa, ta):
        if a == b:
            continue
        return lpo_greater(a, b)
    return len(sa) > len(ta)


def _c(name):  # constant
    return ("const", name)


_E1, _E2, _E3, _X, _Y, _Z = "E1", "E2", "E3", "x", "y", "z"
_TAU_C, _DELTA_C, _SHADOW_C = _c("tau"), _c("delta"), _c("shadow_e")

RULES: dict[str, tuple] = {
    # sequencing and choice
    "RA3": (("alt", _X, _X), _X),
    "RA4": (("seq", ("alt", _X, _Y), _Z),
            ("alt", ("seq", _X, _Z), ("seq", _Y, _Z))),
    "RA5": (("seq", ("seq", _X, _Y), _Z), ("seq", _X, ("seq", _Y, _Z))),
    "RA6": (("alt", _X, _DELTA_C), _X),
    "RA7": (("seq", _DELTA_C, _X), _DELTA_C),
    # parallelism (the prefixed laws carry their merge pre-expanded)
    "RP1": (("fullpar", _E1, _E2),
            ("alt", ("alt", ("par", _E1, _E2), ("comm", _E1, _E2)),
             ("alt", ("seq", _E1, _E2), ("seq", _E2, _E1)))),
    "RP4": (("par", _E1, ("seq", _E2, _Y)),
            ("seq", ("par", _E1, _E2), _Y)),
    "RP5": (("par", ("seq", _E1, _X), _E2),
            ("seq", ("par", _E1, _E2), _X)),
    # RP6/RC14 introduce a full merge of the two tails; the engine applies
    # them with that merge expanded one level (P1), which the order needs
    "RP6": (("par", ("seq", _E1, _X), ("seq", _E2, _Y)),
            ("seq", ("par", _E1, _E2),
             ("alt", ("par", _X, _Y), ("comm", _X, _Y)))),
    # lockstep unfolding of a full merge of prefixed processes
    "RFM": (("fullpar", ("seq", _E1, _X), ("seq", _E2, _Y)),
            ("seq", ("par", _E1, _E2), ("fullpar", _X, _Y))),
    "RP7": (("par", ("alt", _X, _Y), _Z),
            ("alt", ("par", _X, _Z), ("par", _Y, _Z))),
    "RP8": (("par", _X, ("alt", _Y, _Z)),
            ("alt", ("par", _X, _Y), ("par", _X, _Z))),
    "RP9": (("par", _DELTA_C, _X), _DELTA_C),
    "RP10": (("par", _X, _DELTA_C), _DELTA_C),
    # communication
    "RC11": (("comm", _E1, _E2), _c("gamma_e")),
    "RC12": (("comm", _E1, ("seq", _E2, _Y)), ("seq", _c("gamma_e"), _Y)),
    "RC13": (("comm", ("seq", _E1, _X), _E2), ("seq", _c("gamma_e"), _X)),
    "RC14": (("comm", ("seq", _E1, _X), ("seq", _E2, _Y)),
             ("seq", _c("gamma_e"),
              ("alt", ("par", _X, _Y), ("comm", _X, _Y)))),
    "RC15": (("comm", ("alt", _X, _Y), _Z),
             ("alt", ("comm", _X, _Z), ("comm", _Y, _Z))),
    "RC16": (("comm", _X, ("alt", _Y, _Z)),
             ("alt", ("comm", _X, _Y), ("comm", _X, _Z))),
    "RC17": (("comm", _DELTA_C, _X), _DELTA_C),
    "RC18": (("comm", _X, _DELTA_C), _DELTA_C),
    # conflict elimination
    "RCE19": (("theta", _E1), _E1),
    "RCE20": (("theta", _DELTA_C), _DELTA_C),
    "RCE21": (("theta", ("alt", _X, _Y)),
              ("alt", ("unless", ("theta", _X), _Y),
               ("unless", ("theta", _Y), _X))),
    "RCE22": (("theta", ("seq", _X, _Y)),
              ("seq", ("theta", _X), ("theta", _Y))),
    "RCE23": (("theta", ("par", _X, _Y)),
              ("alt", ("par", ("unless", ("theta", _X), _Y), _Y),
               ("par", ("unless", ("theta", _Y), _X), _X))),
    "RCE24": (("theta", ("comm", _X, _Y)),
              ("alt", ("comm", ("unless", ("theta", _X), _Y), _Y),
               ("comm", ("unless", ("theta", _Y), _X), _X))),
    # unless
    "RU25": (("unless", _E1, _E2), _TAU_C),
    "RU26": (("unless", _E1, _E3), _E1),
    "RU27": (("unless", _E3, _E1), _TAU_C),
    "RU28": (("unless", _E1, _DELTA_C), _E1),
    "RU29": (("unless", _DELTA_C, _E1), _DELTA_C),
    "RU30": (("unless", ("alt", _X, _Y), _Z),
             ("alt", ("unless", _X, _Z), ("unless", _Y, _Z))),
    "RU31": (("unless", ("seq", _X, _Y), _Z),
             ("seq", ("unless", _X, _Z), ("unless", _Y, _Z))),
    "RU32": (("unless", ("par", _X, _Y), _Z),
             ("par", ("unless", _X, _Z), ("unless", _Y, _Z))),
    "RU33": (("unless", ("comm", _X, _Y), _Z),
             ("comm", ("unless", _X, _Z), ("unless", _Y, _Z))),
    "RU34": (("unless", _X, ("alt", _Y, _Z)),
             ("unless", ("unless", _X, _Y), _Z)),
    "RU35": (("unless", _X, ("seq", _Y, _Z)),
             ("unless", ("unless", _X, _Y), _Z)),
    "RU36": (("unless", _X, ("par", _Y, _Z)),
             ("unless", ("unless", _X, _Y), _Z)),
    "RU37": (("unless", _X, ("comm", _Y, _Z)),
             ("unless", ("unless", _X, _Y), _Z)),
    # encapsulation
    "RD1": (("encap", _E1), _E1),
    "RD2": (("encap", _E1), _DELTA_C),
    "RD3": (("encap", _DELTA_C), _DELTA_C),
    "RD4": (("encap", ("alt", _X, _Y)),
            ("alt", ("encap", _X), ("encap", _Y))),
    "RD5": (("encap", ("seq", _X, _Y)),
            ("seq", ("encap", _X), ("encap", _Y))),
    "RD6": (("encap", ("par", _X, _Y)),
            ("par", ("encap", _X), ("encap", _Y))),
    # projection (first slot is the depth, compared as a natural number)
    "RPR1": (("proj", 0, _X), _DELTA_C),
    "RPR2": (("proj", 1, _E1), _E1),
    "RPR3": (("proj", 1, ("seq", _E1, _X)), ("seq", _E1, ("proj", 0, _X))),
    "RPR4": (("proj", 2, ("seq", _E1, _X)), ("seq", _E1, ("proj", 1, _X))),
    "RPR5": (("proj", 1, ("alt", _X, _Y)),
             ("alt", ("proj", 1, _X), ("proj", 1, _Y))),
    # silent step
    "RB1": (("seq", _E1, _TAU_C), _E1),
    "RB2": (("seq", _E1, ("alt", ("seq", _TAU_C, ("alt", _X, _Y)), _X)),
            ("seq", _E1, ("alt", _X, _Y))),
    "RB3": (("par", _X, _TAU_C), _X),
    # abstraction
    "RTI1": (("hide", _E1), _E1),
    "RTI2": (("hide", _E1), _TAU_C),
    "RTI3": (("hide", _DELTA_C), _DELTA_C),
    "RTI4": (("hide", ("alt", _X, _Y)), ("alt", ("hide", _X), ("hide", _Y))),
    "RTI5": (("hide", ("seq", _X, _Y)), ("seq", ("hide", _X), ("hide", _Y))),
    "RTI6": (("hide", ("par", _X, _Y)), ("par", ("hide", _X), ("hide", _Y))),
    # renaming
    "RRN1": (("rho", _E1), _c("f_e")),
    "RRN2": (("rho", _DELTA_C), _DELTA_C),
    "RRN3": (("rho", ("alt", _X, _Y)), ("alt", ("rho", _X), ("rho", _Y))),
    "RRN4": (("rho", ("seq", _X, _Y)), ("seq", ("rho", _X), ("rho", _Y))),
    "RRN5": (("rho", ("par", _X, _Y)), ("par", ("rho", _X), ("rho", _Y))),
    # shadow constant
    "RSC1": (("alt", _X, _SHADOW_C), _X),
    "RSC2": (("seq", _SHADOW_C, _X), _X),
    "RSC3": (("seq", _X, _SHADOW_C), _X),
    "RSC4": (("par", ("seq", _SHADOW_C, _X), ("seq", _E1, _Y)),
             ("seq", _E1, ("alt", ("par", _X, _Y), ("comm", _X, _Y)))),
    "RSC5": (("par", ("seq", _E1, _X), ("seq", _SHADOW_C, _Y)),
             ("seq", _E1, ("alt", ("par", _X, _Y), ("comm", _X, _Y)))),
    "RSC6": (("par", _SHADOW_C, ("seq", _E1, _Y)), ("seq", _E1, _Y)),
    "RSC7": (("par", ("seq", _E1, _X), _SHADOW_C), ("seq", _E1, _X)),
    "RSC8": (("par", _SHADOW_C, _E1), _E1),
    "RSC9": (("par", _E1, _SHADOW_C), _E1),
    "RSC10": (("par", _E1, _c("shadow_other")), _DELTA_C),
}


def lpo_check(rule: Optional[str] = None) -> dict[str, bool]:
    """Check lhs >_lpo rhs for every oriented rule (or one named rule).

    Returns a report mapping rule names to booleans; a sound orientation has
    every value True, which witnesses strong normalization of the TRS.
    """
    names = [rule] if rule is not None else sorted(RULES)
    return {n: lpo_greater(*RULES[n]) for n in names}
