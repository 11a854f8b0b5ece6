"""Recursion tools: projection, bounded approximation induction (AIP),
unfolding and solution checking (RDP/RSP), and cluster fair abstraction
(CFAR)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .equiv import strong_bisim, strong_step_bisim_lts
from .lts import _Explorer, check_guarded_linear, explore
from .pes import compile_basic
from .rewrite import BT, Summand, bt_to_term
from .terms import (
    Abstract, Alt, Atom, EventLabel, Par, RecCall, RecSpec, Seq, Signature,
    TAU, Term, alt_of, children, flatten, term_key,
)

__all__ = ["project_n", "aip_check", "AipResult", "rdp_unfold", "rsp_check",
           "cfar_apply", "check_guarded_linear"]


# ---------------------------------------------------------------------------
# Projection
# ---------------------------------------------------------------------------


def _bounded_bt(ex: _Explorer, t: Term, n: int) -> BT:
    if n <= 0:
        return BT(frozenset())
    out = set()
    for step, cont in ex.hnf(t):
        if cont is None:
            out.add(Summand(step, None))
        else:
            out.add(Summand(step, _bounded_bt(ex, cont, n - 1)))
    return BT(frozenset(out))


def project_n(t: Term, n: int, sig: Signature,
              specs: Mapping[str, RecSpec] | None = None) -> Term:
    """The n-th projection of t as a basic term: behaviour truncated after
    n steps, with the cut marked by deadlock."""
    if n < 0:
        raise ValueError("projection depth must be nonnegative")
    ex = _Explorer(sig, specs)
    return bt_to_term(_bounded_bt(ex, t, n))


# ---------------------------------------------------------------------------
# Approximation induction (bounded)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AipResult:
    equivalent: bool
    depth: int
    failed_at: Optional[int] = None

    def __str__(self) -> str:
        if self.equivalent:
            return f"equivalent-up-to-{self.depth}"
        return f"distinguished-at-{self.failed_at}"


def aip_check(t1: Term, t2: Term, n: int, sig: Signature,
              specs: Mapping[str, RecSpec] | None = None,
              mode: str = "step") -> AipResult:
    """Compare the first n projections of t1 and t2 by strong bisimilarity
    of their event structures."""
    for k in range(1, n + 1):
        p1 = compile_basic(project_n(t1, k, sig, specs))
        p2 = compile_basic(project_n(t2, k, sig, specs))
        if not strong_bisim(p1, p2, mode):
            return AipResult(False, n, k)
    return AipResult(True, n)


# ---------------------------------------------------------------------------
# RDP / RSP
# ---------------------------------------------------------------------------


def _substitute(t: Term, repl: Mapping[tuple[str, str], Term]) -> Term:
    if isinstance(t, RecCall):
        return repl.get((t.var, t.spec), t)
    if isinstance(t, Atom):
        return t
    kids = children(t)
    new = tuple(_substitute(k, repl) for k in kids)
    return _rebuild(t, new)


def _rebuild(t: Term, new: tuple) -> Term:
    from .terms import (Abstract, Alt, Comm, ConflictElim, Encap, FullPar,
                        Par, Project, Rename, Seq, Unless)
    if isinstance(t, Seq):
        return Seq(*new)
    if isinstance(t, Alt):
        return Alt(*new)
    if isinstance(t, Par):
        return Par(*new)
    if isinstance(t, Comm):
        return Comm(*new)
    if isinstance(t, FullPar):
        return FullPar(new[0], new[1], t.strict)
    if isinstance(t, Unless):
        return Unless(*new)
    if isinstance(t, ConflictElim):
        return ConflictElim(*new)
    if isinstance(t, Encap):
        return Encap(t.labels, new[0])
    if isinstance(t, Abstract):
        return Abstract(t.labels, new[0])
    if isinstance(t, Project):
        return Project(t.depth, new[0])
    if isinstance(t, Rename):
        return Rename(t.fname, new[0])
    raise TypeError(f"cannot rebuild {type(t).__name__}")


def rdp_unfold(t: Term, specs: Mapping[str, RecSpec]) -> Term:
    """One application of the recursive definition principle: replace every
    recursion call in t by the right-hand side of its equation."""
    repl = {
        (var, name): spec.equations[var]
        for name, spec in specs.items()
        for var in spec.equations
    }
    return _substitute(t, repl)


def rsp_check(spec: RecSpec, candidates: Mapping[str, Term], sig: Signature,
              specs: Mapping[str, RecSpec] | None = None,
              max_states: int = 10_000) -> bool:
    """Recursive specification principle: a guarded specification has at
    most one solution.  Checks that the candidate terms solve the equations
    (strong step bisimilarity of candidate and instantiated right-hand
    side), which by RSP identifies them with the specification's canonical
    solution."""
    if not check_guarded_linear(spec):
        raise ValueError(
            f"specification {spec.name!r} is not guarded linear; RSP "
            f"does not apply"
        )
    if set(candidates) != set(spec.equations):
        raise ValueError("candidates must cover every variable")
    allspecs = dict(specs or {})
    repl = {(var, spec.name): candidates[var] for var in spec.equations}
    for var, rhs in spec.equations.items():
        lhs_lts = explore(candidates[var], sig, allspecs, max_states)
        rhs_lts = explore(_substitute(rhs, repl), sig, allspecs, max_states)
        if not strong_step_bisim_lts(lhs_lts, rhs_lts):
            return False
    return True


# ---------------------------------------------------------------------------
# CFAR
# ---------------------------------------------------------------------------


def _summand_shape(s: Term):
    """Split a linear summand into (step labels, target var or None)."""
    if isinstance(s, Seq) and isinstance(s.right, RecCall):
        step = s.left
        tgt = s.right.var
    else:
        step = s
        tgt = None
    labels = tuple(
        a.label for a in flatten(step, Par) if isinstance(a, Atom)
    )
    return labels, tgt, s


def cfar_apply(spec: RecSpec, var: str, I: frozenset[EventLabel],
               sig: Signature) -> Term:
    """Cluster fair abstraction: abstracting from I in <var|spec>, a cluster
    of states connected by I-steps collapses to a silent step into the sum
    of its exits:  tau_I(<X|E>) = tau . tau_I(sum of exits of the cluster
    of X)."""
    if not check_guarded_linear(spec):
        raise ValueError(
            f"specification {spec.name!r} is not guarded linear; CFAR "
            f"does not apply"
        )
    if var not in spec.equations:
        raise ValueError(f"unknown variable {var!r}")

    def internal(labels) -> bool:
        return all(l in I or l.kind == "silent" for l in labels)

    # cluster: variables mutually reachable from var via internal steps
    def reach(start: str) -> set[str]:
        seen = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for s in flatten(spec.equations[v], Alt):
                labels, tgt, _ = _summand_shape(s)
                if tgt is not None and internal(labels) and tgt not in seen:
                    seen.add(tgt)
                    frontier.append(tgt)
        return seen

    fwd = reach(var)
    cluster = {v for v in fwd if var in reach(v)}

    exits: list[Term] = []
    for v in sorted(cluster):
        for s in flatten(spec.equations[v], Alt):
            labels, tgt, term = _summand_shape(s)
            if internal(labels) and tgt in cluster:
                continue  # an internal cluster edge, not an exit
            exits.append(
                term if tgt is None else
                Seq(term.left, RecCall(tgt, spec.name))
            )
    if not exits:
        raise ValueError("no exits")
    exits = sorted(set(exits), key=term_key)
    return Seq(Atom(TAU), Abstract(I, alt_of(exits)))
