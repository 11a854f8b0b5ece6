"""Independent reference semantics used as a test oracle.

Evaluates closed, recursion-free terms over {atom, deadlock, ., +, ||, |,
full merge, encapsulation} to a behavior tree by direct structural
recursion on the step SOS rules.  It shares no code with the package's
rewrite engine or LTS explorer; agreement between the two is what the
soundness suite asserts.

A behavior tree is a frozenset of (step, continuation) pairs, where a step
is a sorted tuple of event labels and the continuation is another tree or
None for successful termination.  The empty tree is deadlock.

The module also provides the random-term corpus generator shared by the
acceptance and property tests.
"""

from __future__ import annotations

import random

from aptc.terms import (
    Alt, Atom, Comm, DELTA, Encap, EventLabel, FullPar, Par, Seq, Signature,
    Term, alt_of, make_signature, par_of, seq_of,
)

Tree = frozenset  # of (tuple[EventLabel, ...], Tree | None)

EMPTY: Tree = frozenset()


def _sort_step(labels) -> tuple:
    labels = list(labels)
    if len(labels) > 1:
        labels = [l for l in labels if l.kind != "silent"] or labels[:1]
    return tuple(sorted(labels, key=lambda l: l.key()))


def _seq(x: Tree, y: Tree) -> Tree:
    return frozenset(
        (s, y if c is None else _seq(c, y)) for s, c in x
    )


def _conflict_free(sig: Signature, s1, s2) -> bool:
    return not any(sig.in_conflict(a, b) for a in s1 for b in s2)


def _par(sig: Signature, x: Tree, y: Tree) -> Tree:
    out = set()
    for s1, c1 in x:
        for s2, c2 in y:
            if not _conflict_free(sig, s1, s2):
                continue
            cont = (None if c1 is None and c2 is None
                    else c1 if c2 is None
                    else c2 if c1 is None
                    else _fullpar(sig, c1, c2, strict=False))
            out.add((_sort_step(s1 + s2), cont))
    return frozenset(out)


def _comm(sig: Signature, x: Tree, y: Tree) -> Tree:
    out = set()
    for s1, c1 in x:
        for s2, c2 in y:
            if len(s1) != 1 or len(s2) != 1:
                continue
            g = sig.gamma_get(s1[0], s2[0])
            if g is None:
                continue
            cont = (None if c1 is None and c2 is None
                    else c1 if c2 is None
                    else c2 if c1 is None
                    else _fullpar(sig, c1, c2, strict=False))
            out.add(((g,), cont))
    return frozenset(out)


def _is_single_event(x: Tree) -> bool:
    if len(x) != 1:
        return False
    (s, c), = x
    return c is None and len(s) == 1 and s[0].is_visible


def _lockstep(sig: Signature, s1, s2):
    """Merge two simultaneous steps; None means the pair deadlocks."""
    left, right, merged = list(s1), list(s2), []
    for a in list(left):
        partner = next(
            (b for b in right if sig.gamma_get(a, b) is not None), None
        )
        if partner is not None:
            merged.append(sig.gamma_get(a, partner))
            left.remove(a)
            right.remove(partner)
        elif sig.is_communicator(a):
            return None
    if any(sig.is_communicator(b) for b in right):
        return None
    if not _conflict_free(sig, left, right):
        return None
    return _sort_step(merged + left + right)


def _fullpar(sig: Signature, x: Tree, y: Tree, strict: bool) -> Tree:
    if not strict and _is_single_event(x) and _is_single_event(y):
        (s1, _), = x
        (s2, _), = y
        out = {(s1, y), (s2, x)}
        if _conflict_free(sig, s1, s2):
            out.add((_sort_step(s1 + s2), None))
        g = sig.gamma_get(s1[0], s2[0])
        if g is not None:
            out.add(((g,), None))
        return frozenset(out)
    out = set()
    for s1, c1 in x:
        for s2, c2 in y:
            step = _lockstep(sig, s1, s2)
            if step is None:
                continue
            cont = (None if c1 is None and c2 is None
                    else c1 if c2 is None
                    else c2 if c1 is None
                    else _fullpar(sig, c1, c2, strict=True))
            out.add((step, cont))
    return frozenset(out)


def behavior(t: Term, sig: Signature) -> Tree:
    """Full behavior tree of a closed, recursion-free term."""
    if isinstance(t, Atom):
        if t.label.kind == "deadlock":
            return EMPTY
        if t.label.kind == "shadow":
            raise ValueError("reference semantics is shadow-free")
        return frozenset({((t.label,), None)})
    if isinstance(t, Alt):
        return behavior(t.left, sig) | behavior(t.right, sig)
    if isinstance(t, Seq):
        return _seq(behavior(t.left, sig), behavior(t.right, sig))
    if isinstance(t, Par):
        return _par(sig, behavior(t.left, sig), behavior(t.right, sig))
    if isinstance(t, Comm):
        return _comm(sig, behavior(t.left, sig), behavior(t.right, sig))
    if isinstance(t, FullPar):
        return _fullpar(sig, behavior(t.left, sig), behavior(t.right, sig),
                        t.strict)
    if isinstance(t, Encap):
        return frozenset(
            (s, None if c is None else _encap_tree(t.labels, c))
            for s, c in behavior(t.body, sig)
            if not any(l in t.labels for l in s)
        )
    raise ValueError(f"reference semantics does not cover {type(t).__name__}")


def _encap_tree(H, x: Tree) -> Tree:
    return frozenset(
        (s, None if c is None else _encap_tree(H, c))
        for s, c in x
        if not any(l in H for l in s)
    )


def tree_to_term(x: Tree) -> Term:
    """Reconstruct a basic term from a behavior tree (deterministic order)."""
    if not x:
        return Atom(DELTA)
    summands = []
    for s, c in sorted(x, key=lambda p: (tuple(l.key() for l in p[0]),
                                         p[1] is not None)):
        step = par_of([Atom(l) for l in s])
        summands.append(step if c is None else Seq(step, tree_to_term(c)))
    return alt_of(summands)


# ---------------------------------------------------------------------------
# Random corpus
# ---------------------------------------------------------------------------

ATOM_NAMES = ("a", "b", "c")


def random_signature(rng: random.Random) -> Signature:
    """Random gamma/conflict structure over the three corpus atoms; a pair
    never carries both a communication and a conflict."""
    labels = [EventLabel(n) for n in ATOM_NAMES]
    gamma = {}
    conflicts = []
    pairs = [(labels[i], labels[j])
             for i in range(len(labels)) for j in range(i, len(labels))]
    for a, b in pairs:
        roll = rng.random()
        if roll < 0.25:
            gamma[(a, b)] = EventLabel(f"g_{a.name}{b.name}")
        elif roll < 0.45 and a != b:
            conflicts.append((a, b))
    events = set(labels) | set(gamma.values())
    return make_signature(events, gamma, conflicts)


def random_term(rng: random.Random, depth: int = 4) -> Term:
    """Random closed term over {atom, delta, ., +, ||, |, full merge,
    encapsulation} with at most three distinct atoms."""
    if depth <= 0 or rng.random() < 0.3:
        if rng.random() < 0.08:
            return Atom(DELTA)
        return Atom(EventLabel(rng.choice(ATOM_NAMES)))
    op = rng.choices(
        ("alt", "seq", "par", "comm", "fullpar", "encap"),
        weights=(5, 5, 4, 2, 3, 1),
    )[0]
    if op == "encap":
        H = frozenset({EventLabel(rng.choice(ATOM_NAMES))})
        return Encap(H, random_term(rng, depth - 1))
    l = random_term(rng, depth - 1)
    r = random_term(rng, depth - 1)
    if op == "alt":
        return Alt(l, r)
    if op == "seq":
        return Seq(l, r)
    if op == "par":
        return Par(l, r)
    if op == "comm":
        return Comm(l, r)
    return FullPar(l, r)


def corpus(n: int = 100, seed: int = 20260823, max_events: int = 10):
    """A reproducible corpus of (term, signature) pairs whose compiled event
    structures stay desk-sized (so the hp checker is applicable)."""
    from aptc.pes import compile_basic
    from aptc.rewrite import normalize

    rng = random.Random(seed)
    out = []
    while len(out) < n:
        sig = random_signature(rng)
        t = random_term(rng, depth=4)
        norm, _ = normalize(t, sig)
        p = compile_basic(norm)
        if len(p.labels) > max_events:
            continue
        ref = tree_to_term(behavior(t, sig))
        q = compile_basic(ref)
        if len(q.labels) > max_events:
            continue
        out.append((t, sig))
    return out
