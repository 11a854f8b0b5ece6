"""Truly concurrent bisimulation equivalences.

Checkers over prime event structures:

* ``strong_bisim`` / ``weak_bisim`` with modes pomset, step, hp, hhp;
* ``branching_bisim_pes`` / ``rooted_branching_bisim_pes``.

Checkers over finite step-labelled transition systems (for recursive
specifications):

* ``strong_step_bisim_lts`` and ``branching_step_bisim_lts``.

All PES checkers run the standard fixed-point pruning: start from the full
candidate relation (configurations, or posetal triples for hp/hhp) and
delete pairs that fail a challenge until nothing changes; the structures are
related iff the pair of empty configurations survives.  hhp additionally
prunes pairs whose restriction to a smaller pair of configurations was
pruned (downward closure).  The history-preserving games use single-event
extensions of the posetal product.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Optional

from .errors import ResourceBound
from .pes import (
    PES, Pomset, configurations, is_terminating, pomset_transitions,
    step_transitions,
)
from .terms import TAU

__all__ = [
    "strong_bisim", "weak_bisim", "branching_bisim_pes",
    "rooted_branching_bisim_pes", "strong_step_bisim_lts",
    "branching_step_bisim_lts", "MODES",
]

MODES = ("pomset", "step", "hp", "hhp")

_EVENT_CAPS = {"pomset": 20, "step": 20, "hp": 12, "hhp": 12}


def _check_cap(p1: PES, p2: PES, mode: str) -> None:
    cap = _EVENT_CAPS[mode]
    for p in (p1, p2):
        if len(p.labels) > cap:
            raise ResourceBound(
                f"{mode} bisimulation is capped at {cap} events per side; "
                f"got {len(p.labels)}"
            )


def _silent(p: PES, e: str) -> bool:
    return p.labels[e].kind == "silent"


def _tau_successors(p: PES, c) -> list:
    """Configurations one silent event beyond c."""
    return [
        frozenset(c | {e}) for e in p.labels
        if e not in c and _silent(p, e) and p.causes(e) <= c
        and all(not p.conflicts_with(e, x) for x in c)
    ]


def _tau_reach(p: PES, c) -> set:
    """Configurations reachable from c by silent events only (includes c)."""
    seen = {c}
    frontier = [c]
    while frontier:
        d = frontier.pop()
        for d2 in _tau_successors(p, d):
            if d2 not in seen:
                seen.add(d2)
                frontier.append(d2)
    return seen


def _weakly_terminating(p: PES, c) -> bool:
    return any(is_terminating(p, d) for d in _tau_reach(p, c))


# ---------------------------------------------------------------------------
# Strong and weak pomset/step bisimulation
# ---------------------------------------------------------------------------


def _flat_bisim(p1: PES, p2: PES, mode: str, weak: bool) -> bool:
    cfg1, cfg2 = configurations(p1), configurations(p2)
    trans = pomset_transitions if mode == "pomset" else step_transitions
    t1 = {c: list(trans(p1, c)) for c in cfg1}
    t2 = {c: list(trans(p2, c)) for c in cfg2}
    term = _weakly_terminating if weak else is_terminating
    term1 = {c: term(p1, c) for c in cfg1}
    term2 = {c: term(p2, c) for c in cfg2}

    def vis(x):
        if mode == "step":
            return tuple(l for l in x if l.kind != "silent")
        keep = {e for e, l in x.labels if l.is_visible}
        return Pomset(
            tuple(e for e in x.events if e in keep),
            tuple((e, l) for e, l in x.labels if e in keep),
            frozenset((a, b) for a, b in x.order
                      if a in keep and b in keep),
        )

    def same(x, y) -> bool:
        return x == y if mode == "step" else x.iso(y)

    R = {
        (c1, c2)
        for c1 in cfg1 for c2 in cfg2
        if term1[c1] == term2[c2]
    }

    def ok_dir(ca, cb, pb, ta, tb, orient) -> bool:
        for x, d1 in ta[ca]:
            if not weak:
                if not any(same(x, y) and orient(d1, d2)
                           for y, d2 in tb[cb]):
                    return False
                continue
            xv = vis(x)
            if (not xv) if mode == "step" else (not xv.events):
                # silent challenge: respond with zero or more silent events
                if not any(orient(d1, d2) for d2 in _tau_reach(pb, cb)):
                    return False
                continue
            if not any(same(xv, vis(y)) and orient(d1, d2)
                       for y, d2 in tb[cb]):
                return False
        return True

    changed = True
    while changed:
        changed = False
        for c1, c2 in list(R):
            fwd = ok_dir(c1, c2, p2, t1, t2,
                         lambda d1, d2: (d1, d2) in R)
            bwd = fwd and ok_dir(c2, c1, p1, t2, t1,
                                 lambda d1, d2: (d2, d1) in R)
            if not (fwd and bwd):
                R.discard((c1, c2))
                changed = True
    return (frozenset(), frozenset()) in R


# ---------------------------------------------------------------------------
# (Hereditary) history-preserving bisimulation
# ---------------------------------------------------------------------------


def _hp_triples(p1: PES, p2: PES, weak: bool):
    """All reachable posetal triples (c1, c2, f) grown one matched event at
    a time; for the weak game f spans visible events only and silent events
    extend either side alone."""

    def order_ok(f, e1, e2):
        return all(
            (((x, e1) in p1.order) == ((y, e2) in p2.order))
            and (((e1, x) in p1.order) == ((e2, y) in p2.order))
            for x, y in f
        )

    start = (frozenset(), frozenset(), frozenset())
    seen = {start}
    frontier = [start]
    while frontier:
        c1, c2, f = frontier.pop()
        ext1 = [e for e in p1.labels if e not in c1 and p1.causes(e) <= c1
                and all(not p1.conflicts_with(e, x) for x in c1)]
        ext2 = [e for e in p2.labels if e not in c2 and p2.causes(e) <= c2
                and all(not p2.conflicts_with(e, x) for x in c2)]
        nxt = []
        if weak:
            for e1 in ext1:
                if _silent(p1, e1):
                    nxt.append((frozenset(c1 | {e1}), c2, f))
            for e2 in ext2:
                if _silent(p2, e2):
                    nxt.append((c1, frozenset(c2 | {e2}), f))
        for e1, e2 in itertools.product(ext1, ext2):
            if weak and (_silent(p1, e1) or _silent(p2, e2)):
                continue
            if p1.labels[e1] != p2.labels[e2]:
                continue
            if not order_ok(f, e1, e2):
                continue
            nxt.append((frozenset(c1 | {e1}), frozenset(c2 | {e2}),
                        frozenset(f | {(e1, e2)})))
        if not weak:
            # silent events participate in the bijection in the strong game
            pass
        for tr in nxt:
            if tr not in seen:
                seen.add(tr)
                frontier.append(tr)
    return seen


def _enabled(p: PES, c) -> list:
    return [
        e for e in p.labels if e not in c and p.causes(e) <= c
        and all(not p.conflicts_with(e, x) for x in c)
    ]


def _max_steps(p: PES, events) -> list:
    """Maximal sets of pairwise-concurrent events among the given enabled
    events (the steps a scheduler cannot enlarge)."""
    cliques = [frozenset()]
    for e in sorted(events):
        cliques += [
            c | {e} for c in cliques
            if all(not p.conflicts_with(e, x) for x in c)
        ]
    cliques = [c for c in cliques if c]
    return [c for c in cliques if not any(c < d for d in cliques)]


def _hp_bisim(p1: PES, p2: PES, hereditary: bool, weak: bool) -> bool:
    """(Hereditary) history-preserving game.  Challenges are maximal steps
    of simultaneously enabled concurrent events -- firing a step commits
    against the alternatives it excludes -- answered by an equally labelled
    step extending the history isomorphism.  The hereditary game also
    requires every triple to stay related when a matched maximal pair is
    undone (downward closure)."""
    R = _hp_triples(p1, p2, weak)
    term1 = _weakly_terminating if weak else is_terminating

    def step_challenges(p, c):
        events = [e for e in _enabled(p, c)
                  if not (weak and _silent(p, e))]
        return _max_steps(p, events)

    def responses(pb, cb, labels_needed):
        """Candidate response steps at cb: tuples of distinct enabled
        events whose label sequence matches labels_needed."""
        pool = [e for e in _enabled(pb, cb)
                if not (weak and _silent(pb, e))]
        by_label: dict = {}
        for e in pool:
            by_label.setdefault(pb.labels[e], []).append(e)

        def build(i, used):
            if i == len(labels_needed):
                yield ()
                return
            for e in by_label.get(labels_needed[i], ()):
                if e in used:
                    continue
                for rest in build(i + 1, used | {e}):
                    yield (e,) + rest

        return build(0, frozenset())

    def matched(tr, side) -> bool:
        c1, c2, f = tr
        pa, pb = (p1, p2) if side == 0 else (p2, p1)
        ca, cb = (c1, c2) if side == 0 else (c2, c1)
        if weak:
            for e1 in _enabled(pa, ca):
                if _silent(pa, e1):
                    d1 = frozenset(ca | {e1})
                    if not _tau_matchable(tr, d1, side):
                        return False
        for X in step_challenges(pa, ca):
            xs = sorted(X)
            labels_needed = [pa.labels[e] for e in xs]
            d1 = frozenset(ca | X)
            ok = False
            for ys in responses(pb, cb, labels_needed):
                pairs = (set(zip(xs, ys)) if side == 0
                         else set(zip(ys, xs)))
                d2 = frozenset(cb | set(ys))
                nt = ((d1, d2, frozenset(f | pairs)) if side == 0
                      else (d2, d1, frozenset(f | pairs)))
                if nt in R:
                    ok = True
                    break
            if not ok and weak:
                ok = _weak_step_matchable(tr, xs, labels_needed, side)
            if not ok:
                return False
        return True

    def _tau_matchable(tr, d1, side) -> bool:
        # respond to a tau with any number of taus, walking surviving triples
        c1, c2, f = tr
        cb = c2 if side == 0 else c1
        pb = p2 if side == 0 else p1
        for d2 in _tau_reach(pb, cb):
            nt = (d1, d2, f) if side == 0 else (d2, d1, f)
            if nt in R:
                return True
        return False

    def _weak_step_matchable(tr, xs, labels_needed, side) -> bool:
        # respond with taus, then the visible step, then more taus
        c1, c2, f = tr
        ca, cb = (c1, c2) if side == 0 else (c2, c1)
        pb = p2 if side == 0 else p1
        d1 = frozenset(ca | set(xs))
        for mid in _tau_reach(pb, cb):
            for ys in responses(pb, mid, labels_needed):
                pairs = (set(zip(xs, ys)) if side == 0
                         else set(zip(ys, xs)))
                for d2 in _tau_reach(pb, frozenset(mid | set(ys))):
                    nt = ((d1, d2, frozenset(f | pairs)) if side == 0
                          else (d2, d1, frozenset(f | pairs)))
                    if nt in R:
                        return True
        return False

    changed = True
    while changed:
        changed = False
        for tr in list(R):
            c1, c2, f = tr
            if term1(p1, c1) != term1(p2, c2):
                R.discard(tr)
                changed = True
                continue
            if not matched(tr, 0) or not matched(tr, 1):
                R.discard(tr)
                changed = True
                continue
            if hereditary:
                # downward closure: removing a matched maximal pair must
                # leave a surviving triple (f is an order iso, so e1 is
                # maximal in c1 exactly when e2 is maximal in c2)
                bad = False
                for e1, e2 in f:
                    if any((e1, x) in p1.order for x in c1):
                        continue
                    reduced = (frozenset(c1 - {e1}), frozenset(c2 - {e2}),
                               frozenset(f - {(e1, e2)}))
                    if reduced not in R:
                        bad = True
                        break
                if bad:
                    R.discard(tr)
                    changed = True
    return (frozenset(), frozenset(), frozenset()) in R


def strong_bisim(p1: PES, p2: PES, mode: str = "pomset") -> bool:
    """Strong truly concurrent bisimilarity in the given mode."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    _check_cap(p1, p2, mode)
    if mode in ("pomset", "step"):
        return _flat_bisim(p1, p2, mode, weak=False)
    return _hp_bisim(p1, p2, hereditary=(mode == "hhp"), weak=False)


def weak_bisim(p1: PES, p2: PES, mode: str = "pomset") -> bool:
    """Weak truly concurrent bisimilarity (silent events abstracted)."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    _check_cap(p1, p2, mode)
    if mode in ("pomset", "step"):
        return _flat_bisim(p1, p2, mode, weak=True)
    return _hp_bisim(p1, p2, hereditary=(mode == "hhp"), weak=True)


# ---------------------------------------------------------------------------
# Branching bisimulation on PES
# ---------------------------------------------------------------------------


def _branching_relation(p1: PES, p2: PES):
    cfg1, cfg2 = configurations(p1), configurations(p2)

    def challenges(p, c):
        """Visible step transitions plus singleton silent steps (a
        multi-layer challenge cannot be posed in one move, or it could
        never be answered across an inert silent step)."""
        out = []
        for labels, d in step_transitions(p, c):
            kinds = {l.kind for l in labels}
            if kinds == {"silent"}:
                if len(labels) == 1:
                    out.append(("tau", None, d))
            elif "silent" not in kinds:
                out.append(("vis", labels, d))
        return out

    t1 = {c: challenges(p1, c) for c in cfg1}
    t2 = {c: challenges(p2, c) for c in cfg2}
    R = set(itertools.product(cfg1, cfg2))

    def inert_reach(pb, c2, c1, R, flip):
        """Silent-reachable configurations with every stop related to c1."""
        rel = (lambda d: (d, c1) in R) if flip else (lambda d: (c1, d) in R)
        seen = {c2}
        frontier = [c2]
        while frontier:
            d = frontier.pop()
            for d2 in _tau_successors(pb, d):
                if d2 not in seen and rel(d2):
                    seen.add(d2)
                    frontier.append(d2)
        return seen

    def ok(c1, c2, pa, pb, ta, flip) -> bool:
        pair = (lambda a, b: (b, a) in R) if flip else (lambda a, b: (a, b) in R)
        mids = None
        for kind, x, d1 in ta[c1]:
            if kind == "tau":
                if pair(d1, c2):
                    continue
            if mids is None:
                mids = inert_reach(pb, c2, c1, R, flip)
            found = False
            for mid in mids:
                for kind2, y, d2 in (t2 if not flip else t1)[mid]:
                    if kind == "tau":
                        if kind2 == "tau" and pair(d1, d2):
                            found = True
                            break
                    else:
                        if kind2 == "vis" and x == y and pair(d1, d2):
                            found = True
                            break
                if found:
                    break
            if not found:
                return False
        if is_terminating(pa, c1):
            if mids is None:
                mids = inert_reach(pb, c2, c1, R, flip)
            if not any(is_terminating(pb, mid) for mid in mids):
                return False
        return True

    changed = True
    while changed:
        changed = False
        for c1, c2 in list(R):
            if not ok(c1, c2, p1, p2, t1, False) \
                    or not ok(c2, c1, p2, p1, t2, True):
                R.discard((c1, c2))
                changed = True
    return R, t1, t2


def branching_bisim_pes(p1: PES, p2: PES) -> bool:
    """Branching pomset bisimilarity (silent steps are singletons)."""
    _check_cap(p1, p2, "pomset")
    R, _, _ = _branching_relation(p1, p2)
    return (frozenset(), frozenset()) in R


def rooted_branching_bisim_pes(p1: PES, p2: PES) -> bool:
    """Rooted branching pomset bisimilarity: the first move is matched
    strongly (silent by silent, visible pomset by isomorphic pomset), after
    which the plain branching game applies."""
    _check_cap(p1, p2, "pomset")
    R, t1, t2 = _branching_relation(p1, p2)
    root1, root2 = frozenset(), frozenset()

    def root_ok(ta, tb, flip) -> bool:
        pair = (lambda a, b: (b, a) in R) if flip else (lambda a, b: (a, b) in R)
        for kind, x, d1 in ta[root1]:
            found = False
            for kind2, y, d2 in tb[root2]:
                if kind != kind2:
                    continue
                if kind == "vis" and x != y:
                    continue
                if pair(d1, d2):
                    found = True
                    break
            if not found:
                return False
        return True

    if is_terminating(p1, root1) != is_terminating(p2, root2):
        return False
    return root_ok(t1, t2, False) and root_ok(t2, t1, True)


# ---------------------------------------------------------------------------
# Step LTS checkers (partition refinement)
# ---------------------------------------------------------------------------

_TICK = "tick"
_TAU_STEP = (str(TAU),)


def _lts_states_and_moves(ltss):
    states = []
    moves = {}
    for i, l in enumerate(ltss):
        for s in range(len(l.states)):
            st = (i, s)
            states.append(st)
            outs = []
            for src, step, dst in l.transitions:
                if src != s:
                    continue
                outs.append((step, _TICK if dst < 0 else (i, dst)))
            moves[st] = outs
    return states, moves


def _refine(ltss, branching: bool):
    states, moves = _lts_states_and_moves(ltss)
    block = {st: 0 for st in states}

    def signature(st):
        if not branching:
            return frozenset(
                (step, _TICK if tgt == _TICK else block[tgt])
                for step, tgt in moves[st]
            )
        # inert closure: walk silent steps that stay inside the block
        sig = set()
        seen = {st}
        frontier = [st]
        while frontier:
            cur = frontier.pop()
            for step, tgt in moves[cur]:
                if tgt == _TICK:
                    sig.add((step, _TICK))
                    continue
                if step == _TAU_STEP and block[tgt] == block[st]:
                    if tgt not in seen:
                        seen.add(tgt)
                        frontier.append(tgt)
                    continue
                sig.add((step, block[tgt]))
        return frozenset(sig)

    while True:
        sigs = {st: (block[st], signature(st)) for st in states}
        numbering = {}
        new = {}
        for st in states:
            key = sigs[st]
            if key not in numbering:
                numbering[key] = len(numbering)
            new[st] = numbering[key]
        if new == block:
            return block, moves
        block = new


def strong_step_bisim_lts(l1, l2) -> bool:
    """Strong step bisimilarity of two finite step LTSs."""
    block, _ = _refine((l1, l2), branching=False)
    return block[(0, l1.initial)] == block[(1, l2.initial)]


def branching_step_bisim_lts(l1, l2, rooted: bool = True) -> bool:
    """(Rooted) branching step bisimilarity of two finite step LTSs.
    Silent steps are singleton-tau steps; a silent step is inert when it
    stays within the current block."""
    block, moves = _refine((l1, l2), branching=True)
    r1, r2 = (0, l1.initial), (1, l2.initial)
    if not rooted:
        return block[r1] == block[r2]

    def root_ok(a, b):
        for step, tgt in moves[a]:
            ok = any(
                step == step2 and (
                    (tgt == _TICK and tgt2 == _TICK)
                    or (tgt != _TICK and tgt2 != _TICK
                        and block[tgt] == block[tgt2])
                )
                for step2, tgt2 in moves[b]
            )
            if not ok:
                return False
        return True

    return block[r1] == block[r2] and root_ok(r1, r2) and root_ok(r2, r1)
