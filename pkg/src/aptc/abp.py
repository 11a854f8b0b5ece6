"""Alternating bit protocol models and their correctness check.

Two variants over a finite data domain:

* ``parallel``: sender and receiver each read their own copy of the input
  simultaneously (r_A1 || r_A2); inputs of different data are declared
  conflicting.  On a fresh frame the receiver delivers both output copies
  as one joint step (s_C1 || s_C2), absorbing the sender's shadow marker;
  on a stale retransmission the shadow evaporates and nothing is
  re-delivered.
* ``traditional``: a single input r_A and a single output s_C; the partner
  side carries shadow events that synchronize with them, so the composition
  stays in lockstep without a second real port.

Both compose receiver and sender with the full merge, encapsulate the
internal send/receive pairs (they must communicate), and abstract from the
resulting internal communications.  Correctness: the composition is rooted
branching step bisimilar to the one-datum buffer specification.

The receiver's acknowledge phase continues with "fresh round or immediate
re-acknowledge" (R + R'), which the deadlock-freedom of the composition
forces; a lost frame leaves the sender retransmitting, and only the R'
alternative can answer it.  The optional fault swaps a lost-frame
acknowledgement to the current bit, which makes the sender drop a datum --
an observable protocol bug used as a negative control.
"""

from __future__ import annotations

from dataclasses import dataclass

from .equiv import branching_step_bisim_lts
from .lts import StepLTS, explore
from .terms import (
    Abstract, Alt, Atom, Encap, EventLabel, FullPar, Par, RecCall, RecSpec,
    Seq, Signature, Term, alt_of, make_signature, seq_of, shadow,
)

__all__ = ["AbpModel", "build_abp", "verify_abp"]

BITS = ("0", "1")
BOT = "bot"


def _lab(name: str, *args: str) -> EventLabel:
    return EventLabel(name, tuple(args))


@dataclass(frozen=True)
class AbpModel:
    signature: Signature
    specs: dict
    system: Term
    buffer: Term


def _domain(size: int) -> tuple[str, ...]:
    return tuple(f"d{i + 1}" for i in range(size))


def _flip(b: str) -> str:
    return "1" if b == "0" else "0"


def build_abp(variant: str = "parallel", delta_size: int = 2,
              faulty: bool = False) -> AbpModel:
    """Build the composed protocol and its buffer specification."""
    if variant not in ("parallel", "traditional"):
        raise ValueError("variant must be 'parallel' or 'traditional'")
    dom = _domain(delta_size)
    par = variant == "parallel"

    in_s = "rA1" if par else "rA"  # sender-side input port
    in_r = "rA2" if par else None  # receiver-side input port (parallel only)
    out_s = "sC1" if par else None  # sender-side output copy (parallel only)
    out_r = "sC2" if par else "sC"  # receiver-side output port

    def A(name, *args):
        return Atom(_lab(name, *args))

    eqs: dict[str, Term] = {}
    for b in BITS:
        nb = _flip(b)

        # sender
        eqs[f"S{b}"] = alt_of([
            Seq(A(in_s, d), RecCall(f"T{d}_{b}", "ABP")) for d in dom
        ])
        for d in dom:
            send = [
                Seq(A("sB", dp, b),
                    Atom(shadow(_lab(out_s if par else out_r, dp), 1)))
                for dp in dom
            ] + [A("sB", BOT)]
            eqs[f"T{d}_{b}"] = Seq(alt_of(send), RecCall(f"U{d}_{b}", "ABP"))
            eqs[f"U{d}_{b}"] = Alt(
                Seq(A("rD", b), RecCall(f"S{nb}", "ABP")),
                Seq(Alt(A("rD", nb), A("rD", BOT)),
                    RecCall(f"T{d}_{b}", "ABP")),
            )

        # receiver
        eqs[f"R{b}"] = alt_of([
            Seq(A(in_r, d) if par else Atom(shadow(_lab(in_s, d), 1)),
                RecCall(f"Rp{b}", "ABP"))
            for d in dom
        ])
        ack_ok = RecCall(f"Q{b}", "ABP")
        ack_stale = RecCall(f"Q{nb}", "ABP")
        eqs[f"Rp{b}"] = alt_of(
            [
                Seq(seq_of([
                    A("rB", dp, b),
                    Par(A(out_s, dp), A(out_r, dp)) if par else A(out_r, dp),
                ]), ack_ok)
                for dp in dom
            ]
            + [Seq(A("rB", dp, nb), ack_stale) for dp in dom]
            + [Seq(A("rB", BOT), ack_ok if faulty else ack_stale)]
        )
        # after acknowledging, either a fresh round starts or the lost
        # frame is re-acknowledged
        eqs[f"Q{b}"] = Seq(
            Alt(A("sD", b), A("sD", BOT)),
            Alt(RecCall(f"R{nb}", "ABP"), RecCall(f"Rp{nb}", "ABP")),
        )

    gamma = {}
    H: set[EventLabel] = set()
    for b in BITS:
        for dp in dom:
            gamma[(_lab("sB", dp, b), _lab("rB", dp, b))] = _lab("cB", dp, b)
        gamma[(_lab("sD", b), _lab("rD", b))] = _lab("cD", b)
        H |= {_lab("sD", b), _lab("rD", b)}
        for dp in dom:
            H |= {_lab("sB", dp, b), _lab("rB", dp, b)}
    gamma[(_lab("sB", BOT), _lab("rB", BOT))] = _lab("cB", BOT)
    gamma[(_lab("sD", BOT), _lab("rD", BOT))] = _lab("cD", BOT)
    H |= {_lab("sB", BOT), _lab("rB", BOT), _lab("sD", BOT), _lab("rD", BOT)}

    I = {_lab("cB", BOT), _lab("cD", BOT)}
    for b in BITS:
        I.add(_lab("cD", b))
        for dp in dom:
            I.add(_lab("cB", dp, b))

    conflicts = []
    if par:
        conflicts = [
            (_lab(in_s, d1), _lab(in_r, d2))
            for d1 in dom for d2 in dom if d1 != d2
        ]

    events = set(H) | set(I)
    for d in dom:
        events.add(_lab(in_s, d))
        events.add(_lab(out_r, d))
        if par:
            events.add(_lab(in_r, d))
            events.add(_lab(out_s, d))
    sig = make_signature(events, gamma, conflicts)

    specs = {"ABP": RecSpec("ABP", eqs)}
    system = Abstract(
        frozenset(I),
        Encap(frozenset(H),
              FullPar(RecCall("R0", "ABP"), RecCall("S0", "ABP"))),
    )

    # the one-datum buffer specification
    if par:
        buf = alt_of([
            seq_of([
                Par(A(in_s, d), A(in_r, d)),
                Par(A(out_s, dp), A(out_r, dp)),
                RecCall("B", "BUF"),
            ])
            for d in dom for dp in dom
        ])
    else:
        buf = alt_of([
            seq_of([A(in_s, d), A(out_r, dp), RecCall("B", "BUF")])
            for d in dom for dp in dom
        ])
    specs["BUF"] = RecSpec("BUF", {"B": buf})

    return AbpModel(sig, specs, system, RecCall("B", "BUF"))


def verify_abp(variant: str = "parallel", delta_size: int = 2,
               faulty: bool = False, max_states: int = 20_000
               ) -> tuple[bool, StepLTS, StepLTS]:
    """Explore the composed protocol and its buffer specification and decide
    rooted branching step bisimilarity.  Returns (related, system LTS,
    buffer LTS)."""
    model = build_abp(variant, delta_size, faulty)
    sys_lts = explore(model.system, model.signature, model.specs, max_states)
    buf_lts = explore(model.buffer, model.signature, model.specs, max_states)
    return (
        branching_step_bisim_lts(sys_lts, buf_lts, rooted=True),
        sys_lts, buf_lts,
    )
