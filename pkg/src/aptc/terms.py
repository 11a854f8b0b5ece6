"""Term language for the truly concurrent process algebra workbench.

This module defines event labels, signatures (communication function,
conflict relation, renamings, finite data domains), the abstract syntax of
process terms, recursive specifications, and a concrete-syntax parser /
canonical printer for the whole spec-file format.

All values are immutable; every operation is a pure function.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union


# ---------------------------------------------------------------------------
# Event labels
# ---------------------------------------------------------------------------

_KIND_ORDER = {"visible": 0, "silent": 1, "deadlock": 2, "shadow": 3}


@dataclass(frozen=True)
class EventLabel:
    """An event label: a named action over ground data arguments.

    kind is one of ``visible``, ``silent`` (the reserved tau), ``deadlock``
    (the reserved delta) and ``shadow``.  A shadow label carries the label it
    shadows and a positive index; distinct (event, index) pairs are distinct
    shadows.
    """

    name: str
    args: tuple[str, ...] = ()
    kind: str = "visible"
    shadow_of: Optional[tuple["EventLabel", int]] = None

    def __post_init__(self) -> None:
        if self.kind == "silent" and self.name != "tau":
            raise ValueError("silent label must be the reserved tau")
        if self.kind == "deadlock" and self.name != "delta":
            raise ValueError("deadlock label must be the reserved delta")
        if (self.kind == "shadow") != (self.shadow_of is not None):
            raise ValueError("shadow_of present iff kind=shadow")

    def key(self) -> tuple:
        base = self.shadow_of[0].key() if self.shadow_of else ()
        idx = self.shadow_of[1] if self.shadow_of else 0
        return (_KIND_ORDER[self.kind], self.name, self.args, base, idx)

    def __lt__(self, other: "EventLabel") -> bool:
        return self.key() < other.key()

    @property
    def is_visible(self) -> bool:
        return self.kind == "visible"

    def __str__(self) -> str:
        if self.kind == "silent":
            return "tau"
        if self.kind == "deadlock":
            return "delta"
        if self.kind == "shadow":
            base, idx = self.shadow_of  # type: ignore[misc]
            return f"shadow[{base},{idx}]"
        if self.args:
            return f"{self.name}({','.join(self.args)})"
        return self.name


TAU = EventLabel("tau", (), "silent")
DELTA = EventLabel("delta", (), "deadlock")


def shadow(base: EventLabel, index: int) -> EventLabel:
    """The index-th shadow of a visible event."""
    return EventLabel("shadow", (), "shadow", (base, index))


# ---------------------------------------------------------------------------
# Signature
# ---------------------------------------------------------------------------


class SignatureError(ValueError):
    """A signature invariant is violated."""


def _pair(a: EventLabel, b: EventLabel) -> tuple[EventLabel, EventLabel]:
    return (a, b) if a.key() <= b.key() else (b, a)


@dataclass(frozen=True)
class Signature:
    """Event alphabet with communication, conflict, renaming and domains."""

    events: frozenset[EventLabel] = frozenset()
    gamma: Mapping[tuple[EventLabel, EventLabel], EventLabel] = field(
        default_factory=dict
    )
    conflicts: frozenset[tuple[EventLabel, EventLabel]] = frozenset()
    renamings: Mapping[str, Mapping[EventLabel, EventLabel]] = field(
        default_factory=dict
    )
    domains: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def gamma_get(self, a: EventLabel, b: EventLabel) -> Optional[EventLabel]:
        if not (a.is_visible and b.is_visible):
            return None
        return self.gamma.get(_pair(a, b))

    def is_communicator(self, a: EventLabel) -> bool:
        if not a.is_visible:
            return False
        return any(a in p for p in self.gamma)

    def in_conflict(self, a: EventLabel, b: EventLabel) -> bool:
        return _pair(a, b) in self.conflicts

    def rename_label(self, fname: str, a: EventLabel) -> EventLabel:
        if not a.is_visible:
            return a
        f = self.renamings.get(fname)
        if f is None:
            raise SignatureError(f"unknown renaming {fname!r}")
        return f.get(a, a)


def make_signature(
    events: Iterable[EventLabel] = (),
    gamma: Mapping[tuple[EventLabel, EventLabel], EventLabel] | None = None,
    conflicts: Iterable[tuple[EventLabel, EventLabel]] = (),
    renamings: Mapping[str, Mapping[EventLabel, EventLabel]] | None = None,
    domains: Mapping[str, Sequence[str]] | None = None,
) -> Signature:
    """Build a Signature, symmetrizing gamma and the conflict relation."""
    g: dict[tuple[EventLabel, EventLabel], EventLabel] = {}
    for (a, b), c in (gamma or {}).items():
        prev = g.get(_pair(a, b))
        if prev is not None and prev != c:
            raise SignatureError(f"gamma({a},{b}) defined twice inconsistently")
        g[_pair(a, b)] = c
    cf = frozenset(_pair(a, b) for a, b in conflicts)
    return Signature(
        events=frozenset(events),
        gamma=g,
        conflicts=cf,
        renamings={k: dict(v) for k, v in (renamings or {}).items()},
        domains={k: tuple(v) for k, v in (domains or {}).items()},
    )


def validate_signature(sig: Signature) -> None:
    """Check every signature invariant; raise SignatureError listing failures."""
    problems: list[str] = []
    for (a, b), c in sig.gamma.items():
        if not (a.is_visible and b.is_visible and c.is_visible):
            problems.append(
                f"gamma({a},{b})={c}: gamma is only defined on visible events"
            )
    for a, b in sig.conflicts:
        if a == b:
            problems.append(f"conflict ({a},{a}): irreflexivity violated")
    for name, f in sig.renamings.items():
        for a, b in f.items():
            if a == TAU and b != TAU:
                problems.append(f"renaming {name}: must map tau to tau")
            if a.kind in ("deadlock",):
                problems.append(f"renaming {name}: cannot rename delta")
    if problems:
        raise SignatureError("; ".join(problems))


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Term:
    """Base class of process terms."""


@dataclass(frozen=True)
class Atom(Term):
    label: EventLabel


@dataclass(frozen=True)
class Seq(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Alt(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Par(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Comm(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class FullPar(Term):
    """Full merge.  ``strict`` marks a merge already committed to lockstep
    alignment (arises only as an internal residue of exploration)."""

    left: Term
    right: Term
    strict: bool = False


@dataclass(frozen=True)
class ConflictElim(Term):
    body: Term


@dataclass(frozen=True)
class Unless(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Encap(Term):
    labels: frozenset[EventLabel]
    body: Term


@dataclass(frozen=True)
class Abstract(Term):
    labels: frozenset[EventLabel]
    body: Term


@dataclass(frozen=True)
class Project(Term):
    depth: int
    body: Term


@dataclass(frozen=True)
class Rename(Term):
    fname: str
    body: Term


@dataclass(frozen=True)
class RecCall(Term):
    var: str
    spec: str


@dataclass(frozen=True)
class RecSpec:
    """A named finite set of recursion equations X_i = t_i."""

    name: str
    equations: Mapping[str, Term]

    def __post_init__(self) -> None:
        for var, rhs in self.equations.items():
            for v, s in closed_variables(rhs):
                if s == self.name and v not in self.equations:
                    raise ValueError(
                        f"spec {self.name}: undefined variable {v} in body of {var}"
                    )


@dataclass(frozen=True)
class SpecFile:
    signature: Signature
    recspecs: Mapping[str, RecSpec]
    terms: Mapping[str, Term]


# ---------------------------------------------------------------------------
# Structural helpers
# ---------------------------------------------------------------------------


def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, (Seq, Alt, Par, Comm, FullPar, Unless)):
        return (t.left, t.right)
    if isinstance(t, (ConflictElim, Encap, Abstract, Project, Rename)):
        return (t.body,)
    return ()


def closed_variables(t: Term) -> frozenset[tuple[str, str]]:
    """All (variable, spec-name) recursion calls reachable in t."""
    out: set[tuple[str, str]] = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, RecCall):
            out.add((s.var, s.spec))
        else:
            stack.extend(children(s))
    return frozenset(out)


def flatten(t: Term, cls: type) -> list[Term]:
    """Flatten nested binary nodes of an AC operator class into a list."""
    if isinstance(t, cls) and not (isinstance(t, FullPar) and t.strict):
        return flatten(t.left, cls) + flatten(t.right, cls)
    return [t]


def alt_of(parts: Sequence[Term]) -> Term:
    """Right-fold a nonempty sequence into an Alt chain (delta if empty)."""
    if not parts:
        return Atom(DELTA)
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Alt(p, out)
    return out


def seq_of(parts: Sequence[Term]) -> Term:
    if not parts:
        raise ValueError("empty sequence")
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Seq(p, out)
    return out


def par_of(parts: Sequence[Term]) -> Term:
    if not parts:
        raise ValueError("empty parallel composition")
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Par(p, out)
    return out


_TAGS = {
    Atom: 0, Seq: 1, Alt: 2, Par: 3, Comm: 4, FullPar: 5, ConflictElim: 6,
    Unless: 7, Encap: 8, Abstract: 9, Project: 10, Rename: 11, RecCall: 12,
}


def term_key(t: Term) -> tuple:
    """Total order key on terms; + and || children are compared as sorted
    multisets, which makes the key invariant under their AC rearrangement."""
    if isinstance(t, Atom):
        return (0, t.label.key())
    if isinstance(t, (Alt, Par)):
        ks = sorted(term_key(c) for c in flatten(t, type(t)))
        return (_TAGS[type(t)], tuple(ks))
    if isinstance(t, FullPar):
        return (5, t.strict, term_key(t.left), term_key(t.right))
    if isinstance(t, (Seq, Comm, Unless)):
        return (_TAGS[type(t)], term_key(t.left), term_key(t.right))
    if isinstance(t, ConflictElim):
        return (6, term_key(t.body))
    if isinstance(t, (Encap, Abstract)):
        labs = tuple(sorted(l.key() for l in t.labels))
        return (_TAGS[type(t)], labs, term_key(t.body))
    if isinstance(t, Project):
        return (10, t.depth, term_key(t.body))
    if isinstance(t, Rename):
        return (11, t.fname, term_key(t.body))
    if isinstance(t, RecCall):
        return (12, t.spec, t.var)
    raise TypeError(f"unknown term node {t!r}")


def eq_ac(t1: Term, t2: Term) -> bool:
    """Equality modulo associativity/commutativity of + and ||."""
    return term_key(t1) == term_key(t2)


# ---------------------------------------------------------------------------
# Canonical printing
# ---------------------------------------------------------------------------

_PREC_ALT = 10
_PREC_UNLESS = 20
_PREC_MERGE = 30
_PREC_SEQ = 40
_PREC_ATOM = 100


def _print(t: Term, prec: int) -> str:
    if isinstance(t, Atom):
        return str(t.label)
    if isinstance(t, Alt):
        parts = sorted(flatten(t, Alt), key=term_key)
        s = " + ".join(_print(p, _PREC_ALT + 1) for p in parts)
        return f"({s})" if prec > _PREC_ALT else s
    if isinstance(t, Par):
        parts = sorted(flatten(t, Par), key=term_key)
        s = " || ".join(_print(p, _PREC_MERGE + 1) for p in parts)
        return f"({s})" if prec > _PREC_MERGE else s
    if isinstance(t, Seq):
        parts: list[Term] = []
        cur: Term = t
        while isinstance(cur, Seq):
            parts.append(cur.left)
            cur = cur.right
        parts.append(cur)
        s = " . ".join(_print(p, _PREC_SEQ + 1) for p in parts)
        return f"({s})" if prec > _PREC_SEQ else s
    if isinstance(t, Comm):
        s = f"{_print(t.left, _PREC_MERGE + 1)} | {_print(t.right, _PREC_MERGE + 1)}"
        return f"({s})" if prec > _PREC_MERGE else s
    if isinstance(t, FullPar):
        op = "<>*" if t.strict else "<>"
        s = f"{_print(t.left, _PREC_MERGE + 1)} {op} {_print(t.right, _PREC_MERGE + 1)}"
        return f"({s})" if prec > _PREC_MERGE else s
    if isinstance(t, Unless):
        s = f"{_print(t.left, _PREC_UNLESS + 1)} unless {_print(t.right, _PREC_UNLESS + 1)}"
        return f"({s})" if prec > _PREC_UNLESS else s
    if isinstance(t, ConflictElim):
        return f"theta({_print(t.body, 0)})"
    if isinstance(t, Encap):
        labs = ", ".join(str(l) for l in sorted(t.labels))
        return f"encap{{{labs}}}({_print(t.body, 0)})"
    if isinstance(t, Abstract):
        labs = ", ".join(str(l) for l in sorted(t.labels))
        return f"hide{{{labs}}}({_print(t.body, 0)})"
    if isinstance(t, Project):
        return f"proj[{t.depth}]({_print(t.body, 0)})"
    if isinstance(t, Rename):
        return f"rho[{t.fname}]({_print(t.body, 0)})"
    if isinstance(t, RecCall):
        return f"<{t.var}|{t.spec}>"
    raise TypeError(f"unknown term node {t!r}")


def canonical_print(t: Term) -> str:
    """Deterministic printing; children of + and || appear in sorted order."""
    return _print(t, 0)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|//[^\n]*)
  | (?P<op><>\*|<>|\|\||->|!=|[.+|(){}\[\],;:=#<>])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<num>\d+)
    """,
    re.VERBOSE,
)

_KEYWORDS = {
    "domain", "events", "comm", "conflict", "rename", "proc", "rec",
    "sum", "in", "for", "if", "theta", "unless", "encap", "hide",
    "proj", "rho", "tau", "delta", "shadow", "gamma",
}


@dataclass
class _Token:
    kind: str  # op | ident | num | eof
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    toks: list[_Token] = []
    pos, line, linestart = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line,
                             pos - linestart + 1)
        if m.lastgroup != "ws":
            toks.append(_Token(m.lastgroup or "", m.group(), line,
                               m.start() - linestart + 1))
        line += m.group().count("\n")
        if "\n" in m.group():
            linestart = m.start() + m.group().rindex("\n") + 1
        pos = m.end()
    toks.append(_Token("eof", "", line, len(text) - linestart + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.domains: dict[str, tuple[str, ...]] = {}
        self.event_templates: list[tuple[str, tuple[str, ...]]] = []
        self.events: set[EventLabel] = set()
        self.gamma: dict[tuple[EventLabel, EventLabel], EventLabel] = {}
        self.conflicts: set[tuple[EventLabel, EventLabel]] = set()
        self.renamings: dict[str, dict[EventLabel, EventLabel]] = {}
        self.recspecs: dict[str, RecSpec] = {}
        self.terms: dict[str, Term] = {}

    # -- token plumbing ----------------------------------------------------
    def peek(self) -> _Token:
        return self.toks[self.i]

    def next(self) -> _Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Token:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return t

    def expect_ident(self) -> str:
        t = self.next()
        if t.kind != "ident":
            raise ParseError(f"expected identifier, found {t.text!r}", t.line, t.col)
        return t.text

    def at(self, text: str) -> bool:
        return self.peek().text == text

    # -- labels ------------------------------------------------------------
    def _constants(self) -> set[str]:
        out: set[str] = set()
        for vals in self.domains.values():
            out.update(vals)
        return out

    def parse_label(self, env: Mapping[str, str]) -> EventLabel:
        """Parse an event reference; env maps bound data variables to values."""
        t = self.peek()
        if t.text == "tau":
            self.next()
            return TAU
        if t.text == "delta":
            self.next()
            return DELTA
        if t.text == "shadow":
            self.next()
            self.expect("[")
            base = self.parse_label(env)
            self.expect(",")
            idx = int(self.next().text)
            self.expect("]")
            return shadow(base, idx)
        name = self.expect_ident()
        args: list[str] = []
        if self.at("("):
            self.next()
            while True:
                a = self.next()
                if a.kind not in ("ident", "num"):
                    raise ParseError("expected data constant", a.line, a.col)
                args.append(env.get(a.text, a.text))
                if self.at(","):
                    self.next()
                    continue
                break
            self.expect(")")
        return EventLabel(name, tuple(args))

    # -- term grammar --------------------------------------------------
    # precedence: unary > . > ||,|,<> > unless > +
    def parse_term(self, env: Mapping[str, str], recctx: Optional[RecSpecCtx] = None) -> Term:
        return self._alt(env, recctx)

    def _alt(self, env, recctx) -> Term:
        t = self._unless(env, recctx)
        while self.at("+"):
            self.next()
            t = Alt(t, self._unless(env, recctx))
        return t

    def _unless(self, env, recctx) -> Term:
        t = self._merge(env, recctx)
        while self.at("unless"):
            self.next()
            t = Unless(t, self._merge(env, recctx))
        return t

    def _merge(self, env, recctx) -> Term:
        t = self._seq(env, recctx)
        while self.peek().text in ("||", "|", "<>", "<>*"):
            op = self.next().text
            rhs = self._seq(env, recctx)
            if op == "||":
                t = Par(t, rhs)
            elif op == "|":
                t = Comm(t, rhs)
            else:
                t = FullPar(t, rhs, strict=(op == "<>*"))
        return t

    def _seq(self, env, recctx) -> Term:
        parts = [self._unary(env, recctx)]
        while self.at("."):
            self.next()
            parts.append(self._unary(env, recctx))
        return seq_of(parts)

    def _unary(self, env, recctx) -> Term:
        t = self.peek()
        if t.text == "(":
            self.next()
            inner = self.parse_term(env, recctx)
            self.expect(")")
            return inner
        if t.text == "tau":
            self.next()
            return Atom(TAU)
        if t.text == "delta":
            self.next()
            return Atom(DELTA)
        if t.text == "shadow":
            return Atom(self.parse_label(env))
        if t.text == "theta":
            self.next()
            self.expect("(")
            inner = self.parse_term(env, recctx)
            self.expect(")")
            return ConflictElim(inner)
        if t.text in ("encap", "hide"):
            self.next()
            self.expect("{")
            labs: set[EventLabel] = set()
            if not self.at("}"):
                labs = set(self._label_list(env))
            self.expect("}")
            self.expect("(")
            inner = self.parse_term(env, recctx)
            self.expect(")")
            return Encap(frozenset(labs), inner) if t.text == "encap" else \
                Abstract(frozenset(labs), inner)
        if t.text == "proj":
            self.next()
            self.expect("[")
            n = int(self.next().text)
            self.expect("]")
            self.expect("(")
            inner = self.parse_term(env, recctx)
            self.expect(")")
            return Project(n, inner)
        if t.text == "rho":
            self.next()
            self.expect("[")
            fname = self.expect_ident()
            self.expect("]")
            self.expect("(")
            inner = self.parse_term(env, recctx)
            self.expect(")")
            return Rename(fname, inner)
        if t.text == "sum":
            self.next()
            var = self.expect_ident()
            self.expect("in")
            dom = self.expect_ident()
            self.expect(":")
            if dom not in self.domains:
                raise ParseError(f"undeclared domain {dom!r}", t.line, t.col)
            save = self.i
            terms = []
            for val in self.domains[dom]:
                self.i = save
                e2 = dict(env)
                e2[var] = val
                terms.append(self._unless(e2, recctx))
            if not self.domains[dom]:
                raise ParseError(f"empty domain {dom!r}", t.line, t.col)
            return alt_of(terms)
        if t.text == "<":
            self.next()
            var = self.expect_ident()
            self.expect("|")
            spec = self.expect_ident()
            self.expect(">")
            return RecCall(var, spec)
        if t.kind == "ident":
            # recursion variable of the enclosing spec, a named proc, or an event
            if recctx is not None and t.text in recctx.variables \
                    and self.toks[self.i + 1].text != "(":
                self.next()
                return RecCall(t.text, recctx.name)
            if t.text in self.terms and self.toks[self.i + 1].text != "(":
                self.next()
                return self.terms[t.text]
            lab = self.parse_label(env)
            self.events.add(lab) if lab.is_visible else None
            return Atom(lab)
        raise ParseError(f"unexpected token {t.text!r}", t.line, t.col)

    def _label_list(self, env) -> list[EventLabel]:
        labs = [*self._label_group(env)]
        while self.at(","):
            self.next()
            labs.extend(self._label_group(env))
        return labs

    def _label_group(self, env) -> list[EventLabel]:
        # a label, optionally universally quantified: `sB(d,b) for d in D, b in B`
        save = self.i
        lab = self.parse_label(env)
        if not self.at("for"):
            return [lab]
        self.next()
        binders = self._binders()
        out = []
        end = None
        for e2 in self._assignments(env, binders):
            self.i = save
            out.append(self.parse_label(e2))
            # skip past the for-clause we already consumed once
            while not (self.at(",") or self.at("}") or self.at(";")):
                self.next()
            end = self.i
        assert end is not None
        self.i = end
        return out

    def _binders(self) -> list[tuple[str, str]]:
        binders = [(self.expect_ident(), (self.expect("in"), self.expect_ident())[1])]
        while self.at(",") and self.toks[self.i + 2].text == "in":
            self.next()
            binders.append(
                (self.expect_ident(), (self.expect("in"), self.expect_ident())[1])
            )
        return binders

    def _assignments(self, env, binders, distinct_pairs=()) -> Iterator[dict]:
        doms = []
        for var, dom in binders:
            if dom not in self.domains:
                raise ParseError(f"undeclared domain {dom!r}",
                                 self.peek().line, self.peek().col)
            doms.append(self.domains[dom])
        for combo in itertools.product(*doms):
            e2 = dict(env)
            for (var, _), val in zip(binders, combo):
                e2[var] = val
            if any(e2[a] == e2[b] for a, b in distinct_pairs):
                continue
            yield e2

    # -- sections ------------------------------------------------------
    def parse_file(self) -> SpecFile:
        while self.peek().kind != "eof":
            kw = self.peek().text
            if kw == "domain":
                self._domain()
            elif kw == "events":
                self._events()
            elif kw == "comm":
                self._comm()
            elif kw == "conflict":
                self._conflict()
            elif kw == "rename":
                self._rename()
            elif kw == "proc":
                self._proc()
            elif kw == "rec":
                self._rec()
            else:
                t = self.peek()
                raise ParseError(f"unexpected section {t.text!r}", t.line, t.col)
        sig = make_signature(self.events, self.gamma, self.conflicts,
                             self.renamings, self.domains)
        return SpecFile(sig, dict(self.recspecs), dict(self.terms))

    def _domain(self):
        self.next()
        name = self.expect_ident()
        self.expect("=")
        self.expect("{")
        vals = []
        while not self.at("}"):
            tok = self.next()
            if tok.kind not in ("ident", "num"):
                raise ParseError("expected constant", tok.line, tok.col)
            vals.append(tok.text)
            if self.at(","):
                self.next()
        self.expect("}")
        self.expect(";")
        self.domains[name] = tuple(vals)

    def _events(self):
        self.next()
        while True:
            name = self.expect_ident()
            argdoms: list[str] = []
            if self.at("("):
                self.next()
                while not self.at(")"):
                    argdoms.append(self.expect_ident())
                    if self.at(","):
                        self.next()
                self.expect(")")
            self.event_templates.append((name, tuple(argdoms)))
            for combo in itertools.product(
                *(self.domains.get(d, (d,)) for d in argdoms)
            ):
                self.events.add(EventLabel(name, tuple(combo)))
            if self.at(","):
                self.next()
                continue
            break
        self.expect(";")

    def _comm(self):
        start_tok = self.next()
        self.expect("gamma")
        save = self.i

        def one(env):
            self.expect("(")
            a = self.parse_label(env)
            self.expect(",")
            b = self.parse_label(env)
            self.expect(")")
            self.expect("=")
            c = self.parse_label(env)
            return a, b, c

        # first pass with empty env to find the optional for-clause
        self.i = save
        depth = 0
        j = self.i
        while self.toks[j].text != ";" or depth:
            depth += self.toks[j].text in "([{"
            depth -= self.toks[j].text in ")]}"
            j += 1
        has_for = any(tok.text == "for" for tok in self.toks[self.i:j])
        if has_for:
            # locate the for-clause
            k = self.i
            while self.toks[k].text != "for":
                k += 1
            self.i = k + 1
            binders = self._binders()
            distinct = self._distinct()
            end = self.i
            for env in self._assignments({}, binders, distinct):
                self.i = save
                a, b, c = one(env)
                self.gamma[_pair(a, b)] = c
                self.events.update(x for x in (a, b, c) if x.is_visible)
            self.i = end
        else:
            a, b, c = one({})
            self.gamma[_pair(a, b)] = c
            self.events.update(x for x in (a, b, c) if x.is_visible)
        self.expect(";")

    def _distinct(self) -> list[tuple[str, str]]:
        pairs = []
        while self.at("if"):
            self.next()
            x = self.expect_ident()
            self.expect("!=")
            y = self.expect_ident()
            pairs.append((x, y))
        return pairs

    def _conflict(self):
        self.next()
        save = self.i
        j = self.i
        depth = 0
        while self.toks[j].text != ";" or depth:
            depth += self.toks[j].text in "([{"
            depth -= self.toks[j].text in ")]}"
            j += 1
        has_for = any(tok.text == "for" for tok in self.toks[self.i:j])

        def one(env):
            a = self.parse_label(env)
            self.expect("#")
            b = self.parse_label(env)
            return a, b

        if has_for:
            k = self.i
            while self.toks[k].text != "for":
                k += 1
            self.i = k + 1
            binders = self._binders()
            distinct = self._distinct()
            end = self.i
            for env in self._assignments({}, binders, distinct):
                self.i = save
                a, b = one(env)
                if a != b:
                    self.conflicts.add(_pair(a, b))
                    self.events.update(x for x in (a, b) if x.is_visible)
            self.i = end
        else:
            a, b = one({})
            self.conflicts.add(_pair(a, b))
            self.events.update(x for x in (a, b) if x.is_visible)
        self.expect(";")

    def _rename(self):
        self.next()
        fname = self.expect_ident()
        self.expect("{")
        f: dict[EventLabel, EventLabel] = {}
        while not self.at("}"):
            a = self.parse_label({})
            self.expect("->")
            b = self.parse_label({})
            f[a] = b
            self.events.update(x for x in (a, b) if x.is_visible)
            if self.at(","):
                self.next()
        self.expect("}")
        self.expect(";")
        self.renamings[fname] = f

    def _proc(self):
        self.next()
        name = self.expect_ident()
        self.expect("=")
        self.terms[name] = self.parse_term({})
        self.expect(";")

    def _rec(self):
        self.next()
        name = self.expect_ident()
        self.expect("{")
        # pre-scan variable names so bodies can reference forward
        j, depth, variables = self.i, 1, []
        while depth:
            tok = self.toks[j]
            if tok.text == "{":
                depth += 1
            elif tok.text == "}":
                depth -= 1
            elif depth == 1 and tok.text == "=" and self.toks[j - 1].kind == "ident":
                variables.append(self.toks[j - 1].text)
            j += 1
        ctx = RecSpecCtx(name, frozenset(variables))
        eqs: dict[str, Term] = {}
        while not self.at("}"):
            var = self.expect_ident()
            self.expect("=")
            eqs[var] = self.parse_term({}, ctx)
            self.expect(";")
        self.expect("}")
        self.recspecs[name] = RecSpec(name, eqs)


@dataclass(frozen=True)
class RecSpecCtx:
    name: str
    variables: frozenset[str]


def parse_spec(text: str) -> SpecFile:
    """Parse a full spec file (sections + terms), expanding data domains."""
    return _Parser(text).parse_file()


def parse_label_text(text: str, spec: Optional[SpecFile] = None) -> EventLabel:
    """Parse a single event label, optionally using a spec file's domains."""
    p = _Parser(text)
    if spec is not None:
        p.domains = dict(spec.signature.domains)
    lab = p.parse_label({})
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return lab


def parse_term(text: str, spec: Optional[SpecFile] = None) -> Term:
    """Parse a single term expression, optionally in the context of a spec
    file (whose domains, procs and recursion specs are then available)."""
    p = _Parser(text)
    if spec is not None:
        p.domains = dict(spec.signature.domains)
        p.terms = dict(spec.terms)
        p.recspecs = dict(spec.recspecs)
    t = p.parse_term({})
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return t
