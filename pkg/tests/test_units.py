"""Unit and property tests for the individual modules."""

from __future__ import annotations

import pytest
from click.testing import CliRunner

from aptc import (
    Alt, Atom, DELTA, EventLabel, Par, RecCall, RecSpec, Seq, TAU,
    GuardReport, ParseError, ResourceBound, UnguardedRecursion,
    canonical_print, check_guarded_linear, compile_basic, direct_compile,
    eq_ac, explore, export_aldebaran, export_pes, lpo_check, make_signature,
    normalize, parse_spec, parse_term, project_n, rdp_unfold, rsp_check,
    shadow, sos_steps, strong_bisim, strong_step_bisim_lts,
)
from aptc.cli import main as cli_main
from aptc.terms import Signature

from reference_semantics import corpus

CORPUS = corpus(40)
SIG0 = Signature()

A = Atom(EventLabel("a"))
B = Atom(EventLabel("b"))
C = Atom(EventLabel("c"))


# ---------------------------------------------------------------------------
# Terms: parser / printer / AC equality
# ---------------------------------------------------------------------------

def test_parse_print_roundtrip_corpus():
    for t, _sig in CORPUS:
        assert eq_ac(parse_term(canonical_print(t)), t)


def test_parse_print_roundtrip_operators():
    for text in [
        "(a|b).(c<>a) + theta(a.b) unless c + proj[2](rho[f](a))",
        "encap{a}(a.b) + hide{b}(b.c) + shadow[a,1].b",
        "a <>* b || c + tau.delta",
    ]:
        t = parse_term(text)
        assert eq_ac(parse_term(canonical_print(t)), t)


def test_eq_ac_properties():
    assert eq_ac(Alt(A, B), Alt(B, A))
    assert eq_ac(Alt(Alt(A, B), C), Alt(A, Alt(B, C)))
    assert eq_ac(Par(A, B), Par(B, A))
    assert eq_ac(Par(Par(A, B), C), Par(A, Par(B, C)))
    assert not eq_ac(Seq(A, B), Seq(B, A))
    assert not eq_ac(Alt(A, B), Par(A, B))


def test_parse_error_reports_position():
    with pytest.raises(ParseError):
        parse_term("a + ")
    with pytest.raises(ParseError):
        parse_term("a ++ b")


def test_spec_file_sections(tmp_path):
    spec = parse_spec(
        """
        domain D = {0, 1};
        events s(D), r(D), c(D);
        comm gamma(s(d), r(d)) = c(d) for d in D;
        conflict s(0) # s(1);
        rename f { s(0) -> r(0) };
        proc P = s(0) . r(1);
        rec E { X = s(0) . X + r(1); }
        """
    )
    s0 = EventLabel("s", ("0",))
    r0 = EventLabel("r", ("0",))
    assert spec.signature.gamma_get(s0, r0) == EventLabel("c", ("0",))
    assert spec.signature.in_conflict(s0, EventLabel("s", ("1",)))
    assert "E" in spec.recspecs and "X" in spec.recspecs["E"].equations
    assert eq_ac(parse_term("P", spec),
                 Seq(Atom(s0), Atom(EventLabel("r", ("1",)))))


# ---------------------------------------------------------------------------
# Rewrite engine
# ---------------------------------------------------------------------------

def test_normalize_confluence_corpus():
    """Both innermost strategies reach the same normal form modulo AC."""
    for t, sig in CORPUS:
        n1, _ = normalize(t, sig)
        n2, _ = normalize(t, sig, reverse=True)
        assert eq_ac(n1, n2), canonical_print(t)


def test_normalize_idempotent_corpus():
    for t, sig in CORPUS[:20]:
        n1, _ = normalize(t, sig)
        n2, _ = normalize(n1, sig)
        assert eq_ac(n1, n2)


def test_lpo_orientation_all_rules():
    report = lpo_check()
    bad = [name for name, ok in report.items() if not ok]
    assert not bad, f"rules not oriented by the LPO: {bad}"


def test_lpo_single_rule():
    assert lpo_check("RA4") == {"RA4": True}


# ---------------------------------------------------------------------------
# Equivalence hierarchy
# ---------------------------------------------------------------------------

def test_hierarchy_on_corpus_pairs():
    """hhp implies hp and pomset implies step, on compiled normal forms."""
    pess = [compile_basic(normalize(t, sig)[0]) for t, sig in CORPUS[:24]]
    for p, q in zip(pess, pess[1:]):
        if strong_bisim(p, q, "hhp"):
            assert strong_bisim(p, q, "hp")
        if strong_bisim(p, q, "pomset"):
            assert strong_bisim(p, q, "step")


def test_explore_agrees_with_normal_form():
    """The SOS explorer and the rewrite engine give step-bisimilar LTSs."""
    for t, sig in CORPUS[:20]:
        l1 = explore(t, sig)
        l2 = explore(normalize(t, sig)[0], sig)
        assert strong_step_bisim_lts(l1, l2), canonical_print(t)


# ---------------------------------------------------------------------------
# LTS explorer
# ---------------------------------------------------------------------------

def test_shadow_evaporates_when_unmatched():
    """A leading shadow may evaporate, exposing the continuation."""
    t = parse_term("shadow[a,1].b")
    steps = sos_steps(t, SIG0)
    assert ((EventLabel("b"),), None) in steps


def test_encapsulation_and_abstraction_remove_labels():
    l1 = explore(parse_term("encap{a}(a.b + c)"), SIG0)
    assert all("a" not in step for _, step, _ in l1.transitions)
    l2 = explore(parse_term("hide{a}(a.b)"), SIG0)
    labels = {lab for _, step, _ in l2.transitions for lab in step}
    assert "a" not in labels and "tau" in labels


def test_unguarded_recursion_raises():
    spec = RecSpec("E", {"X": Seq(RecCall("X", "E"), A)})
    with pytest.raises(UnguardedRecursion):
        explore(RecCall("X", "E"), SIG0, {"E": spec})


def test_resource_bound_raises():
    with pytest.raises(ResourceBound):
        explore(parse_term("a.b.c"), SIG0, None, max_states=1)


def test_guard_report():
    a_x = Alt(Seq(A, RecCall("X", "E")), B)
    rep = check_guarded_linear(RecSpec("E", {"X": a_x}))
    assert rep.linear and rep.guarded and bool(rep)

    rep = check_guarded_linear(RecSpec("E", {"X": Seq(Atom(TAU),
                                                      RecCall("X", "E"))}))
    assert rep.linear and not rep.guarded and not bool(rep)

    rep = check_guarded_linear(RecSpec("E", {"X": Seq(RecCall("X", "E"), A)}))
    assert not rep.linear and not bool(rep)
    assert isinstance(rep, GuardReport)


def test_export_aldebaran_format():
    l = explore(parse_term("a.b"), SIG0)
    text = export_aldebaran(l)
    lines = text.strip().splitlines()
    assert lines[0].startswith("des (0, ")
    assert any('"tick"' in ln for ln in lines)
    assert any('"a"' in ln for ln in lines) and any('"b"' in ln for ln in lines)


def test_export_pes_format():
    p = direct_compile(parse_term("a.(b+c)"))
    text = export_pes(p)
    assert text.count("event ") == 3
    assert "conf " in text and "le " in text


# ---------------------------------------------------------------------------
# Recursion tools
# ---------------------------------------------------------------------------

def test_projection_small():
    out = project_n(parse_term("a.b.c"), 2, SIG0)
    assert eq_ac(out, Seq(A, Seq(B, Atom(DELTA))))
    assert eq_ac(project_n(parse_term("a.b"), 0, SIG0), Atom(DELTA))


def test_rdp_unfold():
    spec = RecSpec("E", {"X": Alt(Seq(A, RecCall("X", "E")), B)})
    out = rdp_unfold(RecCall("X", "E"), {"E": spec})
    assert eq_ac(out, Alt(Seq(A, RecCall("X", "E")), B))


def test_rsp_accepts_solution_and_rejects_non_solution():
    spec = RecSpec("E", {"X": Alt(Seq(A, RecCall("X", "E")), B)})
    assert rsp_check(spec, {"X": RecCall("X", "E")}, SIG0, {"E": spec})
    assert not rsp_check(spec, {"X": B}, SIG0, {"E": spec})


def test_rsp_requires_guardedness():
    spec = RecSpec("E", {"X": Seq(RecCall("X", "E"), A)})
    with pytest.raises(ValueError):
        rsp_check(spec, {"X": A}, SIG0, {"E": spec})


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------

def _run(args, **kw):
    return CliRunner().invoke(cli_main, args, **kw)


def test_cli_normalize():
    res = _run(["normalize", "(a+b).c"])
    assert res.exit_code == 0
    assert res.output.strip() == "a . c + b . c"


def test_cli_equiv_exit_codes():
    assert _run(["equiv", "a || b", "a.b + b.a"]).exit_code == 1
    assert _run(["equiv", "--mode", "step",
                 "a || b", "b || a"]).exit_code == 0
    assert _run(["equiv", "--mode", "rbs", "tau.a + a", "a"]).exit_code == 1


def test_cli_parse_error_is_usage_error():
    assert _run(["normalize", "a + "]).exit_code == 2


def test_cli_resource_bound_exit_code():
    assert _run(["lts", "--max-states", "1", "a.b.c"]).exit_code == 3


def test_cli_with_spec_file(tmp_path):
    specfile = tmp_path / "toy.aptc"
    specfile.write_text(
        "domain D = {0, 1};\n"
        "events s(D), r(D), c(D);\n"
        "comm gamma(s(d), r(d)) = c(d) for d in D;\n"
    )
    res = _run(["equiv", "-s", str(specfile), "--mode", "step",
                "encap{s(0), r(0)}(s(0) <> r(0))", "c(0)"])
    assert res.exit_code == 0, res.output


def test_cli_pes_export():
    res = _run(["pes", "a || b"])
    assert res.exit_code == 0 and res.output.count("event ") == 2


def test_cli_verify_abp_smoke():
    res = _run(["verify-abp", "--variant", "traditional", "--delta-size", "1"])
    assert res.exit_code == 0, res.output
    assert "RELATED" in res.output and "wall time" in res.output
