from dataclasses import replace
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from selpop.dsl import DslError, check_protocol, parse_protocol, pretty_print, validate
from selpop.protocols.epidemic import RESTED_SPEC, SELECTIVE_SPEC, STANDARD_SPEC
from selpop.protocols.fast_median import stage_specs
from selpop.protocols.leader_election import SPEC as LE
from selpop.protocols.majority import SPEC as MAJ
from selpop.protocols.median_standard import SPEC as MED
from selpop.protocols.multiply_fast import SPEC as MULT_FAST
from selpop.protocols.multiply_slow import CORE_SPEC as MULT_CORE, SPEC as MULT_SLOW
from selpop.spec import structurally_equal
from selpop.verify import MALFORMED, dsl_round_trip

PP = Path(__file__).resolve().parent.parent / "protocols"

EPIDEMIC = """\
protocol epidemic
model selective
states: 0, 1, Stop
group G0 = {0}
group G1 = {1, Stop}
1 + G0|0 -> 1 + 1
1 + G0|null -> Stop
"""


def test_epidemic_text_parses():
    spec = parse_protocol(EPIDEMIC)
    assert len(spec.rules) == 2
    assert set(spec.states) == {"0", "1", "Stop"}
    assert spec.target_of == {"1": "G0"}
    assert validate(spec) == []


def test_uncovered_state_is_reported_with_span():
    text = EPIDEMIC.replace("group G1 = {1, Stop}", "group G1 = {1}")
    spec, diags = check_protocol(text)
    assert spec is None
    kinds = [d.kind for d in diags]
    assert "UncoveredState" in kinds
    d = diags[kinds.index("UncoveredState")]
    assert d.span is not None and d.span.line == 3


def test_parse_protocol_raises_with_diagnostics():
    with pytest.raises(DslError) as exc:
        parse_protocol("protocol p\nmodel quantum\nstates: a\n")
    assert exc.value.diagnostics[0].kind == "UnknownModel"


def test_mult_slow_file():
    spec = parse_protocol((PP / "mult_slow.pp").read_text())
    assert len(spec.rules) == 7 and len(spec.groups) == 5 and len(spec.states) == 10
    assert structurally_equal(spec, MULT_CORE)


@pytest.mark.parametrize("path", sorted(PP.glob("*.pp")), ids=lambda p: p.name)
def test_shipped_files_parse_clean(path):
    spec, diags = check_protocol(path.read_bytes())
    assert spec is not None, diags
    assert [d for d in validate(spec) if d.severity == "error"] == []


def test_coloring_file_matches_builder():
    from selpop.protocols.fast_median import coloring_spec
    spec = parse_protocol((PP / "coloring.pp").read_text())
    assert structurally_equal(spec, coloring_spec())
    assert {f"R{t}.c1" for t in range(22)} <= set(spec.states)


def test_missing_null_rule_warns():
    assert validate(LE) == []
    stripped = replace(SELECTIVE_SPEC, rules=tuple(r for r in SELECTIVE_SPEC.rules if not r.is_null))
    diags = validate(stripped)
    assert [d.kind for d in diags] == ["MissingNullRule"]
    assert diags[0].severity == "warning"


def test_responder_outside_target_group():
    text = EPIDEMIC + "target 1 -> G0\n1 + Stop -> 1 + 1\n"
    text = text.replace("1 + Stop -> 1 + 1", "1 + G0|Stop -> 1 + 1")
    _, diags = check_protocol(text)
    assert "RulePatternOutsideTargetGroup" in [d.kind for d in diags]


BUILTINS = [SELECTIVE_SPEC, RESTED_SPEC, STANDARD_SPEC, LE, MAJ, MED, MULT_SLOW, MULT_FAST]


@pytest.mark.parametrize("spec", BUILTINS + stage_specs(), ids=lambda s: s.name)
def test_round_trip(spec):
    assert dsl_round_trip(spec)


def test_rule_order_does_not_matter():
    a = parse_protocol(EPIDEMIC)
    lines = EPIDEMIC.splitlines()
    b = parse_protocol("\n".join(lines[:-2] + [lines[-1], lines[-2]]) + "\n")
    assert structurally_equal(a, b)
    assert pretty_print(a) != pretty_print(b)


def test_comments_and_unicode_arrow():
    text = "# lead\n" + EPIDEMIC.replace("1 + G0|0 -> 1 + 1", "1 + G0|0 → 1 + 1   # spread")
    assert structurally_equal(parse_protocol(text), parse_protocol(EPIDEMIC))


@pytest.mark.parametrize("label,text", MALFORMED, ids=[m[0] for m in MALFORMED])
def test_malformed_inputs_get_spanned_errors(label, text):
    spec, diags = check_protocol(text)
    assert spec is None
    errs = [d for d in diags if d.severity == "error"]
    assert errs
    size = len(text if isinstance(text, bytes) else text.encode())
    for d in errs:
        assert d.span is not None
        assert d.span.line >= 1 and d.span.column >= 1
        assert 0 <= d.span.start <= d.span.end <= size


TOKENS = ["protocol", "model", "selective", "standard", "states:", "group", "target", "null", "order",
          "by-key", "a", "b", "G", "{", "}", ",", "+", "|", "->", "[<]", "[>]", "=", "#", "\n", " ", "é", "\t"]


@given(st.lists(st.sampled_from(TOKENS), max_size=60))
def test_token_soup_never_crashes(parts):
    spec, diags = check_protocol(" ".join(parts))
    assert spec is not None or diags
    assert all(d.kind != "InternalError" for d in diags)


@given(st.binary(max_size=200))
def test_random_bytes_never_crash(blob):
    spec, diags = check_protocol(blob)
    assert spec is not None or diags
    assert all(d.kind != "InternalError" for d in diags)
