from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cotangent_kit.ideal_file import IdealFileError, parse_ideal_file, parse_ideal_text, tokenize

from conftest import CORPUS


def test_three_generators():
    f = parse_ideal_text("ring x y; gens x^2, x*y, y^2")
    assert len(f.ideal.generators) == 3
    assert f.ideal.ring.variable_names == ("x", "y")


def test_single_generator_degree():
    f = parse_ideal_text("ring x y z; gens x*y - z^2")
    assert f.ideal.degrees() == [2]


def test_inhomogeneous_reports_degrees():
    with pytest.raises(IdealFileError) as exc:
        parse_ideal_text("ring x; gens x + x^2")
    assert "term degrees 1 and 2" in str(exc.value)
    assert (exc.value.line, exc.value.column) == (1, 14)


def test_rational_coefficients_and_weights():
    f = parse_ideal_text("ring a, b;\nweights 1 2;\ngens -3/4*a^2 + b;")
    (g,) = f.ideal.generators
    assert g.terms == {(2, 0): Fraction(-3, 4), (0, 1): Fraction(1)}
    assert f.ideal.ring.degrees == (1, 2)


def test_flags_and_comments():
    f = parse_ideal_text("# header\nring x; # vars\ngens x;\nflags generically_ci: true, depth: 3;")
    assert f.flags == {"generically_ci": True, "depth": 3}


@pytest.mark.parametrize(
    "text, line, col, fragment",
    [
        ("ring x;\ngens x @ x", 2, 8, "unexpected character"),
        ("ring x;\ngens y", 2, 6, "unknown variable"),
        ("gens x", 1, 1, "gens before ring"),
        ("ring x; weights 0", 1, 9, "positive"),
        ("ring x; gens x; weights 1", 1, 17, "weights after gens"),
        ("ring x; gens 1/0*x", 1, 14, "zero denominator"),
        ("ring x; gens 2", 1, 14, "constant"),
        ("ring x; gens x - x", 1, 14, "zero"),
        ("ring x x; gens x", 1, 8, "declared twice"),
        ("ring x; gens x^", 1, 16, "exponent"),
        ("ring x; frobnicate", 1, 9, "unknown statement"),
        ("ring x; flags a: maybe", 1, 18, "flag value"),
        ("ring x y\ngens x", 2, 1, "keyword"),
    ],
)
def test_errors_carry_position(text, line, col, fragment):
    with pytest.raises(IdealFileError) as exc:
        parse_ideal_text(text)
    assert (exc.value.line, exc.value.column) == (line, col)
    assert fragment in str(exc.value)


@given(st.text(alphabet="xy^*+-,;/: 0123456789\n#", max_size=40))
def test_tokenizer_total_on_grammar_alphabet(text):
    toks = tokenize(text)
    assert toks[-1].kind == "eof"


@given(st.text(max_size=30))
def test_parser_raises_only_ideal_file_errors(text):
    try:
        parse_ideal_text("ring x y;\ngens " + text)
    except IdealFileError:
        pass


@pytest.mark.parametrize("name, n", [("x", 1), ("ci22", 2), ("m2", 3), ("aci", 2), ("minors23", 3)])
def test_corpus_parses(name, n):
    f = parse_ideal_file(CORPUS / f"{name}.ideal")
    assert len(f.ideal.generators) == n
    assert f.source_name == f"{name}.ideal" and len(f.sha256) == 64
