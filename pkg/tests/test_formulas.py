import pytest
from hypothesis import given

from src.services.errors import FormulaSyntaxError, MalformedInputError
from src.services.formulas import (
    BBOX,
    DIA,
    FALSE,
    TRUE,
    Formula,
    bbox,
    bdia,
    box,
    canonicalize,
    colour,
    conj,
    dia,
    disj,
    fresh_names,
    from_document,
    implies,
    modal_depth,
    neg,
    nnf,
    normalize,
    parse,
    render,
    size,
    substitute,
    swap_colours,
    to_document,
    var,
    variables,
)
from tests.strategies import formulas

p, q, r = var("p"), var("q"), var("r")


class TestParse:
    def test_precedence(self):
        assert parse("p & q | r") == disj(conj(p, q), r)
        assert parse("p -> q -> r") == implies(p, implies(q, r))
        assert parse("~p & q") == conj(neg(p), q)

    def test_modalities(self):
        assert parse("<>[]p") == dia(box(p))
        assert parse("<+>[+]p") == bdia(bbox(p))
        assert parse("top -> bot") == implies(TRUE, FALSE)

    def test_double_negation_is_dropped(self):
        assert parse("~~p") == p

    def test_names_starting_with_keywords(self):
        assert parse("topic") == var("topic")

    @pytest.mark.parametrize("text", ["p &", "(p", "<> ", "P", "p q"])
    def test_syntax_error(self, text):
        with pytest.raises(FormulaSyntaxError) as exc:
            parse(text)
        assert exc.value.position >= 0

    def test_arity_is_checked(self):
        with pytest.raises(MalformedInputError):
            Formula(DIA, (p, q))
        with pytest.raises(MalformedInputError):
            Formula("xor", (p, q))


class TestRender:
    @pytest.mark.parametrize("text", ["p & q | r", "p -> q -> r", "(p -> q) -> r", "p & (q | r)", "<>(p & q)", "~[+]p"])
    def test_ascii(self, text):
        assert render(parse(text)) == text

    def test_unicode(self):
        assert render(parse("~<>p -> <+>top"), "unicode") == "¬◇p → ◆⊤"

    @given(formulas())
    def test_rendering_parses_back(self, phi):
        assert parse(render(phi)) == canonicalize(phi)


class TestMeasures:
    def test_variables_and_depth(self):
        phi = parse("<>[]p & <+>q")
        assert variables(phi) == ["p", "q"]
        assert modal_depth(phi) == 2
        assert size(phi) == 6

    def test_colour(self):
        assert colour(parse("p & q")) == "none"
        assert colour(parse("<>p")) == "white"
        assert colour(parse("[+]p")) == "black"
        assert colour(parse("<>p -> [+]p")) == "bi"

    def test_swap(self):
        assert swap_colours(parse("<>[+]p")) == parse("<+>[]p")


class TestTransformations:
    def test_nnf(self):
        assert nnf(parse("~(p -> <>q)")) == conj(p, box(neg(q)))
        assert nnf(parse("~[+]p")) == bdia(neg(p))

    def test_normalize(self):
        assert normalize(parse("[]p")) == neg(dia(neg(p)))
        assert normalize(parse("p -> q")) == disj(neg(p), q)
        assert normalize(parse("[+]~p")) == neg(bdia(p))

    @given(formulas())
    def test_nnf_has_negations_on_variables_only(self, phi):
        def check(f):
            if f.op == "not":
                assert f.left.op == "var"
            assert f.op != "implies"
            for a in f.args:
                check(a)

        check(nnf(phi))

    def test_substitute(self):
        assert substitute(parse("p -> <>p"), {"p": parse("q & r")}) == parse("q & r -> <>(q & r)")

    def test_document(self):
        phi = parse("[+](p | ~q)")
        node = to_document(phi)
        assert node.op == BBOX
        assert from_document(node) == phi

    def test_fresh_names(self):
        assert fresh_names({"p0", "p2"}, "p", 2) == ["p1", "p3"]
