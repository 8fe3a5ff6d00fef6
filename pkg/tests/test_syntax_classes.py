import pytest
from hypothesis import given

from src.services.errors import SyntaxClassError
from src.services.formulas import parse, var
from src.services.syntax_classes import FLAG_IMPLICATIONS, classify, decompose_g_closed
from tests.strategies import formulas


class TestClassify:
    def test_diamond_is_closed(self):
        c = classify(parse("<>p"))
        assert c.closed and c.positive and c.s_positive and c.g_closed
        assert not c.open

    def test_box_is_open_and_strongly_positive(self):
        c = classify(parse("[]p"))
        assert c.open and c.g_open and c.strongly_positive
        assert not c.closed

    def test_negation_normal_form_first(self):
        assert classify(parse("~[]~p")).closed

    def test_negative(self):
        c = classify(parse("[]~p & <+>~q"))
        assert c.negative and not c.positive

    def test_sahlqvist_but_not_s_sahlqvist(self):
        c = classify(parse("p -> <>[]p"))
        assert c.sahlqvist
        assert not c.s_sahlqvist

    def test_s_sahlqvist(self):
        c = classify(parse("[]p -> <>p"))
        assert c.s_sahlqvist and c.sahlqvist

    def test_flags(self):
        assert "closed" in classify(parse("<>p")).flags()

    @given(formulas())
    def test_flag_implications(self, phi):
        assert classify(phi).broken_implications() == []

    def test_implications_name_real_flags(self):
        fields = set(classify(var("p")).__dataclass_fields__)
        assert all(a in fields and b in fields for a, b in FLAG_IMPLICATIONS)


class TestDecomposition:
    def test_boxed_closed_part(self):
        parts = decompose_g_closed(parse("[](<>p & q)"))
        assert parts.skeleton == parse("[]c0")
        assert parts.substitution == {"c0": parse("<>p & q")}

    def test_placeholder_avoids_taken_names(self):
        parts = decompose_g_closed(parse("[]<>c0"))
        assert list(parts.substitution) == ["c1"]

    def test_not_g_closed(self):
        with pytest.raises(SyntaxClassError):
            decompose_g_closed(parse("<>[]p"))
