import pytest

from src.services.conditions import (
    FrameCondition,
    SubCondition,
    eval_frame_condition,
    eval_sub_condition,
    fresh_points_needed,
    free_variables,
    from_document,
    max_power,
    parse_frame_condition,
    parse_sub_condition,
    render_condition,
    to_document,
)
from src.services.duality import KripkeFrame
from src.services.errors import ConditionSyntaxError, FreeVariableError, SizingError
from src.services.omega import ACCUMULATION_LOOP, eval_frame_condition_symbolic

REFLEXIVE = "A x. x R x"
SYMMETRIC = "A x,y. x R y -> y R x"
SERIAL = "A x. E y. x R y"


@pytest.fixture
def loop_point():
    return KripkeFrame.of_size(1, {(0, 0)})


class TestFrameConditions:
    def test_parse_builds_frame_conditions(self):
        c = parse_frame_condition(SYMMETRIC)
        assert isinstance(c, FrameCondition)
        assert c.op == "forall" and c.var == "x"

    @pytest.mark.parametrize("text,arrow,loop", [(REFLEXIVE, False, True), (SYMMETRIC, False, True), (SERIAL, False, True)])
    def test_evaluate(self, arrow_frame, loop_point, text, arrow, loop):
        c = parse_frame_condition(text)
        assert eval_frame_condition(c, arrow_frame) is arrow
        assert eval_frame_condition(c, loop_point) is loop

    def test_powers(self, arrow_frame):
        three = KripkeFrame.of_size(3, {(0, 1), (1, 2)})
        c = parse_frame_condition("E x,y. x R^2 y")
        assert eval_frame_condition(c, three)
        assert not eval_frame_condition(c, arrow_frame)
        assert max_power(c) == 2

    def test_free_variables_need_values(self, arrow_frame):
        c = parse_frame_condition("x R y")
        assert free_variables(c) == {"x", "y"}
        with pytest.raises(FreeVariableError):
            eval_frame_condition(c, arrow_frame)
        assert eval_frame_condition(c, arrow_frame, {"x": 0, "y": 1})

    def test_bound_variable_cap(self, arrow_frame):
        with pytest.raises(SizingError):
            eval_frame_condition(parse_frame_condition("A a,b,c,d,e,f,g. true"), arrow_frame)

    def test_fresh_points(self):
        assert fresh_points_needed(parse_frame_condition("A x. E y. x R^3 y")) == 4

    @pytest.mark.parametrize("text", ["A x x R y", "x R", "A x. x < x", "x R^ y"])
    def test_syntax_errors(self, text):
        with pytest.raises(ConditionSyntaxError):
            parse_frame_condition(text)

    @pytest.mark.parametrize(
        "text", [SYMMETRIC, "A x,y. x R y -> E z. y R^2 z /\\ !(z = x)", "E x. !(x R x \\/ false) /\\ true"]
    )
    def test_rendering_parses_back(self, text):
        c = parse_frame_condition(text)
        assert parse_frame_condition(render_condition(c)) == c

    def test_symbolic_domain(self):
        assert eval_frame_condition_symbolic(parse_frame_condition(REFLEXIVE), ACCUMULATION_LOOP)
        assert eval_frame_condition_symbolic(parse_frame_condition(SERIAL), ACCUMULATION_LOOP)
        assert not eval_frame_condition_symbolic(parse_frame_condition(SYMMETRIC), ACCUMULATION_LOOP)


class TestSubConditions:
    S7 = "A a,b. a < b -> ~b < ~a"

    def test_parse_builds_sub_conditions(self):
        assert isinstance(parse_sub_condition(self.S7), SubCondition)

    def test_s7(self, arrow_algebra, order_algebra):
        c = parse_sub_condition(self.S7)
        assert not eval_sub_condition(c, arrow_algebra)
        assert eval_sub_condition(c, order_algebra)

    def test_power_zero_is_order(self, order_algebra, arrow_algebra):
        c = parse_sub_condition("A a,b. a <^0 b -> a <= b")
        assert eval_sub_condition(c, arrow_algebra)
        assert eval_sub_condition(parse_sub_condition("A a. a <^0 a"), order_algebra)

    def test_terms(self, order_algebra):
        c = parse_sub_condition("A a. [a | ~a] = 1 /\\ a & 0 = 0")
        assert eval_sub_condition(c, order_algebra)

    def test_perp(self, order_algebra):
        assert eval_sub_condition(parse_sub_condition("A a. a _|_ ~a"), order_algebra)
        assert not eval_sub_condition(parse_sub_condition("A a. a _|_ a"), order_algebra)

    def test_env(self, order_algebra):
        c = parse_sub_condition("a < b")
        assert eval_sub_condition(c, order_algebra, {"a": 1, "b": 3})
        assert not eval_sub_condition(c, order_algebra, {"a": 3, "b": 1})

    def test_rendering_parses_back(self):
        c = parse_sub_condition("A a. E b. a <^0 b /\\ b _|_^2 ~[a & b]")
        assert parse_sub_condition(render_condition(c)) == c


class TestDocuments:
    def test_frame_condition(self):
        c = parse_frame_condition(SYMMETRIC)
        back = from_document(to_document(c))
        assert isinstance(back, FrameCondition)
        assert back == c

    def test_sub_condition(self):
        c = parse_sub_condition(TestSubConditions.S7)
        back = from_document(to_document(c))
        assert isinstance(back, SubCondition)
        assert back == c
