from __future__ import annotations

from hypothesis import settings, strategies as st

from kannappan.algebra import B, BC, C, ONE, AbelianVector, Word, WreathElement

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

words = st.text(alphabet="ab", min_size=1, max_size=24).map(Word)
short_words = st.text(alphabet="ab", min_size=1, max_size=8).map(Word)
ints = st.integers(-10**6, 10**6)
vectors2 = st.tuples(ints, ints).map(AbelianVector)
klein = st.sampled_from([ONE, B, C, BC])


@st.composite
def wreath_elements(draw, slot_one_only=False):
    """Elements of Z wr C."""
    top = ONE if slot_one_only else draw(klein)
    idxs = [ONE] if slot_one_only else [ONE, B, C, BC]
    slots = {i: AbelianVector((draw(st.integers(-50, 50)),)) for i in idxs if draw(st.booleans())}
    return WreathElement.from_map(top, slots)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import ACCEPTANCE_LINES
    except ImportError:
        return
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
