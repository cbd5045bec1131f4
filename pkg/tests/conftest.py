import numpy as np
import pytest
from hypothesis import settings

from devsenti.corpus import document_from_text
from devsenti.lexicon import Lexicon

# numba compilation and lazy scipy imports make first calls slow
settings.register_profile("default", deadline=None)
settings.load_profile("default")

TERMS = {
    "stupid": -3, "trouble": -2, "thank": 2, "helpful": 2, "great": 3, "bad": -3,
    "hate": -4, "love": 3, "good": 2, "ail*": -2, "ailing": 1, "worry": -2, "fine": 1,
    "kill*": -3, "nice": 2,
}
EMOTICONS = {":)": 2, ":(": -2, ":D": 3}
BOOSTERS = {"really": 1, "very": 1, "extremely": 2, "slightly": -1}
NEGATIONS = ["not", "don't", "never", "no"]
LAUGHTER = ["lol", "rofl"]


@pytest.fixture(scope="session")
def table1_lexicon():
    return Lexicon(
        terms={"stupid": -3, "trouble": -2, "thank": 2, "helpful": 2},
        emoticons={}, boosters={"really": 1}, negations=(), laughter=(),
    )


@pytest.fixture(scope="session")
def lexicon():
    return Lexicon(TERMS, EMOTICONS, BOOSTERS, NEGATIONS, LAUGHTER)


@pytest.fixture(scope="session")
def doc(lexicon):
    emoticons = lexicon.emoticon_surfaces

    def make(text):
        return document_from_text(text, emoticons=emoticons | {":-)", ";)", ":P"})
    return make


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# --- acceptance summary -----------------------------------------------------

_criteria = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, title = marker
    if report.when == "call" or report.skipped or report.failed:
        previous = _criteria.get(number)
        if previous is None or previous[0] == "PASS" or report.failed or report.skipped:
            if report.skipped:
                reason = report.longrepr[2] if isinstance(report.longrepr, tuple) else ""
                _criteria[number] = ("SKIPPED", title, reason.replace("Skipped: ", ""))
            else:
                _criteria[number] = ("FAIL" if report.failed else "PASS", title, "")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status, title, reason = _criteria[number]
        line = f"criterion {number}: {status:<7} {title}"
        if reason:
            line += f" ({reason})"
        terminalreporter.write_line(line)
