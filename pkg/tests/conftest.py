import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pseudosyl.phonology import CODA, NUCLEUS, ONSET, Pronunciation, Syllable, load_resource
from pseudosyl.symbolic import load_ruleset

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CANTONESE = load_resource("cantonese")
VIETNAMESE = load_resource("vietnamese")


@pytest.fixture(scope="session")
def yue():
    return CANTONESE


@pytest.fixture(scope="session")
def vie():
    return VIETNAMESE


@pytest.fixture(scope="session")
def yue_rules():
    return load_ruleset("cantonese")


# ---------------------------------------------------------------------------
# strategies


def phonemes_for(resource, role):
    return sorted(p.symbol for p in resource.phonemes.values() if role in p.allowed_roles)


@st.composite
def syllables(draw, resource=CANTONESE, tone=True):
    onsets = phonemes_for(resource, ONSET)
    nuclei = phonemes_for(resource, NUCLEUS)
    codas = phonemes_for(resource, CODA)
    onset = draw(st.lists(st.sampled_from(onsets), max_size=resource.max_onset or 1))
    nucleus = draw(st.lists(st.sampled_from(nuclei), min_size=1, max_size=1))
    coda = draw(st.lists(st.sampled_from(codas), max_size=resource.max_coda or 1))
    t = draw(st.integers(1, resource.tone_count)) if tone else None
    return Syllable(tuple(onset), tuple(nucleus), tuple(coda), t)


@st.composite
def pronunciations(draw, resource=CANTONESE, max_syllables=4, tone=True):
    sylls = draw(st.lists(syllables(resource, tone), min_size=1, max_size=max_syllables))
    return Pronunciation(tuple(sylls))


def words(resource=CANTONESE, max_size=8):
    return st.text(alphabet=sorted(resource.grapheme_classes), min_size=1, max_size=max_size)


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion at the end of the run

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and report.when == "call":
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _ACCEPTANCE[item.name] = (doc, report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        doc, outcome = _ACCEPTANCE[name]
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {doc}")
