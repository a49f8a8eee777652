import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pseudosyl.phonology import (
    CODA,
    NUCLEUS,
    ONSET,
    MissingTone,
    MultipleTones,
    NoNucleus,
    Pronunciation,
    ResourceError,
    RoleViolation,
    Syllable,
    UnknownGrapheme,
    UnknownToken,
    is_valid,
    parse_pronunciation,
    parse_resource,
    serialize_pronunciation,
    structure_of,
    validate,
)

from conftest import CANTONESE, VIETNAMESE, pronunciations

DISNEYLAND_VI = "d_< i 1 . s V: 1 . n e 1 . l a: n 1".split()


def test_cow_and_bug_share_units_but_not_tone(vie):
    cow = parse_pronunciation(["b_<", "O", "3"], vie)
    bug = parse_pronunciation(["b_<", "O", "6"], vie)
    assert cow.syllables == (Syllable(("b_<",), ("O",), (), 3),)
    assert serialize_pronunciation(bug) == ["b_<", "O", "6"]
    assert cow.without_tones() == bug.without_tones()


def test_nucleus_only_syllable(vie):
    p = parse_pronunciation(["O", "1"], vie)
    assert p.syllables == (Syllable((), ("O",), (), 1),)
    assert structure_of(p) == [(NUCLEUS,)]


def test_greenland_prefix_structure(yue):
    p = parse_pronunciation("g aa k 3 . l i ng 4".split(), yue)
    assert structure_of(p) == [(ONSET, NUCLEUS, CODA)] * 2
    assert p.tones == (3, 4)


def test_disneyland_structure(vie):
    p = parse_pronunciation(DISNEYLAND_VI, vie)
    assert structure_of(p) == [(ONSET, NUCLEUS)] * 3 + [(ONSET, NUCLEUS, CODA)]


def test_invalid_joint_output_has_cluster_and_missing_tone(vie):
    # onset cluster "s n" in syllable 2, no tone on syllable 3
    tokens = "z i 3 . s n i 1 . l E n . l a: n 1".split()
    found = validate(tokens, vie)
    assert [(v.syllable, v.kind) for v in found] == [(1, "onset_cluster"), (2, "missing_tone")]


def test_tone_may_appear_anywhere_but_serializes_last(yue):
    p = parse_pronunciation(["g", "3", "aa", "k"], yue)
    assert serialize_pronunciation(p) == ["g", "aa", "k", "3"]


@pytest.mark.parametrize("tokens, error", [
    (["g", "aa", "xx", "1"], UnknownToken),
    (["g", "k", "1"], NoNucleus),
    (["g", "aa"], MissingTone),
    (["g", "aa", "1", "2"], MultipleTones),
    (["aa", "g", "1"], RoleViolation),  # g cannot close a syllable
    (["g", "aa", "7"], RoleViolation),  # tone out of range
    (["g", "aa", "1", "."], NoNucleus),
])
def test_parse_errors(yue, tokens, error):
    with pytest.raises(error):
        parse_pronunciation(tokens, yue)
    assert validate(tokens, yue)


def test_serialize_needs_tones(yue):
    with pytest.raises(MissingTone):
        serialize_pronunciation(Pronunciation((Syllable((), ("aa",), ()),)))


def test_resource_rejects_bad_files():
    with pytest.raises(ResourceError):
        parse_resource("[phonemes]\n1 N\n[tones]\ncount 6\n")
    with pytest.raises(ResourceError):
        parse_resource("[phonemes]\n@: N\n[tones]\ncount 6\n")
    with pytest.raises(ResourceError):
        parse_resource("[phonemes]\na\n[tones]\ncount 6\n")
    with pytest.raises(ResourceError):
        parse_resource("[phonemes]\na N\n")


def test_unknown_letters_rejected(yue):
    with pytest.raises(UnknownGrapheme):
        yue.word("NAÏVE")
    assert yue.word("disney").text == "DISNEY"


def test_validate_flags_wrong_roles_in_built_syllables(yue):
    bad = Pronunciation((Syllable(("aa",), ("g",), (), 1),))
    kinds = {v.kind for v in validate(bad, yue)}
    assert kinds == {"role_violation"}
    # tones outside the inventory are reported
    odd = Pronunciation((Syllable((), ("aa",), (), 1), Syllable((), ("i",), ("k",), 9)))
    assert [v.kind for v in validate(odd, yue)] == ["tone_range"]


# ---------------------------------------------------------------------------
# properties

_STRUCTURE = re.compile(r"(O )?N( Cd)?")


@given(pronunciations(CANTONESE))
def test_structure_matches_regex_oracle(p):
    for syl, roles in zip(p.syllables, structure_of(p)):
        assert _STRUCTURE.fullmatch(" ".join(roles))
        assert (ONSET in roles) == bool(syl.onset)
        assert (CODA in roles) == bool(syl.coda)


@given(pronunciations(CANTONESE, max_syllables=6))
def test_round_trip_cantonese(p):
    tokens = serialize_pronunciation(p)
    assert parse_pronunciation(tokens, CANTONESE) == p
    assert serialize_pronunciation(parse_pronunciation(tokens, CANTONESE)) == tokens
    assert validate(p, CANTONESE) == []


@given(pronunciations(VIETNAMESE, max_syllables=6))
def test_round_trip_vietnamese(p):
    tokens = serialize_pronunciation(p)
    assert parse_pronunciation(tokens, VIETNAMESE) == p
    assert is_valid(p, VIETNAMESE)


_TOKENS = sorted(CANTONESE.phonemes) + [str(t) for t in range(0, 8)] + [".", "??"]


@given(st.lists(st.sampled_from(_TOKENS), max_size=10))
def test_validate_agrees_with_parse(tokens):
    try:
        parse_pronunciation(tokens, CANTONESE)
        parsed = True
    except Exception:
        parsed = False
    assert parsed == (validate(tokens, CANTONESE) == [])


@given(pronunciations(CANTONESE))
def test_each_accepted_syllable_has_one_tone_in_range(p):
    q = parse_pronunciation(serialize_pronunciation(p), CANTONESE)
    assert all(1 <= s.tone <= CANTONESE.tone_count for s in q.syllables)
