"""Grounded-caption parsing, box stripping, and word counts."""

from hypothesis import given, settings
from hypothesis import strategies as st

from capeval.geometry import BBox, BoxGroup, encode_group
from capeval.grounded import parse_grounded, strip_boxes, word_count


class TestParseGrounded:
    def test_single_mention(self):
        parsed = parse_grounded("Two elephants [0.10, 0.20, 0.50, 0.90] are in a field")
        assert parsed.plain == "Two elephants are in a field"
        assert parsed.phrases == ["Two elephants"]
        assert parsed.mentions[0].boxes.boxes[0] == BBox(0.10, 0.20, 0.50, 0.90)

    def test_box_free_text(self):
        parsed = parse_grounded("A dog runs.")
        assert parsed.plain == "A dog runs."
        assert parsed.mentions == ()

    def test_malformed_group_dropped_but_removed(self):
        parsed = parse_grounded("a cat [0.1, 0.2] sits")
        assert parsed.plain == "a cat sits"
        assert parsed.mentions == ()
        assert parsed.malformed_groups == 1

    def test_mention_spans_index_into_plain(self):
        raw = "A woman [0.30, 0.15, 0.58, 0.90] rides a bike [0.25, 0.45, 0.65, 0.95] home."
        parsed = parse_grounded(raw)
        assert parsed.plain == "A woman rides a bike home."
        assert parsed.phrases == ["A woman", "rides a bike"]
        for m in parsed.mentions:
            assert 0 <= m.start < m.end <= len(parsed.plain)

    def test_spans_ordered_and_disjoint(self):
        raw = "a cat [0.1, 0.1, 0.3, 0.3] and a dog [0.4, 0.4, 0.9, 0.9] nap"
        parsed = parse_grounded(raw)
        assert parsed.phrases == ["a cat", "and a dog"]
        last_end = 0
        for m in parsed.mentions:
            assert m.start >= last_end
            last_end = m.end

    def test_phrase_stops_at_punctuation(self):
        raw = "Near the shore, two boats [0.1, 0.6, 0.9, 0.9] float"
        parsed = parse_grounded(raw)
        assert parsed.phrases == ["two boats"]

    def test_phrase_capped_at_six_tokens(self):
        raw = "one two three four five six seven eight [0.1, 0.1, 0.2, 0.2] end"
        parsed = parse_grounded(raw)
        assert parsed.phrases == ["three four five six seven eight"]

    def test_group_with_no_phrase_is_unattached(self):
        parsed = parse_grounded("[0.1, 0.1, 0.2, 0.2] something")
        assert parsed.plain == "something"
        assert parsed.mentions == ()
        assert parsed.unattached_groups == 1

    def test_multibox_group(self):
        raw = "Two dogs [0.10, 0.30, 0.35, 0.80; 0.40, 0.28, 0.62, 0.78] run"
        parsed = parse_grounded(raw)
        assert len(parsed.mentions[0].boxes) == 2

    def test_mention_count_equals_wellformed_groups(self):
        raw = (
            "A man [0.2, 0.1, 0.5, 0.9] with a hat [0.25, 0.1, 0.4, 0.2] "
            "and junk [nope] walks"
        )
        parsed = parse_grounded(raw)
        assert len(parsed.mentions) == 2
        assert parsed.malformed_groups == 1


class TestStripBoxes:
    def test_matches_parse_plain(self):
        raw = "Two elephants [0.10, 0.20, 0.50, 0.90] are in a field"
        assert strip_boxes(raw) == parse_grounded(raw).plain

    def test_empty(self):
        assert strip_boxes("") == ""

    def test_two_groups_single_spaces(self):
        raw = "a cat [0.1, 0.1, 0.3, 0.3] sits near a dog [0.4, 0.4, 0.9, 0.9] quietly"
        assert strip_boxes(raw) == "a cat sits near a dog quietly"

    @given(st.text(max_size=200))
    @settings(max_examples=300)
    def test_idempotent(self, text):
        once = strip_boxes(text)
        assert strip_boxes(once) == once

    @given(st.text(alphabet="ab [](),;.0123456789", max_size=120))
    @settings(max_examples=300)
    def test_idempotent_bracket_heavy(self, text):
        once = strip_boxes(text)
        assert strip_boxes(once) == once


@st.composite
def grounded_texts(draw):
    """Interleave encoded groups into word text; returns (raw, groups)."""
    coords = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
    words = st.text(alphabet="abcdefg", min_size=1, max_size=8)
    n_groups = draw(st.integers(min_value=0, max_value=3))
    parts = [draw(words)]
    groups = []
    for _ in range(n_groups):
        n_boxes = draw(st.integers(min_value=1, max_value=3))
        boxes = []
        for _ in range(n_boxes):
            x1, x2 = sorted((draw(coords), draw(coords)))
            y1, y2 = sorted((draw(coords), draw(coords)))
            boxes.append(BBox(x1, y1, x2, y2))
        group = BoxGroup(tuple(boxes))
        groups.append(group)
        parts.append(" " + encode_group(group) + " " + draw(words))
    return "".join(parts), groups


class TestComposition:
    @given(grounded_texts())
    @settings(max_examples=200)
    def test_encoded_groups_round_trip_through_text(self, case):
        raw, groups = case
        parsed = parse_grounded(raw)
        assert len(parsed.mentions) == len(groups)
        for mention, group in zip(parsed.mentions, groups):
            assert len(mention.boxes) == len(group)
            for a, b in zip(mention.boxes, group.boxes):
                for u, v in zip(a.as_tuple(), b.as_tuple()):
                    assert abs(u - v) <= 0.005 + 1e-12


class TestWordCount:
    def test_simple(self):
        assert word_count("A small bird.") == 3

    def test_empty(self):
        assert word_count("") == 0
        assert word_count("   ") == 0

    def test_typical_caption_length(self):
        assert word_count("A man rides a bright red bike down the street.") == 10
