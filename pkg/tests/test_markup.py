"""Markup parsing, emission, and the content-preservation verifier."""

import random
import re

from larf.markup import emit_markup, parse_markup, verify_preservation, verify_text
from larf.model import (
    AnnotationKind,
    AnnotationSpan,
    apply_annotations,
    normalize,
)

from conftest import random_document, random_spans, random_text


def spans_of(doc):
    return [(s.kind, s.start, s.end) for s in doc.spans]


def texts_of(doc):
    return [(s.kind.value, doc.text[s.start:s.end]) for s in doc.spans]


# --- parse_markup ---------------------------------------------------------


def test_parse_member_names():
    doc = parse_markup("<strong>Jisoo</strong>, <strong>Jennie</strong>").document
    assert texts_of(doc) == [("strong", "Jisoo"), ("strong", "Jennie")]
    assert doc.text == "Jisoo, Jennie"


def test_parse_plain_text():
    parsed = parse_markup("plain text")
    assert parsed.document.text == "plain text"
    assert parsed.document.spans == ()
    assert parsed.warnings == ()
    assert parsed.dropped_tags == ()


def test_parse_drops_unknown_tags_keeps_text():
    raw = "<script>x</script>hello <div>world</div>"
    parsed = parse_markup(raw)
    assert parsed.document.text == "xhello world"
    assert [name for name, _ in parsed.dropped_tags] == ["script", "div"]
    # Sanitizer oracle: regex-strip every tag, compare retained text.
    oracle = normalize(re.sub(r"<[^<>]+>", "", raw))
    assert normalize(parsed.document.text) == oracle


def test_parse_case_insensitive_and_b_alias():
    doc = parse_markup("<B>a</B> <STRONG>b</STRONG> <Mark>c</Mark> <U>d</U>").document
    assert [t for t, _ in texts_of(doc)] == ["strong", "strong", "mark", "u"]


def test_parse_paragraph_tags():
    doc = parse_markup("<p>A</p>\n<p>B</p>").document
    assert doc.text == "A\n\nB"
    assert doc.paragraph_breaks == (3,)

    doc = parse_markup("A<br>B").document
    assert doc.text == "A\n\nB"


def test_parse_blank_lines_split_paragraphs():
    doc = parse_markup("A\n\nB").document
    assert doc.text == "A\n\nB"
    assert doc.paragraph_breaks == (3,)


def test_parse_decodes_the_five_entities():
    doc = parse_markup("a &amp; b &lt;c&gt; &quot;d&apos;").document
    assert doc.text == "a & b <c> \"d'"
    # Double-encoded stays single-decoded.
    assert parse_markup("&amp;lt;").document.text == "&lt;"


def test_parse_leaves_unknown_entities_alone():
    assert parse_markup("a &copy; b &#60;").document.text == "a &copy; b &#60;"


def test_parse_unclosed_tag_autocloses_at_paragraph_end():
    parsed = parse_markup("<strong>abc")
    assert texts_of(parsed.document) == [("strong", "abc")]
    assert any("auto-closed" in w for w in parsed.warnings)

    parsed = parse_markup("<p><mark>abc</p><p>def</p>")
    assert texts_of(parsed.document) == [("mark", "abc")]


def test_parse_stray_closer_warned_and_ignored():
    parsed = parse_markup("abc</strong>")
    assert parsed.document.text == "abc"
    assert parsed.document.spans == ()
    assert any("stray" in w for w in parsed.warnings)


def test_parse_improper_nesting_repaired():
    parsed = parse_markup("<strong>a<mark>b</strong>c</mark>")
    assert parsed.document.text == "abc"
    assert texts_of(parsed.document) == [("strong", "ab"), ("mark", "b")]
    assert any("improperly nested" in w for w in parsed.warnings)


def test_parse_duplicate_nested_kind_ignored():
    parsed = parse_markup("<strong>a<strong>b</strong>c</strong>")
    assert texts_of(parsed.document) == [("strong", "abc")]
    assert any("duplicate" in w for w in parsed.warnings)


def test_parse_merges_adjacent_same_kind():
    doc = parse_markup("<strong>a</strong><strong>b</strong>").document
    assert texts_of(doc) == [("strong", "ab")]


def test_parse_attributes_ignored_with_warning():
    parsed = parse_markup('<strong class="x">a</strong>')
    assert texts_of(parsed.document) == [("strong", "a")]
    assert any("attributes" in w for w in parsed.warnings)


def test_parse_self_closing_annotation_ignored():
    parsed = parse_markup("a<u/>b")
    assert parsed.document.text == "ab"
    assert parsed.document.spans == ()


def test_parse_whitespace_only_paragraphs_dropped():
    doc = parse_markup("<p>  </p><p>A</p>").document
    assert doc.text == "A"
    assert doc.paragraph_breaks == ()


def test_parse_totality_fuzz():
    rng = random.Random(99)
    tag_pool = [
        "<strong>", "</strong>", "<mark>", "</mark>", "<u>", "</u>", "<b>", "</b>",
        "<p>", "</p>", "<br>", "<br/>", "<div>", "</div>", "<script>", "</script>",
        "<span style='x'>", "<<", "< ", "<3>", "&amp;", "&lt;", "&bogus;", "<em>",
    ]
    text_pool = ["word", " ", "\n", "\n\n", "123", "é", '"q"']
    for _ in range(500):
        raw = "".join(
            rng.choice(tag_pool) if rng.random() < 0.4 else rng.choice(text_pool)
            for _ in range(rng.randint(0, 30))
        )
        parsed = parse_markup(raw)  # must never raise
        assert {s.kind for s in parsed.document.spans} <= set(AnnotationKind)
        parsed.document.validate()


def test_parse_logs_every_dropped_tag():
    raw = "<div>a</div> <span>b</span> <img/> <script>c</script>"
    parsed = parse_markup(raw)
    assert [name for name, _ in parsed.dropped_tags] == ["div", "span", "img", "script"]
    positions = [pos for _, pos in parsed.dropped_tags]
    assert positions == sorted(positions)
    assert all(raw[pos] == "<" for pos in positions)


# --- verify_preservation --------------------------------------------------


def test_verify_identity_passes():
    report = verify_preservation("abc", parse_markup("abc"))
    assert report.passed
    assert report.diffs == ()


def test_verify_ignores_markup_and_reflow():
    original = "one two\nthree four"
    report = verify_preservation(original, parse_markup("<p>one <strong>two</strong>\n\nthree four</p>"))
    assert report.passed


def test_verify_reports_word_diff():
    report = verify_preservation("the red pyramid", parse_markup("the blue pyramid"))
    assert not report.passed
    assert len(report.diffs) == 1
    diff = report.diffs[0]
    assert (diff.original, diff.produced, diff.position) == ("red", "blue", 4)


def _lcs_words(a, b):
    # Independent LCS oracle: classic DP over words.
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) - 1, -1, -1):
        for j in range(len(b) - 1, -1, -1):
            if a[i] == b[j]:
                table[i][j] = table[i + 1][j + 1] + 1
            else:
                table[i][j] = max(table[i + 1][j], table[i][j + 1])
    return table[0][0]


def test_verify_diff_gap_count_matches_lcs_oracle():
    cases = [
        ("the red pyramid", "the blue pyramid"),
        ("a b c d", "a c d"),
        ("a b c", "a b c d e"),
        ("one two three", "uno dos tres"),
    ]
    for original, produced in cases:
        report = verify_text(original, produced)
        a, b = original.split(), produced.split()
        lcs = _lcs_words(a, b)
        changed_orig = sum(len(d.original.split()) if d.original else 0 for d in report.diffs)
        changed_prod = sum(len(d.produced.split()) if d.produced else 0 for d in report.diffs)
        assert changed_orig == len(a) - lcs
        assert changed_prod == len(b) - lcs


def _reconstruct(report):
    """Splice the produced fragments into the original word sequence."""
    original = report.original_normalized
    words = original.split(" ") if original else []
    for diff in sorted(report.diffs, key=lambda d: d.position, reverse=True):
        if diff.position >= len(original) and not diff.original:
            index = len(words)  # insertion after the last word
        else:
            index = original[:diff.position].count(" ")
        take = len(diff.original.split(" ")) if diff.original else 0
        insert = diff.produced.split(" ") if diff.produced else []
        words[index:index + take] = insert
    return " ".join(words)


def test_verify_diff_completeness_reconstructs_produced():
    rng = random.Random(4)
    for _ in range(300):
        original = random_text(rng)
        words = normalize(original).split(" ")
        mutated = list(words)
        for _ in range(rng.randint(1, 4)):
            op = rng.choice(["replace", "delete", "insert"])
            if op == "replace" and mutated:
                mutated[rng.randrange(len(mutated))] = "CHANGED"
            elif op == "delete" and mutated:
                del mutated[rng.randrange(len(mutated))]
            else:
                mutated.insert(rng.randint(0, len(mutated)), "EXTRA")
        produced = " ".join(mutated)
        report = verify_text(original, produced)
        assert _reconstruct(report) == normalize(produced)
        assert report.passed == (normalize(original) == normalize(produced))


def test_verify_report_json_shape():
    report = verify_text("a b", "a c")
    data = report.to_json()
    assert set(data) == {"passed", "diffs"}
    assert data["diffs"][0] == {"original": "b", "produced": "c", "position": 2}


# --- emit_markup ----------------------------------------------------------


def test_emit_minimal_paragraph():
    assert emit_markup(apply_annotations("hi", [])) == "<p>hi</p>"


def test_emit_empty_document():
    assert emit_markup(apply_annotations("", [])) == ""


def test_emit_highlighted_sentence():
    text = "BlackPink has gained global recognition and a strong fan following."
    doc = apply_annotations(text, [AnnotationSpan(AnnotationKind.HIGHLIGHT, 0, len(text))])
    assert emit_markup(doc) == f"<p><mark>{text}</mark></p>"


def test_emit_escapes_entities():
    doc = apply_annotations("a & b < c > \"d'", [])
    assert emit_markup(doc) == "<p>a &amp; b &lt; c &gt; &quot;d&apos;</p>"


def test_emit_nested_order_deterministic():
    spans = [
        AnnotationSpan(AnnotationKind.EMPHASIS, 0, 3),
        AnnotationSpan(AnnotationKind.HIGHLIGHT, 0, 3),
    ]
    html = emit_markup(apply_annotations("abc", spans))
    assert html == "<p><mark><strong>abc</strong></mark></p>"
    assert emit_markup(apply_annotations("abc", spans)) == html


def test_emit_paragraphs_and_breaks():
    doc = apply_annotations("A\n\nB", [AnnotationSpan(AnnotationKind.EMPHASIS, 3, 4)])
    assert emit_markup(doc) == "<p>A</p>\n<p><strong>B</strong></p>"


def test_emit_splits_span_crossing_paragraphs():
    doc = apply_annotations("ab\n\ncd", [AnnotationSpan(AnnotationKind.UNDERLINE, 0, 6)])
    assert emit_markup(doc) == "<p><u>ab</u></p>\n<p><u>cd</u></p>"


def test_parse_emit_round_trip_random():
    rng = random.Random(11)
    for _ in range(1000):
        doc = random_document(rng)
        parsed = parse_markup(emit_markup(doc)).document
        assert parsed.text == doc.text
        assert set(spans_of(parsed)) == set(spans_of(doc))
        assert parsed.paragraph_breaks == doc.paragraph_breaks


def test_verification_soundness_end_to_end():
    rng = random.Random(12)
    for _ in range(300):
        text = random_text(rng)
        spans = random_spans(rng, 0, len(text))
        doc = apply_annotations(text, spans)
        report = verify_preservation(text, parse_markup(emit_markup(doc)))
        assert report.passed
