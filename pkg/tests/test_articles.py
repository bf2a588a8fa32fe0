"""Parser tests: grammar examples, round-trips, and the line-scan oracle."""

from __future__ import annotations

import random

import pytest

from formalib.articles import parse_article, extract_symbols, validate_article_name
from formalib.errors import (
    InvalidArticleName,
    MalformedEnvironment,
    UnterminatedBlock,
)

from helpers import count_item_openers, gen_article_source

T1_SOURCE = "environ theorems TARSKI;\nbegin\ntheorem Th1: contradiction;\n"

PROOF_SOURCE = """environ
begin
theorem Th1: x = x
proof
  thus x = x;
end;
"""


def test_minimal_article_with_one_theorem():
    art = parse_article("T1", T1_SOURCE)
    assert [(d.kind, list(d.names)) for d in art.env] == [("theorems", ["TARSKI"])]
    assert len(art.items) == 1
    item = art.items[0]
    assert item.anchor == "T1:theorem:1"
    assert item.label == "Th1"
    assert item.span == (3, 3)


def test_empty_environment_and_body():
    art = parse_article("T2", "environ\nbegin\n")
    assert art.env == ()
    assert art.items == ()


def test_statement_text_stops_before_proof_span_includes_end():
    art = parse_article("T3", PROOF_SOURCE)
    (item,) = art.items
    assert item.span == (3, 6)
    assert item.statement_text == "theorem Th1: x = x"


def test_unlabeled_theorem_still_yields_item():
    art = parse_article("T4", "environ\nbegin\ntheorem x = x;\n")
    (item,) = art.items
    assert item.label == ""
    assert item.anchor == "T4:theorem:1"


def test_label_with_detached_colon():
    art = parse_article("T4", "environ\nbegin\ntheorem Th2 : x = x;\n")
    assert art.items[0].label == "Th2"


def test_nested_proofs_close_at_outermost_end():
    src = (
        "environ\nbegin\n"
        "theorem Th1: x = x\n"
        "proof\n"
        "  x = y;\n"
        "  proof\n"
        "    thus y = y;\n"
        "  end;\n"
        "  thus x = x;\n"
        "end;\n"
        "theorem Th2: y = y;\n"
    )
    art = parse_article("NEST", src)
    assert [i.anchor for i in art.items] == ["NEST:theorem:1", "NEST:theorem:2"]
    assert art.items[0].span == (3, 10)
    assert art.items[0].statement_text == "theorem Th1: x = x"


def test_definition_statement_excludes_internal_proof():
    src = (
        "environ\nbegin\n"
        "definition\n"
        "  func empty_set -> set means x = x;\n"
        "  correctness\n"
        "  proof\n"
        "    thus x = x;\n"
        "  end;\n"
        "end;\n"
    )
    art = parse_article("DEFP", src)
    (item,) = art.items
    assert item.span == (3, 9)
    assert "thus" not in item.statement_text
    assert "proof" not in item.statement_text
    assert "func empty_set" in item.statement_text
    assert item.statement_text.endswith("end;")


def test_comment_lines_never_open_items():
    src = "environ\nbegin\n:: theorem not real;\n  :: definition fake\ntheorem x = x;\n"
    art = parse_article("CMT", src)
    assert len(art.items) == 1
    assert art.items[0].span[0] == 5


def test_ordinals_are_per_kind_and_contiguous():
    src = (
        "environ\nbegin\n"
        "theorem a = a;\n"
        "definition\n  func f1 -> set means a = a;\nend;\n"
        "theorem b = b;\n"
        "scheme S1 { P[set] } :\n  ex x st x = x\nend;\n"
        "theorem c = c;\n"
    )
    art = parse_article("ORD", src)
    anchors = [i.anchor for i in art.items]
    assert anchors == [
        "ORD:theorem:1",
        "ORD:definition:1",
        "ORD:theorem:2",
        "ORD:scheme:1",
        "ORD:theorem:3",
    ]
    assert art.items[3].label == "S1"


def test_directive_names_duplicates_preserved_and_multiline():
    src = "environ\n theorems TARSKI,\n   TARSKI, XBOOLE_0;\nbegin\n"
    art = parse_article("DUP", src)
    assert art.env[0].names == ("TARSKI", "TARSKI", "XBOOLE_0")


def test_long_directive_name_warns_but_parses():
    src = "environ theorems VERYLONGNAME1;\nbegin\n"
    art = parse_article("LNG", src)
    assert art.env[0].names == ("VERYLONGNAME1",)
    assert any("VERYLONGNAME1" in w for w in art.warnings)


def test_long_article_name_warns():
    name, warnings = validate_article_name("LONGNAME9")
    assert name == "LONGNAME9"
    assert warnings


@pytest.mark.parametrize("bad", ["", "1ABC", "lower", "A-B", "A B"])
def test_invalid_article_names_rejected(bad):
    with pytest.raises(InvalidArticleName):
        validate_article_name(bad)


@pytest.mark.parametrize(
    "source,fragment,line",
    [
        ("begin\n", "environ", 1),
        ("theorem x;\n", "environ", 1),
        ("environ\n theorems TARSKI;\n", "begin", 3),
        ("environ\n theorems TARSKI\nbegin\n", "terminating", 3),
        ("environ\n theorems;\nbegin\n", "names no articles", 2),
        ("environ\n wibble TARSKI;\nbegin\n", "wibble", 2),
        ("environ\n theorems lower;\nbegin\n", "lower", 2),
    ],
)
def test_malformed_environments(source, fragment, line):
    with pytest.raises(MalformedEnvironment) as err:
        parse_article("BAD", source)
    assert fragment in str(err.value)
    assert err.value.line == line


@pytest.mark.parametrize(
    "source,kind,line",
    [
        ("environ\nbegin\ndefinition\n  func f -> set;\n", "definition", 3),
        ("environ\nbegin\nscheme S { P[set] } :\n ex x st x = x\n", "scheme", 3),
        ("environ\nbegin\ntheorem x = x\nproof\n thus x = x;\n", "proof", 4),
        ("environ\nbegin\ntheorem x = x\n", "theorem", 3),
    ],
)
def test_unterminated_blocks(source, kind, line):
    with pytest.raises(UnterminatedBlock) as err:
        parse_article("BAD", source)
    assert err.value.kind == kind
    assert err.value.line == line


def test_extract_symbols_single_func():
    src = "environ\nbegin\ndefinition\n  func union A -> set means x = x;\nend;\n"
    art = parse_article("SYM", src)
    assert art.symbols == (("union", "SYM:definition:1"),)


def test_extract_symbols_empty_without_definitions():
    art = parse_article("SYM", "environ\nbegin\ntheorem x = x;\n")
    assert extract_symbols(art) == []


def test_extract_symbols_pred_and_attr_in_source_order():
    src = (
        "environ\nbegin\n"
        "definition\n"
        "  pred misses A B means x = x;\n"
        "  attr finite A means x = x;\n"
        "end;\n"
    )
    art = parse_article("SYM", src)
    assert art.symbols == (
        ("misses", "SYM:definition:1"),
        ("finite", "SYM:definition:1"),
    )


def test_symbols_inside_definition_proofs_ignored():
    src = (
        "environ\nbegin\n"
        "definition\n"
        "  func outer A -> set means x = x;\n"
        "  correctness\n"
        "  proof\n"
        "    func hidden A;\n"
        "  end;\n"
        "end;\n"
    )
    art = parse_article("SYM", src)
    assert [s for s, _ in art.symbols] == ["outer"]


def test_round_trip_and_oracle_on_random_articles():
    for seed in range(100):
        rng = random.Random(seed)
        source = gen_article_source(rng)
        art = parse_article("RND", source)
        assert "\n".join(art.lines) == source
        assert len(art.items) == count_item_openers(source), source
        # determinism and anchor uniqueness
        again = parse_article("RND", source)
        assert again == art
        anchors = [i.anchor for i in art.items]
        assert len(set(anchors)) == len(anchors)
        for item in art.items:
            assert 1 <= item.span[0] <= item.span[1] <= len(art.lines)
        assert all(
            a.span[1] < b.span[0] for a, b in zip(art.items, art.items[1:])
        )


def test_crlf_round_trip_and_tokens():
    src = "environ theorems TARSKI;\r\nbegin\r\ntheorem Th1: x = x;\r\n"
    art = parse_article("CRLF", src)
    assert "\n".join(art.lines) == src
    assert art.env[0].names == ("TARSKI",)
    assert len(art.items) == 1


def test_empty_source_is_malformed():
    with pytest.raises(MalformedEnvironment):
        parse_article("EMPTY", "")
