"""Three-way merge semantics and the Myers LCS underneath."""

from __future__ import annotations

import random

from formalib.diff3 import diff3_merge, lcs_matches


def test_lcs_matches_basic():
    assert lcs_matches(["a", "b", "c"], ["a", "b", "c"]) == [(0, 0), (1, 1), (2, 2)]
    assert lcs_matches(["a", "b"], ["b", "a"]) in ([(0, 1)], [(1, 0)])
    assert lcs_matches([], ["a"]) == []
    assert lcs_matches(["x"], []) == []


def test_lcs_is_a_common_subsequence_on_random_inputs():
    alphabet = "abcd"
    for seed in range(50):
        rng = random.Random(seed)
        a = [rng.choice(alphabet) for _ in range(rng.randint(0, 12))]
        b = [rng.choice(alphabet) for _ in range(rng.randint(0, 12))]
        matches = lcs_matches(a, b)
        for i, j in matches:
            assert a[i] == b[j]
        assert all(
            i1 < i2 and j1 < j2
            for (i1, j1), (i2, j2) in zip(matches, matches[1:])
        )


def test_non_overlapping_edits_merge_cleanly():
    result = diff3_merge(["a", "b", "c"], ["a", "x", "b", "c"], ["a", "b", "c", "d"])
    assert result.clean
    assert list(result.merged_lines) == ["a", "x", "b", "c", "d"]


def test_divergent_edit_conflicts():
    result = diff3_merge(["a", "b", "c"], ["a", "B1", "c"], ["a", "B2", "c"])
    assert not result.clean
    (conflict,) = result.conflicts
    assert conflict.base_range == (1, 2)
    assert conflict.ours_lines == ("B1",)
    assert conflict.theirs_lines == ("B2",)
    assert "<<<<<<< ours" in result.merged_lines
    assert ">>>>>>> theirs" in result.merged_lines


def test_identity_merge():
    base = ["a", "b", "c"]
    result = diff3_merge(base, base, base)
    assert result.clean
    assert list(result.merged_lines) == base


def test_one_sided_changes_pass_through():
    base = ["a", "b", "c"]
    ours = ["a", "edited", "c", "tail"]
    assert list(diff3_merge(base, ours, base).merged_lines) == ours
    assert list(diff3_merge(base, base, ours).merged_lines) == ours


def test_identical_changes_on_both_sides_merge_cleanly():
    base = ["a", "b", "c"]
    both = ["a", "same-change", "c"]
    result = diff3_merge(base, both, both)
    assert result.clean
    assert list(result.merged_lines) == both


def test_swapping_sides_swaps_conflicts_keeps_classification():
    base = ["a", "b", "c", "d"]
    ours = ["a", "B1", "c", "x", "d"]
    theirs = ["a", "B2", "c", "y", "d"]
    fwd = diff3_merge(base, ours, theirs)
    rev = diff3_merge(base, theirs, ours)
    assert fwd.clean == rev.clean
    assert len(fwd.conflicts) == len(rev.conflicts)
    for c1, c2 in zip(fwd.conflicts, rev.conflicts):
        assert c1.base_range == c2.base_range
        assert c1.ours_lines == c2.theirs_lines
        assert c1.theirs_lines == c2.ours_lines


def test_deletion_against_context_edit_conflicts():
    base = ["keep", "doomed", "keep2"]
    ours = ["keep", "doomed-edited", "keep2"]
    theirs = ["keep", "keep2"]
    result = diff3_merge(base, ours, theirs)
    assert not result.clean


def test_disjoint_random_edits_merge_cleanly():
    # ours edits only the first half, theirs only the second half, with a
    # stable line between: every such merge must be clean and contain both.
    for seed in range(30):
        rng = random.Random(seed)
        first = [f"f{i}" for i in range(rng.randint(1, 6))]
        second = [f"s{i}" for i in range(rng.randint(1, 6))]
        base = first + ["anchor-line"] + second
        ours = [line + "-ours" for line in first] + ["anchor-line"] + second
        theirs = first + ["anchor-line"] + [line + "-theirs" for line in second]
        result = diff3_merge(base, ours, theirs)
        assert result.clean, seed
        expected = (
            [line + "-ours" for line in first]
            + ["anchor-line"]
            + [line + "-theirs" for line in second]
        )
        assert list(result.merged_lines) == expected
