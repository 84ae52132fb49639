"""Canonical-form search, its statistics, and the naive reference search."""

import json

import pytest

from quandlekit import (
    ParamOutOfRange,
    RepeatedLengthsUnsupported,
    SearchSpec,
    SizeLimitExceeded,
    affine_quandle,
    are_isomorphic,
    classify_shq,
    is_connected,
    naive_connected_quandles,
    profile,
    prune_report,
    save_search_result,
    search_by_profile,
    validate_quandle,
)
from quandlekit.search import _candidate_count, _cycle_candidates
from conftest import dihedral_quandle


class TestSearchSpec:
    def test_order(self):
        assert SearchSpec((1, 2, 6)).order == 9

    def test_rejects_bad_lengths(self):
        with pytest.raises(ParamOutOfRange):
            SearchSpec((1,))
        with pytest.raises(ParamOutOfRange):
            SearchSpec((2, 4))
        with pytest.raises(ParamOutOfRange):
            SearchSpec((1, 6, 2))
        with pytest.raises(RepeatedLengthsUnsupported):
            SearchSpec((1, 2, 2))


class TestCandidateCount:
    def test_closed_form_matches_enumeration(self):
        for n, lengths in [(9, (1, 2, 6)), (5, (1, 4)), (4, (1, 3)), (7, (1, 2, 4))]:
            assert _candidate_count(n, lengths) == len(
                _cycle_candidates(n, lengths, n - 1)
            )

    def test_candidates_have_required_shape(self):
        for img in _cycle_candidates(5, (1, 4), 2):
            assert img[2] == 2
            assert sum(1 for i, v in enumerate(img) if i == v) == 1

    def test_infeasible_profile_refused_upfront(self):
        with pytest.raises(SizeLimitExceeded, match="candidate"):
            search_by_profile(SearchSpec((1, 2, 6, 18)))


class TestKnownProfiles:
    def test_smallest_profile_finds_dihedral_3(self):
        res = search_by_profile(SearchSpec((1, 2)))
        assert len(res.quandles) == 1
        assert res.iso_classes == ((0,),)
        assert are_isomorphic(res.quandles[0], dihedral_quandle(3)) is not None

    def test_1_3_finds_the_galois_quandle(self):
        from conftest import cyclic_type_quandle

        res = search_by_profile(SearchSpec((1, 3)))
        assert len(res.quandles) == 1
        assert are_isomorphic(res.quandles[0], cyclic_type_quandle(2, 2)) is not None

    def test_1_4_finds_both_affine_classes(self):
        res = search_by_profile(SearchSpec((1, 4)))
        assert len(res.quandles) == 2
        assert len(res.iso_classes) == 2
        for h in (2, 3):
            target = affine_quandle(5, h)
            hits = [
                i
                for i, q in enumerate(res.quandles)
                if are_isomorphic(q, target) is not None
            ]
            assert len(hits) == 1, h

    def test_1_5_is_empty(self):
        res = search_by_profile(SearchSpec((1, 5)))
        assert res.quandles == () and res.iso_classes == ()

    def test_golden_profile_counts(self):
        res = search_by_profile(SearchSpec((1, 2, 6)))
        assert len(res.quandles) == 6
        assert res.iso_classes == ((0, 1), (2, 3), (4, 5))

    def test_golden_table_listed_verbatim(self, q94):
        res = search_by_profile(SearchSpec((1, 2, 6)))
        assert q94 in res.quandles

    def test_results_validate_and_match_profile(self):
        for lengths in [(1, 2), (1, 3), (1, 4), (1, 2, 6)]:
            res = search_by_profile(SearchSpec(lengths))
            for q in res.quandles:
                assert validate_quandle(q.rows).ok
                assert is_connected(q)
                assert profile(q).connected_form.lengths == lengths

    def test_results_are_canonical_shqs_when_applicable(self):
        from quandlekit import decomposition_of

        res = search_by_profile(SearchSpec((1, 2, 6)))
        for q in res.quandles:
            decomposition_of(q)  # canonical labeling, no raise
            assert classify_shq(q) is not None


class TestStats:
    def test_golden_filter_funnel(self):
        stats = search_by_profile(SearchSpec((1, 2, 6))).stats
        assert stats.raw_space == 3360 * 3360
        assert stats.per_generator_raw == (3360, 3360)
        assert stats.per_generator_unary == (3, 8)
        assert stats.nodes_expanded == 27
        assert stats.conjugation_pass == 6
        assert stats.distributivity_pass == 6
        assert stats.connected_pass == 6
        assert stats.elapsed > 0

    def test_conjugation_implies_distributivity(self):
        # leaves that satisfy the conjugation closure always validate
        for lengths in [(1, 2), (1, 3), (1, 4), (1, 5), (1, 2, 6)]:
            stats = search_by_profile(SearchSpec(lengths)).stats
            assert stats.conjugation_pass == stats.distributivity_pass

    def test_as_dict_has_no_timing(self):
        d = search_by_profile(SearchSpec((1, 2))).stats.as_dict()
        assert "elapsed" not in d
        assert d["fixed_point"] == d["raw_space"]
        assert set(d) == {
            "raw_space",
            "per_generator_raw",
            "per_generator_unary",
            "nodes_expanded",
            "fixed_point",
            "conjugation",
            "distributivity",
            "connectivity",
        }

    def test_prune_report_matches_search(self):
        a = prune_report(SearchSpec((1, 4)))
        b = search_by_profile(SearchSpec((1, 4))).stats
        assert a.as_dict() == b.as_dict()


class TestDeterminismAndWorkers:
    def test_repeat_runs_identical(self):
        a = search_by_profile(SearchSpec((1, 2, 6)))
        b = search_by_profile(SearchSpec((1, 2, 6)))
        assert a.quandles == b.quandles
        assert a.iso_classes == b.iso_classes
        assert a.stats.as_dict() == b.stats.as_dict()

    def test_workers_do_not_change_output(self):
        a = search_by_profile(SearchSpec((1, 2, 6)), workers=1)
        b = search_by_profile(SearchSpec((1, 2, 6)), workers=3)
        assert a.quandles == b.quandles
        assert a.iso_classes == b.iso_classes
        assert a.stats.as_dict() == b.stats.as_dict()

    def test_bad_worker_count(self):
        with pytest.raises(ParamOutOfRange):
            search_by_profile(SearchSpec((1, 2)), workers=0)

    def test_dedup_off_skips_grouping(self):
        res = search_by_profile(SearchSpec((1, 2, 6)), dedup=False)
        assert len(res.quandles) == 6
        assert res.iso_classes == ()


class TestCaps:
    def test_explicit_cap(self):
        with pytest.raises(SizeLimitExceeded):
            search_by_profile(SearchSpec((1, 2, 6)), max_order=8)

    def test_default_cap(self):
        with pytest.raises(SizeLimitExceeded):
            search_by_profile(SearchSpec((1, 40)))  # order 41 > default 32

    def test_env_cap(self, monkeypatch):
        monkeypatch.setenv("QUANDLEKIT_MAX_ORDER", "8")
        with pytest.raises(SizeLimitExceeded):
            search_by_profile(SearchSpec((1, 2, 6)))
        assert len(search_by_profile(SearchSpec((1, 2, 6)), max_order=9).quandles) == 6


class TestSaveSearchResult:
    def test_layout_and_manifest(self, tmp_path):
        res = search_by_profile(SearchSpec((1, 2, 6)))
        manifest = save_search_result(res, tmp_path / "out")
        files = sorted(p.name for p in (tmp_path / "out").iterdir())
        assert files == ["manifest.json"] + [f"q{i:03d}.qdl" for i in range(6)]
        on_disk = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert on_disk == manifest
        assert manifest["schema"] == "quandlekit.search/1"
        assert manifest["profile"] == [1, 2, 6]
        assert manifest["order"] == 9
        assert manifest["count"] == 6
        assert manifest["iso_classes"] == [[0, 1], [2, 3], [4, 5]]
        assert manifest["stats"]["conjugation"] == 6

    def test_files_parse_back(self, tmp_path):
        from quandlekit import read_qdl

        res = search_by_profile(SearchSpec((1, 4)))
        save_search_result(res, tmp_path)
        for i, q in enumerate(res.quandles):
            loaded = read_qdl(tmp_path / f"q{i:03d}.qdl")
            assert loaded == q
        text = (tmp_path / "q000.qdl").read_text()
        assert text.startswith("# profile (1, 4)\n")

    def test_bytes_stable_across_runs(self, tmp_path):
        save_search_result(search_by_profile(SearchSpec((1, 3))), tmp_path / "a")
        save_search_result(search_by_profile(SearchSpec((1, 3))), tmp_path / "b")
        for name in ("q000.qdl", "manifest.json"):
            assert (tmp_path / "a" / name).read_bytes() == (
                tmp_path / "b" / name
            ).read_bytes()


class TestNaiveReference:
    def test_frozen_counts(self):
        assert [len(naive_connected_quandles(n)) for n in range(1, 6)] == [
            1, 0, 1, 2, 18
        ]

    def test_tables_are_valid_connected(self):
        for n in range(1, 6):
            for q in naive_connected_quandles(n):
                assert validate_quandle(q.rows).ok
                assert is_connected(q)

    def test_order_3_is_dihedral(self):
        (q,) = naive_connected_quandles(3)
        assert are_isomorphic(q, dihedral_quandle(3)) is not None

    def test_golden_listed_at_order_9_would_be_too_slow(self):
        # the reference search is for tiny orders only; just check the guard
        with pytest.raises(ParamOutOfRange):
            naive_connected_quandles(0)

    def test_order_5_profile_split(self):
        profs = [
            profile(q).connected_form.lengths for q in naive_connected_quandles(5)
        ]
        assert profs.count((1, 4)) == 12
        assert profs.count((1, 2, 2)) == 6
