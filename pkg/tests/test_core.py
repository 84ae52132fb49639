"""Tables, permutations, validation, and the .qdl text format."""

import random

import pytest

from quandlekit import (
    ConjugationViolation,
    CycleStructure,
    FixedPointMissing,
    IndexOutOfRange,
    InvalidQuandleError,
    ParseError,
    Permutation,
    QuandleTable,
    cycle_structure,
    format_qdl,
    from_translations,
    parse_qdl,
    read_qdl,
    right_translation,
    translations,
    validate_quandle,
    write_qdl,
)
from conftest import FIXTURES, Q94_ROWS, trivial_quandle


def random_permutation(rng: random.Random, n: int) -> Permutation:
    image = list(range(1, n + 1))
    rng.shuffle(image)
    return Permutation(tuple(image))


class TestCycleStructure:
    def test_from_lengths_sorts(self):
        assert CycleStructure.from_lengths([6, 1, 2]).lengths == (1, 2, 6)

    def test_str_groups_multiplicities(self):
        assert str(CycleStructure((1, 2, 6))) == "(1, 2, 6)"
        assert str(CycleStructure((1, 1, 1))) == "(1^3)"
        assert str(CycleStructure((1, 2, 2, 6))) == "(1, 2^2, 6)"

    def test_total(self):
        assert CycleStructure((1, 2, 6)).total == 9


class TestPermutation:
    def test_identity_and_call(self):
        p = Permutation.identity(4)
        assert [p(i) for i in range(1, 5)] == [1, 2, 3, 4]

    def test_call_out_of_range(self):
        p = Permutation.identity(3)
        with pytest.raises(IndexOutOfRange):
            p(0)
        with pytest.raises(IndexOutOfRange):
            p(4)

    def test_rejects_non_bijection(self):
        with pytest.raises(Exception):
            Permutation((1, 1, 3))

    def test_from_cycles(self):
        p = Permutation.from_cycles(9, [(2, 3), (4, 5, 6, 7, 8, 9)])
        assert p(1) == 1
        assert p(2) == 3 and p(3) == 2
        assert p(9) == 4

    def test_composition_convention(self):
        # (p * q)(i) = p(q(i))
        p = Permutation.from_cycles(3, [(1, 2)])
        q = Permutation.from_cycles(3, [(2, 3)])
        assert (p * q)(3) == 1

    def test_composition_associative(self):
        rng = random.Random(7)
        for _ in range(25):
            a, b, c = (random_permutation(rng, 8) for _ in range(3))
            assert (a * b) * c == a * (b * c)

    def test_inverse(self):
        rng = random.Random(8)
        for _ in range(25):
            p = random_permutation(rng, 9)
            assert p * p.inverse() == Permutation.identity(9)
            assert p.inverse() * p == Permutation.identity(9)

    def test_pow(self):
        rng = random.Random(9)
        for _ in range(10):
            p = random_permutation(rng, 7)
            assert p**0 == Permutation.identity(7)
            assert p**-1 == p.inverse()
            acc = Permutation.identity(7)
            for k in range(1, 8):
                acc = p * acc
                assert p**k == acc
            assert p**-3 == (p**3).inverse()

    def test_order_matches_iteration(self):
        rng = random.Random(10)
        for _ in range(20):
            p = random_permutation(rng, 8)
            k, acc = 1, p
            while acc != Permutation.identity(8):
                acc = p * acc
                k += 1
            assert p.order() == k

    def test_cycles_start_at_smallest(self):
        p = Permutation.from_cycles(6, [(5, 6), (2, 4, 3)])
        assert p.cycles() == ((1,), (2, 4, 3), (5, 6))

    def test_fixed_points(self):
        p = Permutation.from_cycles(5, [(2, 4)])
        assert p.fixed_points() == (1, 3, 5)

    def test_repr_uses_cycles(self):
        p = Permutation.from_cycles(4, [(1, 2)])
        assert "(1 2)" in repr(p)


class TestCycleStructureOfPermutation:
    def test_identity(self):
        assert cycle_structure(Permutation.identity(5)).lengths == (1, 1, 1, 1, 1)

    def test_golden_shape(self):
        p = Permutation.from_cycles(9, [(2, 3), (4, 5, 6, 7, 8, 9)])
        assert cycle_structure(p).lengths == (1, 2, 6)

    def test_matches_cycle_chasing_oracle(self):
        rng = random.Random(11)
        for _ in range(50):
            n = rng.randrange(1, 12)
            p = random_permutation(rng, n)
            # naive oracle: follow each element until it returns
            seen, lengths = set(), []
            for start in range(1, n + 1):
                if start in seen:
                    continue
                x, steps = start, 0
                while True:
                    x = p(x)
                    steps += 1
                    seen.add(x)
                    if x == start:
                        break
                lengths.append(steps)
            assert cycle_structure(p).lengths == tuple(sorted(lengths))


class TestValidateQuandle:
    def test_golden_fixture_is_valid(self):
        result = validate_quandle(Q94_ROWS)
        assert result.ok and result.order == 9
        assert str(result) == "valid quandle of order 9"

    def test_non_square(self):
        result = validate_quandle([(1, 2, 3), (2, 1)])
        assert (result.error, result.witness) == ("NonSquare", (1,))
        assert not validate_quandle([]).ok

    def test_entry_out_of_range(self):
        result = validate_quandle([(1, 3), (1, 2)])
        assert (result.error, result.witness) == ("EntryOutOfRange", (1, 2))
        result = validate_quandle([(1, 0), (1, 2)])
        assert result.error == "EntryOutOfRange"

    def test_idempotency_violation(self):
        result = validate_quandle([(1, 1, 1), (2, 2, 2), (3, 3, 2)])
        assert (result.error, result.witness) == ("IdempotencyViolation", (3,))

    def test_column_violation(self):
        result = validate_quandle([(1, 1), (1, 2)])
        assert (result.error, result.witness) == ("RightInvertibilityViolation", (1,))

    def test_distributivity_violation_first_witness(self):
        # swap entries (1,2) and (3,2); column 2 stays a permutation
        rows = [list(r) for r in Q94_ROWS]
        rows[0][1], rows[2][1] = rows[2][1], rows[0][1]
        result = validate_quandle(rows)
        assert result.error == "DistributivityViolation"
        assert result.witness == naive_first_distributivity_failure(rows)

    def test_numpy_path_matches_naive_oracle(self):
        # order 49 goes through the vectorized checker; corrupt it and compare
        from quandlekit import affine_quandle

        base = [list(r) for r in affine_quandle(49, 19).rows]
        rng = random.Random(12)
        for _ in range(10):
            rows = [list(r) for r in base]
            j = rng.randrange(49)
            i1, i2 = rng.sample(range(49), 2)
            rows[i1][j], rows[i2][j] = rows[i2][j], rows[i1][j]
            result = validate_quandle(rows)
            expect = naive_first_failure(rows)
            assert (result.error, result.witness) == expect

    def test_str_reports_witness(self):
        result = validate_quandle([(1, 1, 1), (2, 2, 2), (3, 3, 2)])
        assert "IdempotencyViolation" in str(result) and "(3,)" in str(result)


def naive_first_distributivity_failure(rows):
    n = len(rows)

    def op(a, b):
        return rows[a - 1][b - 1]

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                if op(op(i, j), k) != op(op(i, k), op(j, k)):
                    return (i, j, k)
    return None


def naive_first_failure(rows):
    """(error name, witness) by direct definition checks, in scan order."""
    n = len(rows)
    for i in range(1, n + 1):
        if rows[i - 1][i - 1] != i:
            return ("IdempotencyViolation", (i,))
    for j in range(1, n + 1):
        if sorted(rows[i - 1][j - 1] for i in range(1, n + 1)) != list(range(1, n + 1)):
            return ("RightInvertibilityViolation", (j,))
    w = naive_first_distributivity_failure(rows)
    if w is not None:
        return ("DistributivityViolation", w)
    return (None, ())


class TestQuandleTable:
    def test_op_and_bounds(self, q94):
        assert q94.op(1, 2) == 3
        assert q94.op(9, 9) == 9
        with pytest.raises(IndexOutOfRange):
            q94.op(0, 1)
        with pytest.raises(IndexOutOfRange):
            q94.op(1, 10)

    def test_from_rows_raises_with_result(self):
        with pytest.raises(InvalidQuandleError) as exc:
            QuandleTable.from_rows([(1, 1), (1, 2)])
        assert exc.value.result.error == "RightInvertibilityViolation"

    def test_equality_and_hash(self, q94):
        again = QuandleTable.from_rows(Q94_ROWS)
        assert q94 == again and hash(q94) == hash(again)
        assert q94 != trivial_quandle(9)


class TestRightTranslations:
    def test_golden_r1(self, q94):
        assert right_translation(q94, 1) == Permutation.from_cycles(
            9, [(2, 3), (4, 5, 6, 7, 8, 9)]
        )

    def test_trivial_is_identity(self):
        t = trivial_quandle(4)
        for i in range(1, 5):
            assert right_translation(t, i) == Permutation.identity(4)

    def test_column_4_structure(self, q94):
        assert cycle_structure(right_translation(q94, 4)).lengths == (1, 2, 6)

    def test_translations_are_columns(self, q94):
        for i, p in enumerate(translations(q94), start=1):
            assert all(p(j) == q94.op(j, i) for j in range(1, 10))


class TestFromTranslations:
    def test_round_trip_golden(self, q94):
        assert from_translations(translations(q94)) == q94

    def test_round_trip_property(self, shq_fixtures):
        for name, q in shq_fixtures:
            assert from_translations(translations(q)) == q, name

    def test_identities_build_trivial(self):
        perms = [Permutation.identity(3)] * 3
        assert from_translations(perms) == trivial_quandle(3)

    def test_swapped_columns_conjugation_violation(self, q94):
        perms = list(translations(q94))
        perms[0], perms[1] = perms[1], perms[0]
        with pytest.raises(ConjugationViolation) as exc:
            from_translations(perms)
        assert len(exc.value.witness) == 2

    def test_shared_non_identity_translation_misses_fixed_point(self):
        # R_i = (1 2) for every i satisfies the conjugation identity
        # trivially but fixes no index
        sigma = Permutation.from_cycles(3, [(1, 2)])
        with pytest.raises(FixedPointMissing) as exc:
            from_translations([sigma, sigma, sigma])
        assert exc.value.witness == (1,)

    def test_conjugation_identity_holds_on_valid_tables(self, q94):
        perms = translations(q94)
        for i in range(1, 10):
            ri = perms[i - 1]
            for j in range(1, 10):
                rj = perms[j - 1]
                assert perms[ri(j) - 1] == ri * rj * ri.inverse()


class TestQdlFormat:
    def test_parse_golden_file(self, q94):
        q = read_qdl(FIXTURES / "q94.qdl")
        assert q == q94

    def test_round_trip_bit_exact(self, q94):
        text = format_qdl(q94)
        assert parse_qdl(text) == q94
        assert format_qdl(parse_qdl(text)) == text

    def test_comments_written_and_skipped(self, q94, tmp_path):
        path = tmp_path / "t.qdl"
        write_qdl(q94, path, comments=("hello", "world"))
        text = path.read_text()
        assert text.startswith("# hello\n# world\n")
        assert read_qdl(path) == q94

    def test_empty_file(self):
        with pytest.raises(ParseError):
            parse_qdl("")

    def test_error_line_numbers(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_qdl("zap\n")
        with pytest.raises(ParseError, match="line 3"):
            parse_qdl("# c\n2\n1 2 3\n2 1\n")
        with pytest.raises(ParseError, match="line 4"):
            parse_qdl("2\n1 1\n2 2\nextra\n")
        with pytest.raises(ParseError):
            parse_qdl("2\n1 1\n")  # missing a row
        with pytest.raises(ParseError):
            parse_qdl("0\n")

    def test_invalid_table_raises_invalid_not_parse(self):
        with pytest.raises(InvalidQuandleError):
            parse_qdl("2\n2 2\n1 1\n")
