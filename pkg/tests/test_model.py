import json
import random
from fractions import Fraction

import pytest

from switchreach import (
    Matrix,
    Mode,
    RegularizationError,
    SwitchedSystem,
    SystemFormatError,
    feedback_regularize,
    format_sequence,
    load_system,
    make_system,
    parse_sequence,
    reachable_space_of_sequence,
    save_system,
    validate,
)

from conftest import all_sequences, random_singular_regular_system

PERM3_JSON = """
{ "n": 3,
  "modes": [
    { "A": [["1","0","0"],["0","0","1"],["0","1","0"]], "B": [["1"],["0"],["0"]] },
    { "A": [["0","0","1"],["1","0","0"],["0","1","0"]], "B": [["0"],["0"],["0"]] }
  ] }
"""


class TestLoadSave:
    def test_load_two_mode_system(self):
        sys_ = load_system(PERM3_JSON)
        assert sys_.n == 3 and sys_.m == 2
        assert sys_.mode(1).B == Matrix([[1], [0], [0]])
        assert sys_.mode(2).B == Matrix([[0], [0], [0]])

    def test_round_trip_identity(self, perm3_system):
        assert load_system(save_system(perm3_system)) == perm3_system
        assert load_system(save_system(perm3_system, indent=2)) == perm3_system

    def test_round_trip_fractions_bit_exact(self):
        sys_ = make_system([([["1/2", "2/4"], ["-3", "0"]], [["7/3"], ["0"]])])
        again = load_system(save_system(sys_))
        assert again == sys_
        assert again.mode(1).A[0, 1] == Fraction(1, 2)

    def test_writer_emits_lowest_terms(self):
        sys_ = make_system([([["2/4"]], [["4/2"]])])
        doc = json.loads(save_system(sys_))
        assert doc["modes"][0]["A"] == [["1/2"]]
        assert doc["modes"][0]["B"] == [["2"]]

    def test_zero_width_b(self):
        sys_ = make_system([([[1, 0], [0, 1]], None)])
        doc = json.loads(save_system(sys_))
        assert doc["modes"][0]["B"] == []
        again = load_system(save_system(sys_))
        assert again == sys_
        assert again.mode(1).B.ncols == 0

    def test_single_mode_identity(self):
        text = '{"n": 2, "modes": [{"A": [["1","0"],["0","1"]], "B": [["1","0"],["0","1"]]}]}'
        sys_ = load_system(text)
        assert sys_.n == 2 and sys_.m == 1

    def test_bare_integers_accepted(self):
        text = '{"n": 2, "modes": [{"A": [[1, 0], [0, 1]], "B": []}]}'
        assert load_system(text).n == 2

    @pytest.mark.parametrize(
        "text",
        [
            "not json at all",
            '{"n": 2, "modes": []}',
            '{"modes": [{"A": [["1"]], "B": []}]}',
            '{"n": 2, "modes": [{"A": [["1","0"]], "B": []}]}',
            '{"n": 2, "modes": [{"A": [["1","0"],["0","1"]], "B": [["1"]]}]}',
            '{"n": 2, "modes": [{"A": [[0.5, 0], [0, 1]], "B": []}]}',
            '{"n": 2, "modes": [{"A": [["1","x"],["0","1"]], "B": []}]}',
            '{"n": 3, "modes": [{"A": [["1","0"],["0","1"]], "B": []}]}',
        ],
    )
    def test_malformed_inputs_rejected(self, text):
        with pytest.raises(SystemFormatError):
            load_system(text)

    def test_mismatched_mode_dimensions_rejected(self):
        with pytest.raises(SystemFormatError):
            make_system([([[1]], None), ([[1, 0], [0, 1]], None)])


class TestValidate:
    def test_permutation_system_flags(self, perm3_system):
        report = validate(perm3_system)
        assert report.all_a_invertible
        assert [v.b_rank for v in report.per_mode] == [1, 0]
        assert report.all_modes_regular
        assert report.some_b_nonzero

    def test_singular_but_regular(self):
        sys_ = make_system([([[0, 0], [0, 0]], [[1, 0], [0, 1]])])
        report = validate(sys_)
        assert not report.per_mode[0].a_invertible
        assert report.per_mode[0].regular

    def test_degenerate_mode(self):
        sys_ = make_system([([[0, 0], [0, 0]], [[0], [0]])])
        report = validate(sys_)
        assert not report.per_mode[0].regular
        assert not report.some_mode_regular

    def test_pure_and_deterministic(self, perm3_system):
        assert validate(perm3_system) == validate(perm3_system)


class TestSequences:
    def test_parse_digits(self):
        assert parse_sequence("122121", 2) == (1, 2, 2, 1, 2, 1)

    def test_parse_commas(self):
        assert parse_sequence("10,2,10", 12) == (10, 2, 10)

    def test_parse_empty(self):
        assert parse_sequence("", 3) == ()

    def test_range_check(self):
        with pytest.raises(SystemFormatError):
            parse_sequence("13", 2)

    def test_format_roundtrip(self):
        assert format_sequence((1, 2, 2, 1, 2, 1), 2) == "122121"
        assert format_sequence((10, 2), 12) == "10,2"


class TestFeedbackRegularize:
    def test_invertible_system_unchanged(self, perm3_system):
        assert feedback_regularize(perm3_system) == perm3_system

    def test_zero_a_identity_b(self):
        sys_ = make_system([([[0, 0], [0, 0]], [[1, 0], [0, 1]])])
        reg = feedback_regularize(sys_)
        assert validate(reg).all_a_invertible
        assert reg.modes[0].B == sys_.modes[0].B

    def test_structured_gain_found(self):
        # A = diag(1, 0), B = e2: placing a unit in the second column of K
        # is the first sweep candidate that works and gives the identity
        sys_ = make_system([([[1, 0], [0, 0]], [[0], [1]])])
        reg = feedback_regularize(sys_)
        assert reg.modes[0].A == Matrix.identity(2)

    def test_error_names_offending_mode(self):
        sys_ = make_system(
            [([[1, 0], [0, 1]], [[1], [0]]), ([[0, 0], [0, 0]], [[0], [0]])]
        )
        with pytest.raises(RegularizationError, match="mode 2"):
            feedback_regularize(sys_)

    def test_reachable_spaces_preserved(self):
        rng = random.Random(11)
        for trial in range(6):
            n = rng.randint(2, 4)
            m = rng.randint(1, 3)
            sys_ = random_singular_regular_system(rng, n, m)
            reg = feedback_regularize(sys_, seed=trial)
            assert validate(reg).all_a_invertible
            for seq in all_sequences(m, 4):
                assert reachable_space_of_sequence(
                    sys_, seq
                ) == reachable_space_of_sequence(reg, seq)

    def test_deterministic_given_seed(self):
        rng = random.Random(12)
        sys_ = random_singular_regular_system(rng, 3, 2)
        assert feedback_regularize(sys_, seed=5) == feedback_regularize(sys_, seed=5)
