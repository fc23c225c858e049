import random

import pytest

from switchreach import (
    Matrix,
    SingularModeError,
    Subspace,
    TermBudgetError,
    column_space,
    concat_identity_check,
    evolution_matrix,
    family_a,
    family_rank,
    ge_characterization,
    is_controllable,
    make_system,
    reachable_set,
    reachable_space_of_sequence,
    v_chain,
)

from conftest import (
    all_sequences,
    random_invertible,
    random_invertible_system,
    random_matrix,
)


class TestReachableSpaceOfSequence:
    def test_empty_sequence_is_zero(self, perm3_system):
        assert reachable_space_of_sequence(perm3_system, ()).is_zero

    def test_single_step_is_input_image(self, perm3_system):
        assert reachable_space_of_sequence(perm3_system, (1,)) == Subspace.coordinate(
            3, [0]
        )

    def test_known_controllable_word(self, perm3_system):
        assert reachable_space_of_sequence(perm3_system, (1, 2, 2, 1, 2, 1)).is_full

    def test_invalid_mode_index(self, perm3_system):
        with pytest.raises(IndexError):
            reachable_space_of_sequence(perm3_system, (3,))

    def test_matches_block_matrix_definition(self):
        # R(i_1..i_k) is also the column space of
        # (A_{i_k}..A_{i_2} B_{i_1} | ... | A_{i_k} B_{i_{k-1}} | B_{i_k})
        rng = random.Random(20)
        for _ in range(15):
            n = rng.randint(2, 4)
            sys_ = random_invertible_system(rng, n, rng.randint(1, 3))
            k = rng.randint(1, 4)
            seq = tuple(rng.randint(1, sys_.m) for _ in range(k))
            blocks = []
            for t in range(k):
                prod = evolution_matrix(sys_, seq[t + 1 :])
                blocks.append(prod @ sys_.mode(seq[t]).B)
            expected = column_space(Matrix.hstack(*blocks))
            assert reachable_space_of_sequence(sys_, seq) == expected


class TestConcatIdentity:
    def test_empty_prefix(self, perm3_system):
        assert concat_identity_check(perm3_system, (), (1, 2))

    def test_empty_suffix(self, perm3_system):
        assert concat_identity_check(perm3_system, (1, 2), ())

    def test_worked_example(self, perm3_system):
        assert concat_identity_check(perm3_system, (1, 2), (2, 1, 2, 1))

    def test_random_suite(self):
        rng = random.Random(21)
        for _ in range(40):
            n = rng.randint(2, 4)
            sys_ = random_invertible_system(rng, n, rng.randint(1, 3))
            s1 = tuple(rng.randint(1, sys_.m) for _ in range(rng.randint(0, 4)))
            s2 = tuple(rng.randint(1, sys_.m) for _ in range(rng.randint(0, 4)))
            assert concat_identity_check(sys_, s1, s2)


class TestVChain:
    def test_permutation_system_chain(self, perm3_system):
        chain = v_chain(perm3_system)
        assert chain.dims == (1, 2, 3)
        assert chain.ell == 3
        assert not chain.all_b_zero

    def test_identity_mode_fixes_input_line(self):
        sys_ = make_system([([[1, 0], [0, 1]], [[1], [0]])])
        chain = v_chain(sys_)
        assert chain.ell == 1
        assert chain.fixed_point == Subspace.coordinate(2, [0])

    def test_family_a_grows_one_dim_per_step(self):
        chain = v_chain(family_a(3, 2))
        assert chain.dims == (1, 2, 3)
        assert chain.ell == 3

    def test_all_b_zero_flagged(self):
        sys_ = make_system([([[0, 1], [1, 0]], None)])
        chain = v_chain(sys_)
        assert chain.all_b_zero
        assert chain.ell == 1
        assert chain.fixed_point.is_zero

    def test_growth_and_fixed_point_properties(self):
        rng = random.Random(22)
        for _ in range(25):
            n = rng.randint(2, 5)
            sys_ = random_invertible_system(rng, n, rng.randint(1, 3))
            chain = v_chain(sys_)
            dims = chain.dims
            assert all(a < b for a, b in zip(dims, dims[1:]))
            assert dims[0] >= 1
            assert chain.ell <= n
            # dim V_k >= k below the fixed point
            assert all(d >= k + 1 for k, d in enumerate(dims))
            # one more application stays put
            v = chain.fixed_point
            nxt = v
            for mode in sys_.modes:
                nxt = nxt + v.apply(mode.A)
            assert nxt == v

    def test_union_identity_exhaustive(self, perm3_system):
        # V_p equals the sum of R(pi) over all sequences of length <= p
        systems = [perm3_system]
        rng = random.Random(23)
        systems += [random_invertible_system(rng, 3, 2) for _ in range(4)]
        for sys_ in systems:
            chain = v_chain(sys_)
            for p in range(1, min(3, chain.ell) + 1):
                total = Subspace.zero(sys_.n)
                for seq in all_sequences(sys_.m, p, min_len=1):
                    total = total + reachable_space_of_sequence(sys_, seq)
                assert total == chain.spaces[p - 1]


class TestReachableSet:
    def test_permutation_system_controllable(self, perm3_system):
        assert reachable_set(perm3_system).is_full
        assert is_controllable(perm3_system)

    def test_single_mode_matches_kalman_space(self):
        rng = random.Random(24)
        for _ in range(15):
            n = rng.randint(2, 4)
            a = random_invertible(rng, n)
            b = random_matrix(rng, n, rng.randint(1, 2))
            sys_ = make_system([(a, b)])
            blocks = [b]
            for _ in range(n - 1):
                blocks.append(a @ blocks[-1])
            assert reachable_set(sys_) == column_space(Matrix.hstack(*blocks))

    def test_shared_axis_stays_put(self):
        sys_ = make_system(
            [
                ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[1], [0], [0]]),
                ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[1], [0], [0]]),
            ]
        )
        assert reachable_set(sys_) == Subspace.coordinate(3, [0])
        assert not is_controllable(sys_)

    def test_all_b_zero_not_controllable(self):
        sys_ = make_system([([[0, 1], [1, 0]], None)])
        assert not is_controllable(sys_)

    def test_family_rank_controllable(self):
        assert is_controllable(family_rank(4, 2, 2))

    def test_singular_mode_refused_with_hint(self):
        regular = make_system([([[0, 0], [0, 0]], [[1, 0], [0, 1]])])
        with pytest.raises(SingularModeError, match="feedback_regularize"):
            reachable_set(regular)
        degenerate = make_system([([[0, 0], [0, 0]], [[1], [0]])])
        with pytest.raises(SingularModeError, match="degenerate"):
            reachable_set(degenerate)

    def test_every_sequence_stays_inside(self):
        rng = random.Random(25)
        for _ in range(10):
            sys_ = random_invertible_system(rng, 3, 2)
            total = reachable_set(sys_)
            for seq in all_sequences(sys_.m, 4):
                assert total.contains(reachable_space_of_sequence(sys_, seq))


class TestGeCharacterization:
    def test_agrees_on_permutation_system(self, perm3_system):
        assert ge_characterization(perm3_system) == reachable_set(perm3_system)

    def test_single_mode_kalman(self):
        rng = random.Random(26)
        a = random_invertible(rng, 3)
        b = random_matrix(rng, 3, 1)
        sys_ = make_system([(a, b)])
        assert ge_characterization(sys_) == reachable_set(sys_)

    def test_random_two_mode_planar(self):
        rng = random.Random(27)
        for _ in range(25):
            sys_ = random_invertible_system(rng, 2, 2)
            assert ge_characterization(sys_) == reachable_set(sys_)

    def test_budget_guard(self):
        sys_ = family_a(6, 4)
        with pytest.raises(TermBudgetError, match="reachable_set"):
            ge_characterization(sys_, budget=10**5)

    def test_singular_mode_rejected(self):
        sys_ = make_system([([[0, 0], [0, 0]], [[1, 0], [0, 1]])])
        with pytest.raises(SingularModeError):
            ge_characterization(sys_)
