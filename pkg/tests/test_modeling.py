import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridwar.modeling import (
    ExtendedAnswerMatrix,
    extract_policy,
    merge,
    probabilities,
    record,
)
from gridwar.strategy import (
    STATE_COUNT,
    Action,
    AnswerMatrix,
    decode_state,
    random_matrix,
    rbp_default,
    state_index,
)


class TestRecord:
    def test_single_observation(self):
        m = ExtendedAnswerMatrix()
        record(m, decode_state(13), Action.MOVE_FORWARD_OBJECTIVE)
        assert m.counts[13][2] == 1
        assert m.total_observations == 1
        assert sum(sum(r) for r in m.counts) == 1

    def test_group_order_is_additive(self):
        m = ExtendedAnswerMatrix()
        for _ in range(5):
            record(m, decode_state(7), Action.GROUP_RUN_AWAY)
        assert m.counts[7][1] == 5

    def test_replay_of_order_log_reproduces_model(self):
        # oracle: an independent tally over the same (state, action) log
        rng = random.Random(3)
        log = [(rng.randrange(STATE_COUNT), Action(rng.randint(1, 6)))
               for _ in range(500)]
        m = ExtendedAnswerMatrix()
        tally = [[0] * 6 for _ in range(STATE_COUNT)]
        for idx, action in log:
            record(m, decode_state(idx), action)
            tally[idx][int(action) - 1] += 1
        assert m.counts == tally


class TestProbabilities:
    def test_normalization(self):
        m = ExtendedAnswerMatrix()
        m.counts[4] = [2, 3, 5, 0, 0, 0]
        assert probabilities(m, 4) == [0.2, 0.3, 0.5, 0, 0, 0]

    def test_unobserved_row(self):
        assert probabilities(ExtendedAnswerMatrix(), 0) is None

    def test_degenerate_row(self):
        m = ExtendedAnswerMatrix()
        m.counts[9] = [0, 0, 0, 7, 0, 0]
        assert probabilities(m, 9) == [0, 0, 0, 1, 0, 0]

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            probabilities(ExtendedAnswerMatrix(), 24)

    @given(st.lists(st.lists(st.integers(0, 50), min_size=6, max_size=6),
                    min_size=24, max_size=24))
    @settings(max_examples=30)
    def test_probability_vector_when_defined(self, counts):
        m = ExtendedAnswerMatrix(counts)
        for i in range(STATE_COUNT):
            p = probabilities(m, i)
            if p is not None:
                assert all(v >= 0 for v in p)
                assert abs(sum(p) - 1.0) < 1e-9


class TestExtractPolicy:
    def test_unique_argmax(self):
        m = ExtendedAnswerMatrix()
        m.counts[0] = [1, 5, 2, 1, 1, 0]
        policy = extract_policy(m, rbp_default())
        assert policy.cells[0] == Action.GROUP_RUN_AWAY

    def test_fallback_on_unobserved(self):
        fallback = rbp_default()
        policy = extract_policy(ExtendedAnswerMatrix(), fallback)
        assert policy.cells == fallback.cells

    def test_ties_take_lowest_action(self):
        m = ExtendedAnswerMatrix()
        m.counts[3] = [4, 4, 0, 0, 0, 0]
        assert extract_policy(m, rbp_default()).cells[3] == Action.MOVE_FORWARD_ENEMY

    @given(st.integers(0, 2 ** 32), st.integers(1, 20))
    @settings(max_examples=30)
    def test_argmax_invariant_under_scaling(self, seed, k):
        rng = random.Random(seed)
        m = ExtendedAnswerMatrix()
        for i in range(STATE_COUNT):
            m.counts[i] = [rng.randrange(10) for _ in range(6)]
        scaled = ExtendedAnswerMatrix([[c * k for c in row] for row in m.counts])
        fb = rbp_default()
        assert extract_policy(m, fb).cells == extract_policy(scaled, fb).cells

    def test_recovers_deterministic_policy(self):
        # feeding (state, P(state)) pairs recovers P exactly on fed states
        P = random_matrix(random.Random(11))
        m = ExtendedAnswerMatrix()
        visited = [0, 3, 7, 13, 21, 23]
        for idx in visited:
            for _ in range(random.Random(idx).randint(1, 4)):
                record(m, decode_state(idx), P.cells[idx])
        out = extract_policy(m, rbp_default())
        for idx in visited:
            assert out.cells[idx] == P.cells[idx]


class TestMerge:
    def _random_model(self, seed):
        rng = random.Random(seed)
        m = ExtendedAnswerMatrix()
        for i in range(STATE_COUNT):
            m.counts[i] = [rng.randrange(5) for _ in range(6)]
        return m

    def test_identity(self):
        m = self._random_model(1)
        assert merge(m, ExtendedAnswerMatrix()) == m

    def test_commutative(self):
        a, b = self._random_model(1), self._random_model(2)
        assert merge(a, b) == merge(b, a)

    def test_associative(self):
        a, b, c = (self._random_model(i) for i in range(3))
        assert merge(merge(a, b), c) == merge(a, merge(b, c))

    def test_totals_add(self):
        a = ExtendedAnswerMatrix()
        b = ExtendedAnswerMatrix()
        record(a, decode_state(0), Action.EXPLORE)
        record(b, decode_state(1), Action.EXPLORE)
        assert merge(a, b).total_observations == 2

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            ExtendedAnswerMatrix([[0] * 6] * 23)
        with pytest.raises(ValueError):
            ExtendedAnswerMatrix([[-1] * 6] + [[0] * 6] * 23)
