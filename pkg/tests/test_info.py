import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compnet.info import (
    DynamicsParams,
    ProbabilityDistribution,
    SymbolStream,
    classify_dynamics,
    complexity,
    empirical_distribution,
    entropy,
    mutual_information,
    normalized_entropy,
    novelty_score,
    sliding_entropy,
)

from oracles import H_QUARTER, JSD_0011_0111, joint_histogram_mi


def S(text, alphabet="01"):
    return SymbolStream.from_symbols(text, alphabet)


class TestEntropy:
    def test_degenerate_is_zero(self):
        assert entropy({0: 0.0, 1: 1.0}) == 0.0

    def test_fair_coin_is_one_bit(self):
        assert entropy({0: 0.5, 1: 0.5}) == 1.0

    def test_uniform_four(self):
        assert entropy(ProbabilityDistribution.uniform("abcd")) == pytest.approx(2.0, abs=1e-12)

    def test_quarter(self):
        assert entropy({0: 0.25, 1: 0.75}) == pytest.approx(H_QUARTER, abs=1e-12)

    @pytest.mark.parametrize("bad", [{0: 0.5, 1: 0.6}, {0: -0.1, 1: 1.1}, {0: float("nan"), 1: 1.0}, {}])
    def test_rejects_malformed(self, bad):
        with pytest.raises(ValueError):
            entropy(bad)

    def test_normalization_tolerance(self):
        entropy({0: 0.3, 1: 0.7 + 5e-10})
        with pytest.raises(ValueError):
            entropy({0: 0.3, 1: 0.7 + 1e-8})

    def test_sequence_input(self):
        assert entropy([0.25, 0.25, 0.25, 0.25]) == pytest.approx(2.0)

    def test_symmetry_grid(self):
        for i in range(101):
            p = i / 100
            assert entropy({0: p, 1: 1 - p}) == entropy({0: 1 - p, 1: p})


class TestEmpirical:
    def test_balanced(self):
        d = empirical_distribution(S("0101"))
        assert d.entries == {"0": 0.5, "1": 0.5}

    def test_degenerate(self):
        assert empirical_distribution(S("1111")).entries == {"0": 0.0, "1": 1.0}

    def test_declared_zero_mass(self):
        d = empirical_distribution(S("aab", "abc"))
        assert d.entries == pytest.approx({"a": 2 / 3, "b": 1 / 3, "c": 0.0})
        assert d.alphabet_size == 3

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            empirical_distribution(S(""))


class TestStream:
    def test_duplicate_alphabet_rejected(self):
        with pytest.raises(ValueError):
            SymbolStream("aa", [0])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            SymbolStream("ab", [0, 2])

    def test_unknown_symbol_rejected(self):
        with pytest.raises(ValueError):
            SymbolStream.from_symbols("abz", "ab")

    def test_slicing_keeps_alphabet(self):
        s = S("0110")
        assert s[1:3].symbols == ["1", "1"]
        assert s[1:3].alphabet == ("0", "1")


class TestSlidingEntropy:
    @pytest.mark.parametrize("text,expected", [("0000", [0, 0, 0]), ("0101", [1, 1, 1]), ("0011", [0, 1, 0])])
    def test_examples(self, text, expected):
        assert sliding_entropy(S(text), 2).tolist() == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("window", [0, 5])
    def test_bad_window(self, window):
        with pytest.raises(ValueError):
            sliding_entropy(S("0101"), window)

    @given(st.text("abc", min_size=1, max_size=60), st.integers(1, 60))
    def test_matches_windowed_empirical(self, text, window):
        window = min(window, len(text))
        s = SymbolStream.from_symbols(text, "abc")
        out = sliding_entropy(s, window)
        assert len(out) == len(text) - window + 1
        for i in range(0, len(out), 7):
            assert out[i] == pytest.approx(entropy(empirical_distribution(s[i:i + window])), abs=1e-9)


class TestMutualInformation:
    def test_self(self):
        assert mutual_information(S("0101"), S("0101")) == pytest.approx(1.0, abs=1e-12)

    def test_constant_partner(self):
        assert mutual_information(S("0101"), S("1111")) == 0.0

    def test_joint_histogram_oracle(self):
        oracle = joint_histogram_mi("0011", "0101")
        assert oracle == 0.0
        assert mutual_information(S("0011"), S("0101")) == pytest.approx(oracle, abs=1e-12)

    def test_errors(self):
        with pytest.raises(ValueError):
            mutual_information(S("01"), S("011"))
        with pytest.raises(ValueError):
            mutual_information(S(""), S(""))

    @settings(max_examples=100)
    @given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 2)), min_size=1, max_size=80))
    def test_properties(self, pairs):
        xs, ys = [p[0] for p in pairs], [p[1] for p in pairs]
        x, y = SymbolStream.from_symbols(xs), SymbolStream.from_symbols(ys)
        mi = mutual_information(x, y)
        hx = entropy(empirical_distribution(x))
        hy = entropy(empirical_distribution(y))
        assert mi >= 0.0
        assert mi == pytest.approx(joint_histogram_mi(xs, ys), abs=1e-9)
        assert mutual_information(y, x) == pytest.approx(mi, abs=1e-12)
        assert mi <= min(hx, hy) + 1e-9
        assert mutual_information(x, x) == pytest.approx(hx, abs=1e-9)


class TestNormalizedAndComplexity:
    def test_uniform(self):
        assert normalized_entropy(ProbabilityDistribution.uniform("abcd")) == pytest.approx(1.0)

    def test_degenerate(self):
        assert normalized_entropy({"a": 1.0, "b": 0.0, "c": 0.0, "d": 0.0}) == 0.0

    def test_binary_equals_entropy(self):
        assert normalized_entropy({0: 0.25, 1: 0.75}) == pytest.approx(H_QUARTER, abs=1e-12)

    def test_single_symbol_rejected(self):
        with pytest.raises(ValueError):
            normalized_entropy({"a": 1.0})

    @pytest.mark.parametrize("h,c", [(0.0, 0.0), (1.0, 0.0), (0.5, 1.0)])
    def test_complexity_examples(self, h, c):
        assert complexity(h) == c

    @pytest.mark.parametrize("h", [-0.01, 1.01, float("nan")])
    def test_complexity_range(self, h):
        with pytest.raises(ValueError):
            complexity(h)

    @given(st.floats(0.0, 1.0))
    def test_complexity_symmetric(self, h):
        assert complexity(h) == pytest.approx(complexity(1.0 - h), abs=1e-15)
        if 0.0 < h < 1.0:
            assert complexity(h) > 0.0

    def test_complexity_symmetry_on_grid(self):
        # 1 - (1 - h) != h in binary floating point, so equality holds to a few ulps
        for i in range(101):
            assert abs(complexity(i / 100) - complexity((100 - i) / 100)) <= 1e-15


class TestNovelty:
    def test_identical_distributions(self):
        assert novelty_score(S("0101"), S("1010")) == 0.0

    def test_disjoint_supports(self):
        assert novelty_score(S("0000"), S("1111")) == pytest.approx(1.0, abs=1e-12)

    def test_jsd_oracle(self):
        assert novelty_score(S("0011"), S("0111")) == pytest.approx(JSD_0011_0111, abs=1e-12)

    def test_errors(self):
        with pytest.raises(ValueError):
            novelty_score(S(""), S("01"))
        with pytest.raises(ValueError):
            novelty_score(S("01"), S("ab", "ab"))

    @given(st.text("abc", min_size=1, max_size=40), st.text("abc", min_size=1, max_size=40))
    def test_symmetric_bounded_and_self_zero(self, a, b):
        x, y = SymbolStream.from_symbols(a, "abc"), SymbolStream.from_symbols(b, "abc")
        v = novelty_score(x, y)
        assert 0.0 <= v <= 1.0
        assert novelty_score(y, x) == pytest.approx(v, abs=1e-12)
        assert novelty_score(x, x) == 0.0


class TestClassifyDynamics:
    P = DynamicsParams(transient=5, window=16)

    def test_static(self):
        assert classify_dynamics(["x"] * 40, self.P).kind == "Static"

    def test_period_two(self):
        d = classify_dynamics(["a", "b"] * 20, self.P)
        assert (d.kind, d.period) == ("Periodic", 2)

    def test_period_five_after_transient(self):
        traj = list("zzzzz") + list("abcde") * 8
        d = classify_dynamics(traj, self.P)
        assert (d.kind, d.period) == ("Periodic", 5)

    def test_random_is_chaotic(self):
        rng = np.random.default_rng(1)
        traj = [format(int(v), "016x") for v in rng.integers(0, 2**63, size=200)]
        d = classify_dynamics(traj)
        assert d.kind == "Chaotic"
        assert abs(d.entropy - 1.0) <= 0.02

    def test_low_entropy_aperiodic_is_complex(self):
        # long runs of one symbol with rare, irregular excursions
        rng = np.random.default_rng(3)
        traj = ["a" if rng.random() < 0.9 else "b" for _ in range(300)]
        assert classify_dynamics(traj, DynamicsParams(10, 32, 0.75)).kind == "Complex"

    def test_too_short(self):
        with pytest.raises(ValueError):
            classify_dynamics(["a"] * 10, self.P)

    def test_default_thresholds(self):
        p = DynamicsParams()
        assert (p.transient, p.window, p.chaos_threshold) == (100, 64, 0.75)

    @settings(max_examples=50)
    @given(st.lists(st.sampled_from("abcd"), min_size=21, max_size=80))
    def test_total_and_deterministic(self, traj):
        a = classify_dynamics(traj, self.P)
        assert a == classify_dynamics(list(traj), self.P)
        assert a.kind in ("Static", "Periodic", "Chaotic", "Complex")


class TestBounds:
    @settings(max_examples=200)
    @given(st.lists(st.floats(0.0, 1.0), min_size=2, max_size=8).filter(lambda v: sum(v) > 0))
    def test_entropy_bounds(self, weights):
        total = math.fsum(weights)
        probs = [w / total for w in weights]
        d = ProbabilityDistribution.from_probs(probs)
        h = entropy(d)
        assert 0.0 <= h <= math.log2(len(probs))
