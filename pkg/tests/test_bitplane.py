import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swsim.bitplane import (Interleaver, assign_crossovers, make_interleaver,
                            merge_bitplanes, split_bitplanes)
from swsim.corr_channel import BitplaneProfile


class TestSplitMerge:
    def test_known_split(self):
        bits = np.array([1, 0, 1, 0, 1, 1], dtype=np.uint8)
        planes = split_bitplanes(bits, 3)
        assert [p.tolist() for p in planes] == [[1, 0], [0, 1], [1, 1]]

    def test_merge_inverts_split(self):
        bits = np.arange(24) % 2
        assert np.array_equal(merge_bitplanes(split_bitplanes(bits, 4)), bits)

    def test_length_validation(self):
        with pytest.raises(ValueError):
            split_bitplanes(np.zeros(7, dtype=np.uint8), 3)
        with pytest.raises(ValueError):
            merge_bitplanes([np.zeros(2), np.zeros(3)])

    @given(st.integers(min_value=1, max_value=8), st.integers(min_value=1, max_value=30))
    def test_round_trip(self, b, samples):
        rng = np.random.default_rng(b * 100 + samples)
        bits = rng.integers(0, 2, b * samples)
        assert np.array_equal(merge_bitplanes(split_bitplanes(bits, b)), bits)


class TestAssignCrossovers:
    def profile(self):
        return BitplaneProfile(per_plane=[0.4, 0.3, 0.2], aggregate=0.3,
                               sample_count=1000)

    def test_cyclic_lsb_first(self):
        p = assign_crossovers(7, self.profile())
        assert p.tolist() == [0.4, 0.3, 0.2, 0.4, 0.3, 0.2, 0.4]

    def test_phase_continues_previous_block(self):
        # a second block starting two bits into a sample picks up the
        # pattern where the first block left off
        p = assign_crossovers(4, self.profile(), phase=2)
        assert p.tolist() == [0.2, 0.4, 0.3, 0.2]

    def test_concatenated_blocks_cover_the_stream_seamlessly(self):
        prof = self.profile()
        whole = assign_crossovers(10, prof)
        first = assign_crossovers(6, prof)
        second = assign_crossovers(4, prof, phase=6 % prof.bits)
        assert np.array_equal(np.concatenate([first, second]), whole)

    def test_flat_profile_is_constant(self):
        p = assign_crossovers(9, BitplaneProfile.flat(0.1, 4))
        assert np.all(p == 0.1)


class TestInterleaver:
    def test_round_trip(self):
        il = make_interleaver(50, seed=3)
        v = np.arange(50)
        assert np.array_equal(il.deinterleave(il.interleave(v)), v)
        assert np.array_equal(il.interleave(il.deinterleave(v)), v)

    def test_identity_mode(self):
        il = make_interleaver(20, seed=9, identity=True)
        v = np.arange(20) * 3
        assert np.array_equal(il.interleave(v), v)

    def test_determinism_and_seed_dependence(self):
        a = make_interleaver(100, seed=5)
        b = make_interleaver(100, seed=5)
        c = make_interleaver(100, seed=6)
        assert np.array_equal(a.permutation, b.permutation)
        assert not np.array_equal(a.permutation, c.permutation)

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Interleaver(permutation=np.array([0, 0, 2]), seed=0)
        with pytest.raises(ValueError):
            make_interleaver(0, seed=1)

    def test_length_checks(self):
        il = make_interleaver(10, seed=1)
        with pytest.raises(ValueError):
            il.interleave(np.arange(9))
        with pytest.raises(ValueError):
            il.deinterleave(np.arange(11))

    @settings(deadline=None)
    @given(st.integers(min_value=1, max_value=200), st.integers(min_value=0, max_value=50))
    def test_permutation_property(self, n, seed):
        il = make_interleaver(n, seed)
        assert sorted(il.permutation.tolist()) == list(range(n))

    def test_interleaving_commutes_with_p_assignment(self):
        # permuting the assignment vector is the same as assigning then
        # permuting, which is what keeps LLRs attached to the right bits
        prof = BitplaneProfile(per_plane=[0.4, 0.1], aggregate=0.25,
                               sample_count=100)
        il = make_interleaver(12, seed=2)
        p = assign_crossovers(12, prof)
        bits = np.arange(12) % 2
        pi_p = il.interleave(p)
        pi_bits = il.interleave(bits)
        # bit j of the permuted stream came from position perm[j], and so
        # did its probability
        assert np.array_equal(pi_p, p[il.permutation])
        assert np.array_equal(pi_bits, bits[il.permutation])

    def test_breaks_plane_periodicity(self):
        prof = BitplaneProfile(per_plane=[0.4, 0.3, 0.2, 0.15, 0.1, 0.05],
                               aggregate=0.2, sample_count=1000)
        n = 6000
        p = assign_crossovers(n, prof)
        shuffled = make_interleaver(n, seed=4).interleave(p)
        # lag-6 autocorrelation of the periodic assignment is perfect;
        # after interleaving it collapses
        def lag6_corr(v):
            a, b = v[:-6], v[6:]
            return np.corrcoef(a, b)[0, 1]
        assert lag6_corr(p) == pytest.approx(1.0)
        assert abs(lag6_corr(shuffled)) < 0.1
