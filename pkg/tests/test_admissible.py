"""Admissible cross-term matrices: domain, filters, enumeration routes."""

from fractions import Fraction

import pytest

from gstbc import clifford
from gstbc.admissible import (Candidate, coefficient_domain, coeffs_admissible,
                              encode_candidates, enumerate_candidates,
                              single_thread_profile)
from gstbc.exact import ExactMatrix, GaussianRational, ShapeError, matrix_from_strings

J = GaussianRational(0, 1)


def worked_example() -> ExactMatrix:
    """(1/2)(R1 - R3 + R1 R2 + R2 R3), the admissible blend used as the
    running example; occupies two threads."""
    r = clifford.generators(2)
    return (r[0] - r[2] + r[0] @ r[1] + r[1] @ r[2]).scale(Fraction(1, 2))


class TestCoefficientDomain:
    def test_a2(self):
        assert coefficient_domain(2) == tuple(
            Fraction(v) for v in (1, Fraction(1, 2), 0, Fraction(-1, 2), -1))

    def test_a1(self):
        assert coefficient_domain(1) == (Fraction(1), Fraction(0), Fraction(-1))

    @pytest.mark.parametrize("a", [1, 2, 3])
    def test_denominators_divide_n(self, a):
        n = 2 ** a
        assert all(n % v.denominator == 0 for v in coefficient_domain(a))


class TestCoeffsAdmissible:
    def test_worked_example_passes(self):
        b = clifford.basis(2)
        coeffs = [0] * 16
        for idx, val in [(2, Fraction(1, 2)), (4, Fraction(-1, 2)),
                         (6, Fraction(1, 2)), (9, Fraction(1, 2))]:
            coeffs[idx - 1] = val
        assert coeffs_admissible(b, coeffs)

    def test_flipped_sign_fails(self):
        # flipping the second coefficient makes the commuting-pair products
        # add instead of cancel
        b = clifford.basis(2)
        coeffs = [0] * 16
        for idx, val in [(2, Fraction(1, 2)), (4, Fraction(1, 2)),
                         (6, Fraction(1, 2)), (9, Fraction(1, 2))]:
            coeffs[idx - 1] = val
        assert not coeffs_admissible(b, coeffs)

    def test_singleton_passes(self):
        b = clifford.basis(2)
        coeffs = [0] * 16
        coeffs[1] = 1
        assert coeffs_admissible(b, coeffs)

    def test_norm_violation_fails(self):
        b = clifford.basis(2)
        coeffs = [0] * 16
        coeffs[1] = Fraction(1, 2)
        assert not coeffs_admissible(b, coeffs)

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            coeffs_admissible(clifford.basis(2), [1, 0, 0])


class TestSingleThreadProfile:
    def test_basis_element_six(self):
        prof = single_thread_profile(clifford.basis(2).matrix(6))
        assert prof is not None
        assert prof.thread_index == 2
        assert prof.threads == (2,)

    def test_two_overlapping_threads_rejected(self):
        ts = clifford.thread_permutations(2)
        assert single_thread_profile(ts[0] + ts[1]) is None  # two entries per row

    def test_worked_example_is_single_thread_blend(self):
        prof = single_thread_profile(worked_example())
        assert prof is not None
        assert prof.threads == (1, 2)
        assert prof.thread_index is None  # interleaves two thread permutations

    def test_non_unit_entries_rejected(self):
        assert single_thread_profile(ExactMatrix.identity(4).scale(2)) is None

    def test_non_square_rejected(self):
        assert single_thread_profile(ExactMatrix.zeros(2, 3)) is None


class TestEnumeration:
    def test_a1_is_signed_basis(self):
        cands = enumerate_candidates(1)
        assert len(cands) == 8
        expected = set()
        for el in clifford.basis(1):
            expected.add(el.matrix)
            expected.add(-el.matrix)
        assert {c.matrix for c in cands} == expected

    def test_a2_count_pinned(self):
        assert len(enumerate_candidates(2)) == 160

    def test_routes_agree(self):
        for a in (1, 2):
            via_coeff = enumerate_candidates(a, method="coeff")
            via_structure = enumerate_candidates(a, method="structure")
            assert [(c.perm, c.phase_quarters) for c in via_coeff] == \
                   [(c.perm, c.phase_quarters) for c in via_structure]

    def test_contains_signed_basis_and_worked_example(self):
        cands = enumerate_candidates(2)
        mats = {c.matrix for c in cands}
        for el in clifford.basis(2):
            assert el.matrix in mats
            assert -el.matrix in mats
        assert worked_example() in mats

    def test_closed_under_negation(self):
        cands = enumerate_candidates(2)
        keys = {(c.perm, c.phase_quarters) for c in cands}
        for c in cands:
            neg = c.negated()
            assert (neg.perm, neg.phase_quarters) in keys

    def test_matrix_level_invariants(self):
        for c in enumerate_candidates(2):
            m = c.matrix
            assert m.is_unitary()
            assert m.squares_to_minus_identity()
            assert m.is_anti_hermitian()
            assert single_thread_profile(m) is not None

    def test_coefficient_recovery_by_trace(self):
        # a_k = tr(alpha_k^H M) / n, recomputed independently of the stored values
        b = clifford.basis(2)
        for c in enumerate_candidates(2):
            m = c.matrix
            full = list(c.coeffs)
            for k in range(1, 17):
                t = (b.matrix(k).conj_transpose() @ m).trace()
                assert t.is_real
                assert t.re / 4 == full[k - 1]

    def test_coefficients_satisfy_admissibility(self):
        b = clifford.basis(2)
        for c in enumerate_candidates(2):
            assert coeffs_admissible(b, c.coeffs)
            assert sum(v * v for v in c.coeff_values) == 1
            dom = coefficient_domain(2)
            assert all(v in dom for v in c.coeff_values)

    def test_canonical_order_and_positive_reps(self):
        cands = enumerate_candidates(2)
        keys = [c.sort_key() for c in cands]
        assert keys == sorted(keys)
        perm, quarters, neg, pos = encode_candidates(cands)
        assert len(pos) == 80
        for i in pos:
            # the representative's leading coefficient is positive
            assert cands[i].coeff_values[0] > 0
            assert neg[i] > i
            assert neg[neg[i]] == i

    def test_support_sizes_a2(self):
        sizes = {len(c.support) for c in enumerate_candidates(2)}
        assert sizes == {1, 4}

    def test_a3_requires_opt_in(self):
        with pytest.raises(ValueError, match="allow_large"):
            enumerate_candidates(3)
        with pytest.raises(ValueError):
            enumerate_candidates(4, allow_large=True)
        with pytest.raises(ValueError):
            enumerate_candidates(3, method="coeff", allow_large=True)

    def test_thread_metadata(self):
        cands = enumerate_candidates(2)
        for c in cands:
            assert c.row_threads == tuple((r ^ p) + 1 for r, p in enumerate(c.perm))
            if c.thread_index is not None:
                assert c.threads == (c.thread_index,)
