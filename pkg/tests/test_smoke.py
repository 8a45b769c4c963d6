from __future__ import annotations

import contextlib
import io
import json
import math
import os
import random
import time
import unittest
from fractions import Fraction
from pathlib import Path
from unittest.mock import patch

import mpmath
import sympy

from dqs import cli, config
from dqs.errors import DomainError, IndexSetError, PoleError, TruncationError
from dqs.exact_kernel import ONE, W, CoeffW, binomial, coeffw_eval, power_sum
from dqs.f_family import (
    build_f1,
    build_f2,
    build_f3,
    build_f4,
    build_f5,
    build_f5_vee,
    build_f6,
    build_f7,
    build_f8,
    build_vee,
    build_Y,
    forms_check,
    start_at_one_check,
)
from dqs.log_series import (
    LogSeries,
    branch_identity_check,
    log_paper,
    ls_add,
    ls_delta,
    ls_eval,
    ls_eval_exact,
    ls_mul_log,
    ls_mul_z,
    ls_scale,
)
from dqs.matrix_system import (
    DEFAULT_MATRICES,
    U,
    Z,
    DiagSpec,
    PolyMatrix,
    a_matrix,
    chain_check,
    check_identities,
    s_matrix,
    t_matrix,
    v_matrix,
)
from dqs.r_derivatives import d_r_pow, log_deriv, quotient_derivative, r_eval, tail_bound, zero_order_check
from dqs.services.series_cache import SeriesCache
from dqs.services.sweep_runner import SweepRunner
from dqs.settings_persistence import effective_config, validate_settings_value
from dqs.types import (
    K_SETS,
    CheckReport,
    DerivOrder,
    EvalPoint,
    ExactCheckSpec,
    ExactComplex,
    FamilyIndex,
    NumericCheckSpec,
    Precision,
    RPoint,
)
from dqs.verifier import SweepConfig, SweepPoint, sweep, verify_eq16_exact, verify_eq17_exact, verify_numeric
from dqs.verifier.reports import dump_json, format_csv, format_table, report_document

EXPECTED_CHECKSUM = "c22ce8c11c9b0fe514a1fedf822db05e4869448fbd85a709c301d3dcd0301f1e"


def scratch_root() -> Path:
    root = Path(__file__).resolve().parents[1] / ".test_tmp" / f"pid-{os.getpid()}"
    root.mkdir(parents=True, exist_ok=True)
    return root


def scratch_path(name: str) -> Path:
    path = scratch_root() / f"{time.time_ns()}-{name}"
    path.mkdir(parents=True, exist_ok=False)
    return path


def random_coeffw(rng: random.Random, max_degree: int = 2) -> CoeffW:
    return CoeffW(Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(rng.randint(0, max_degree + 1)))


def random_series(rng: random.Random, rational: bool = False) -> LogSeries:
    terms = {}
    for _ in range(rng.randint(1, 6)):
        key = (rng.randint(0, 2), rng.randint(-6, 4))
        terms[key] = Fraction(rng.randint(-9, 9), rng.randint(1, 5)) if rational else random_coeffw(rng)
    return LogSeries.from_terms(terms)


class ExactKernelSmokeTests(unittest.TestCase):
    def test_binomial_examples(self) -> None:
        self.assertEqual(binomial(4, 2), 6)
        self.assertEqual(binomial(7, 0), 1)
        self.assertEqual(binomial(3, 5), 0)
        self.assertEqual(binomial(300, 2), 44850)

    def test_binomial_satisfies_pascal_rule(self) -> None:
        for n in range(1, 61):
            for k in range(0, n + 1):
                self.assertEqual(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k))

    def test_power_sum_examples(self) -> None:
        self.assertEqual(power_sum(2, 1, 3), Fraction(49, 36))
        self.assertEqual(power_sum(1, 5, 4), 0)
        self.assertEqual(power_sum(1, -3, -1), Fraction(-11, 6))
        with self.assertRaises(PoleError):
            power_sum(1, -1, 1)

    def test_power_sum_is_additive_over_ranges(self) -> None:
        rng = random.Random(11)
        for _ in range(50):
            p = rng.randint(1, 3)
            a = rng.randint(1, 20)
            b = rng.randint(a - 1, 30)
            c = rng.randint(b, 40)
            self.assertEqual(power_sum(p, a, b) + power_sum(p, b + 1, c), power_sum(p, a, c))

    def test_coeffw_ring_axioms(self) -> None:
        rng = random.Random(5)
        for _ in range(40):
            a, b, c = (random_coeffw(rng) for _ in range(3))
            self.assertEqual((a + b) + c, a + (b + c))
            self.assertEqual((a * b) * c, a * (b * c))
            self.assertEqual(a * (b + c), a * b + a * c)
            self.assertEqual(a + CoeffW(), a)
            self.assertEqual(a * ONE, a)
            self.assertTrue((a - a).is_zero())

    def test_coeffw_is_canonical(self) -> None:
        self.assertEqual(CoeffW([1, 0, 0]), CoeffW.constant(1))
        self.assertEqual(CoeffW([Fraction(2, 4)]).coeffs, (Fraction(1, 2),))
        self.assertEqual(W * W * Fraction(-2, 3), CoeffW([0, 0, Fraction(-2, 3)]))
        self.assertEqual(CoeffW().degree, -1)

    def test_coeffw_eval_examples(self) -> None:
        minus_w = coeffw_eval(CoeffW([0, -1]), Precision(128))
        self.assertAlmostEqual(complex(minus_w.mid), complex(0, -math.pi), places=12)

        pi_sq = coeffw_eval(CoeffW([0, 0, Fraction(-2, 3)]), Precision(128))
        self.assertAlmostEqual(complex(pi_sq.mid), complex(2 * math.pi ** 2 / 3, 0), places=12)

        constant = coeffw_eval(CoeffW([Fraction(5, 2)]), Precision(64))
        self.assertEqual(complex(constant.mid), 2.5)
        self.assertEqual(constant.radius, 0)

    def test_coeffw_eval_radius_shrinks_with_precision(self) -> None:
        for c in (CoeffW([Fraction(1, 3)]), CoeffW([1, Fraction(-2, 7), Fraction(5, 3)])):
            radii = [coeffw_eval(c, Precision(bits)).radius for bits in (64, 128, 256)]
            self.assertGreaterEqual(radii[0], radii[1])
            self.assertGreaterEqual(radii[1], radii[2])


class LogSeriesSmokeTests(unittest.TestCase):
    def test_add_examples(self) -> None:
        a = LogSeries.monomial(1, 0, -1)
        self.assertTrue(ls_add(a, LogSeries.monomial(-1, 0, -1)).is_zero())

        f = build_f1(0, 1)
        self.assertEqual(ls_add(f, LogSeries.zero()), LogSeries.from_laurent([1, 4], 0))

        wide = LogSeries.from_laurent([1] * 5, -10, truncated=True)
        narrow = LogSeries.from_laurent([1] * 5, -8, truncated=True)
        total = ls_add(wide, narrow)
        self.assertEqual(total.e_min, -8)
        self.assertTrue(total.truncated)
        self.assertEqual(set(total.tail.spill), {(0, -10), (0, -9)})

    def test_scale_examples(self) -> None:
        f3 = build_f3(1, 3, 20)
        self.assertIs(ls_scale(1, f3), f3)
        self.assertTrue(ls_scale(0, f3).is_zero())
        self.assertEqual(build_f5_vee(1, 3, 20) - build_f5(1, 3, 20), ls_scale(-W, f3))

    def test_mul_log_and_mul_z_examples(self) -> None:
        self.assertEqual(ls_mul_log(LogSeries.monomial(1, 0, -2)), LogSeries.monomial(1, 1, -2))
        self.assertTrue(ls_mul_log(LogSeries.zero()).is_zero())
        self.assertEqual(ls_mul_z(LogSeries.monomial(1, 0, -1)), LogSeries.monomial(1, 0, 0))
        self.assertEqual(ls_mul_z(LogSeries.monomial(1, 1, -3)), LogSeries.monomial(1, 1, -2))

        shifted = ls_mul_z(LogSeries.from_laurent([1] * 43, -40, truncated=True))
        self.assertEqual((shifted.e_min, shifted.e_max), (-39, 3))

    def test_delta_examples(self) -> None:
        self.assertEqual(
            ls_delta(LogSeries.monomial(1, 2, -3)),
            LogSeries.from_terms({(2, -3): -3, (1, -3): 2}),
        )
        self.assertTrue(ls_delta(LogSeries.monomial(1, 0, 0)).is_zero())
        self.assertEqual(ls_delta(LogSeries.monomial(1, 0, 5)), LogSeries.monomial(5, 0, 5))

    def test_delta_identities_on_random_series(self) -> None:
        rng = random.Random(2024)
        for _ in range(30):
            a, b = random_series(rng), random_series(rng)
            self.assertEqual(ls_delta(a + b), ls_delta(a) + ls_delta(b))
            self.assertEqual(ls_delta(ls_mul_z(a)), ls_mul_z(a) + ls_mul_z(ls_delta(a)))
            self.assertEqual(ls_delta(ls_mul_log(a)), ls_mul_log(ls_delta(a)) + a)

    def test_coefficient_below_truncation_raises(self) -> None:
        f2 = build_f2(0, 2, 20)
        with self.assertRaises(TruncationError):
            f2.coeff(0, -21)

    def test_log_paper_branch_examples(self) -> None:
        minus_two = log_paper(ExactComplex(-2))
        self.assertAlmostEqual(complex(minus_two.mid), complex(math.log(2), -math.pi), places=12)

        i = log_paper(ExactComplex(0, 1))
        self.assertAlmostEqual(complex(i.mid), complex(0, math.pi / 2), places=12)

        minus_two_i = log_paper(ExactComplex(0, -2))
        self.assertAlmostEqual(complex(minus_two_i.mid), complex(math.log(2), -math.pi / 2), places=12)

        polar = log_paper(ExactComplex.from_polar(2, 1))
        self.assertAlmostEqual(complex(polar.mid), complex(math.log(2), -math.pi), places=12)

        with self.assertRaises(PoleError):
            log_paper(ExactComplex(0))

    def test_branch_identity_holds_on_random_points(self) -> None:
        reports = branch_identity_check(samples=20, seed=3)
        self.assertEqual([r.check_id for r in reports], ["branch/re-positive", "branch/re-negative"])
        self.assertTrue(all(r.passed for r in reports))

    def test_eval_examples(self) -> None:
        pt = EvalPoint(ExactComplex(2))
        inverse = ls_eval(LogSeries.monomial(1, 0, -1), pt)
        self.assertAlmostEqual(complex(inverse.mid), 0.5, places=14)

        log_two = ls_eval(LogSeries.monomial(1, 1, 0), pt)
        self.assertAlmostEqual(complex(log_two.mid), math.log(2), places=14)

    def test_eval_of_truncated_series_matches_direct_sum(self) -> None:
        pt = EvalPoint(ExactComplex(2))
        ball = ls_eval(build_f2(0, 1, 40), pt)
        with mpmath.workdps(60):
            oracle = mpmath.fsum(
                mpmath.mpf(2) ** (-t) * mpmath.mpf(t - 1) ** 2 / mpmath.mpf(t * (t + 1)) ** 2
                for t in range(2, 61)
            )
            self.assertLessEqual(abs(ball.mid - oracle), ball.radius + mpmath.mpf(2) ** -59)
        self.assertLess(ball.radius, 1e-9)

    def test_eval_of_delta_matches_termwise_derivative(self) -> None:
        rng = random.Random(9)
        z = ExactComplex(Fraction(3, 2), Fraction(1, 2))
        pt = EvalPoint(z)
        for _ in range(10):
            a = random_series(rng, rational=True)
            ball = ls_eval(ls_delta(a), pt)
            with mpmath.workdps(60):
                zz = mpmath.mpc(1.5, 0.5)
                L = mpmath.log(zz)
                expected = mpmath.mpc(0)
                for m, e, c in a.nonzero_terms():
                    value = mpmath.mpf(c[0].numerator) / c[0].denominator
                    term = e * L ** m + (m * L ** (m - 1) if m else 0)
                    expected += value * term * zz ** e
                self.assertLessEqual(abs(ball.mid - expected), ball.radius + mpmath.mpf(10) ** -40)

    def test_exact_eval_of_polynomial(self) -> None:
        self.assertEqual(ls_eval_exact(build_f1(0, 2), ExactComplex(1)), ExactComplex(73))
        with self.assertRaises(DomainError):
            ls_eval_exact(build_f2(0, 2, 20), ExactComplex(2))


class RDerivativesSmokeTests(unittest.TestCase):
    def test_r_eval_examples(self) -> None:
        self.assertEqual(r_eval(RPoint(5, 2)), Fraction(2, 35))
        self.assertEqual(r_eval(RPoint(3, 0)), Fraction(1, 3))
        self.assertEqual(r_eval(RPoint(1, 2)), 0)
        with self.assertRaises(PoleError):
            RPoint(-1, 2)

    def test_log_deriv_examples(self) -> None:
        self.assertEqual(log_deriv(1, RPoint(5, 2)), Fraction(31, 420))
        self.assertEqual(log_deriv(1, RPoint(3, 0)), Fraction(-1, 3))
        expected = -(Fraction(1, 16) + Fraction(1, 9)) + (Fraction(1, 25) + Fraction(1, 36) + Fraction(1, 49))
        self.assertEqual(log_deriv(2, RPoint(5, 2)), expected)
        with self.assertRaises(PoleError):
            log_deriv(1, RPoint(2, 2))

    def test_d_r_pow_examples(self) -> None:
        pt = RPoint(5, 2)
        self.assertEqual(d_r_pow(DerivOrder(0, 3), pt), r_eval(pt) ** 3)
        self.assertEqual(d_r_pow(DerivOrder(1, 2), pt), 2 * Fraction(31, 420) * Fraction(2, 35) ** 2)
        self.assertEqual(d_r_pow(DerivOrder(1, 2), RPoint(1, 2)), 0)

    def test_d_r_pow_matches_quotient_oracle(self) -> None:
        rng = random.Random(17)
        checked = 0
        while checked < 60:
            l, p, nu = rng.randint(0, 2), rng.randint(0, 3), rng.randint(0, 8)
            t = Fraction(rng.randint(-30, 30), rng.randint(1, 5))
            if t.denominator == 1 and -nu <= t <= 0:
                continue
            self.assertEqual(d_r_pow(DerivOrder(p, 2 + l), RPoint(t, nu)), quotient_derivative(p, 2 + l, t, nu))
            checked += 1

    def test_functional_equation(self) -> None:
        rng = random.Random(23)
        for _ in range(30):
            nu = rng.randint(1, 10)
            t = Fraction(2 * rng.randint(-100, 100) + 1, 2)
            self.assertEqual(r_eval(RPoint(t, nu)) / r_eval(RPoint(t, nu - 1)), (t - nu) / (t + nu))

    def test_zero_order_examples(self) -> None:
        self.assertTrue(zero_order_check(0, 3))
        self.assertTrue(zero_order_check(2, 1))
        self.assertTrue(zero_order_check(0, 0))

    def test_tail_bound_examples(self) -> None:
        for nu, t0 in ((1, 2), (3, 10), (5, 20)):
            self.assertLessEqual(tail_bound(0, 0, nu, t0, Fraction(2)), Fraction(2) ** (1 - t0))
        bounds = [tail_bound(1, 2, 3, 10, Fraction(x)) for x in (2, 3, 5, 10)]
        self.assertEqual(bounds, sorted(bounds, reverse=True))
        self.assertIsNone(tail_bound(0, 1, 2, 3, Fraction(11, 10), t_power=3))
        with self.assertRaises(DomainError):
            tail_bound(0, 0, 3, 3, Fraction(2))

    def test_tail_bound_dominates_partial_tails(self) -> None:
        rng = random.Random(41)
        checked = 0
        while checked < 10:
            l, nu = rng.randint(0, 2), rng.randint(0, 6)
            p = rng.randint(0, 1 + l)
            t0 = rng.randint(nu + 1, nu + 30)
            z_abs = rng.choice((Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3), Fraction(7)))
            t_power = rng.randint(0, 7)
            bound = tail_bound(l, p, nu, t0, z_abs, t_power=t_power)
            if bound is None:
                continue
            order = DerivOrder(p, 2 + l)
            partial = Fraction(0)
            scale = z_abs ** -t0
            for t in range(t0, t0 + 500):
                partial += Fraction(t) ** t_power * abs(d_r_pow(order, RPoint(t, nu))) * scale
                scale /= z_abs
            self.assertLessEqual(partial, bound, (l, p, nu, t0, z_abs, t_power))
            checked += 1


class FamilySmokeTests(unittest.TestCase):
    def test_f1_examples(self) -> None:
        self.assertEqual(build_f1(0, 0), LogSeries.from_laurent([1], 0))
        self.assertEqual(build_f1(0, 1), LogSeries.from_laurent([1, 4], 0))
        f = build_f1(1, 4)
        self.assertEqual((f.e_min, f.e_max, f.max_log_power), (0, 4, 0))

    def test_f2_coefficients(self) -> None:
        f2 = build_f2(0, 1, 40)
        self.assertEqual(f2.coeff(0, -2), Fraction(1, 36))
        self.assertTrue(f2.coeff(0, -1).is_zero())
        self.assertLessEqual(build_f2(2, 5, 40).e_max, -6)

    def test_derivative_tails_at_nu_zero(self) -> None:
        # R(t, 0) = 1/t, so each tail coefficient is a signed, 1/p!-weighted power of 1/t.
        f4, f6, f8 = build_f4(0, 0, 20), build_f6(1, 0, 20), build_f8(2, 0, 20)
        for t in range(1, 8):
            self.assertEqual(f4.coeff(0, -t), Fraction(2, t ** 3))
            self.assertEqual(f6.coeff(0, -t), Fraction(6, t ** 5))
            self.assertEqual(f8.coeff(0, -t), Fraction(20, t ** 7))

    def test_log_slices_recover_f2(self) -> None:
        f2 = build_f2(2, 3, 20)
        self.assertEqual(build_f3(2, 3, 20).log_slice(1), f2)
        self.assertEqual(build_f5(2, 3, 20).log_slice(2), ls_scale(Fraction(1, 2), f2))
        self.assertEqual(build_f7(2, 3, 20).log_slice(3), ls_scale(Fraction(1, 6), f2))
        self.assertEqual(build_f3(2, 3, 20).log_slice(0), build_f4(2, 3, 20))
        self.assertTrue(f2.log_slice(1).is_zero())

    def test_index_rules(self) -> None:
        with self.assertRaises(IndexSetError):
            build_f6(0, 3, 40)
        with self.assertRaises(IndexSetError):
            build_vee(0, 5, 3)
        with self.assertRaises(TruncationError):
            build_f2(0, 5, 8)

    def test_w_degree_by_family(self) -> None:
        for l, ks in K_SETS.items():
            for k in ks:
                series = build_vee(l, k, 3, 20)
                self.assertLessEqual(series.w_degree, 0 if k <= 3 else 2)

    def test_both_forms_agree(self) -> None:
        for l in (1, 2):
            reports = forms_check(l, 3, 20)
            self.assertEqual(len(reports), l)
            self.assertTrue(all(r.passed for r in reports), [r.witness for r in reports])

    def test_start_at_one_agrees(self) -> None:
        reports = start_at_one_check(2, 3, 20)
        self.assertEqual(len(reports), 4)
        self.assertTrue(all(r.passed for r in reports))

    def test_y_column_applies_scaled_delta(self) -> None:
        y = build_Y(FamilyIndex(0, 1, 2), 40)
        self.assertEqual(len(y), 4)
        self.assertEqual(y[1], ls_scale(Fraction(1, 2), ls_delta(build_f1(0, 2))))
        self.assertIsNone(y.exact_from)
        self.assertEqual(build_Y(FamilyIndex(1, 3, 2), 40).exact_from, -40)


class MatrixSystemSmokeTests(unittest.TestCase):
    def test_constants_checksum_is_pinned(self) -> None:
        self.assertEqual(DEFAULT_MATRICES.checksum(), EXPECTED_CHECKSUM)
        self.assertNotEqual(DEFAULT_MATRICES.mutated("S0", 1, 1).checksum(), EXPECTED_CHECKSUM)

    def test_transcribed_entries(self) -> None:
        self.assertEqual(s_matrix(0).int_rows()[0], [1, -4, 8, -12])
        self.assertEqual(v_matrix(0, 1).int_rows()[3], [0, 0, 0, 0])
        self.assertEqual(v_matrix(2, 3).int_rows()[0][0], 952)
        with self.assertRaises(IndexSetError):
            v_matrix(0, 2)

    def test_s_is_upper_triangular_toeplitz(self) -> None:
        for l, display in DEFAULT_MATRICES.s_tilde.items():
            rows = display.entries()
            n = len(rows)
            self.assertEqual(n, 4 + 2 * l)
            for i in range(n):
                for j in range(n):
                    expected = 0 if j < i else rows[0][j - i]
                    self.assertEqual(rows[i][j], expected, f"S{l} ({i + 1}, {j + 1})")

    def test_v_has_i_trailing_zero_columns(self) -> None:
        for (l, i), display in DEFAULT_MATRICES.v_tilde_star.items():
            rows = display.entries()
            n = len(rows)
            zero_cols = 0
            for col in range(n - 1, -1, -1):
                if any(row[col] for row in rows):
                    break
                zero_cols += 1
            self.assertEqual(zero_cols, i, f"V{l}({i})")

    def test_t_matrix_examples(self) -> None:
        self.assertEqual(t_matrix(DiagSpec(3, -1)).int_rows(), [[1, 0, 0], [0, -1, 0], [0, 0, 1]])
        self.assertTrue((t_matrix(DiagSpec(2, 1)) - PolyMatrix.identity(2)).is_zero())
        t = t_matrix(DiagSpec(4, 1 - U))
        self.assertEqual(sympy.expand(t.entry(3, 3) - (1 - U) ** 3), 0)

    def test_a_matrix_examples(self) -> None:
        a = a_matrix(0)
        self.assertEqual(sympy.expand(a.entry(0, 0) - (1 + Z * (16 + 12 * U))), 0)
        for l in K_SETS:
            self.assertTrue((a_matrix(l, 0, 5) - s_matrix(l)).is_zero())
            leading = s_matrix(l) + v_matrix(l, 0).scaled(Z)
            self.assertTrue((a_matrix(l).subs({U: 0}) - leading).is_zero())
        with self.assertRaises(PoleError):
            a_matrix(0, Z, 0)

    def test_a_matrix_degrees(self) -> None:
        for l in K_SETS:
            a = a_matrix(l)
            self.assertEqual(a.degree(Z), 1)
            self.assertEqual(a.degree(U), 1 + l)
            self.assertEqual(s_matrix(l).degree(Z), 0)
        self.assertEqual(PolyMatrix.identity(3).scaled(0).degree(Z), 0)

    def test_identities_for_all_families_within_a_second(self) -> None:
        started = time.perf_counter()
        for l in K_SETS:
            self.assertTrue(check_identities(l).passed)
        self.assertLess(time.perf_counter() - started, 1.0)

    def test_identities_hold_for_every_family(self) -> None:
        for l in K_SETS:
            report = check_identities(l)
            self.assertEqual(report.as_bools(), {"eq21": True, "eq22": True, "eq23": True, "eq24": True})
            self.assertTrue(chain_check(l, 3).passed)

    def test_mutation_is_located(self) -> None:
        mutated = DEFAULT_MATRICES.mutated("V0.0", 1, 1)
        report = check_identities(0, mutated)
        failed = {r.name: r for r in report.results if not r.passed}
        self.assertIn("eq21", failed)
        self.assertIn("row", failed["eq21"].witness)
        self.assertIn("col", failed["eq21"].witness)


class VerifierSmokeTests(unittest.TestCase):
    def test_forward_recurrence_examples(self) -> None:
        (report,) = verify_eq16_exact(ExactCheckSpec(0, 1, 2, 2, truncation=40))
        self.assertTrue(report.passed, report.witness)
        low, high = report.window
        self.assertGreaterEqual(high - low + 1, 35)

        (report,) = verify_eq16_exact(ExactCheckSpec(2, 7, 3, 3, truncation=50))
        self.assertTrue(report.passed, report.witness)

    def test_backward_recurrence_examples(self) -> None:
        (report,) = verify_eq17_exact(ExactCheckSpec(0, 3, 2, 2, truncation=40))
        self.assertTrue(report.passed, report.witness)
        (report,) = verify_eq17_exact(ExactCheckSpec(1, 5, 4, 4, truncation=50))
        self.assertTrue(report.passed, report.witness)

    def test_mutated_matrix_fails_with_witness(self) -> None:
        mutated = DEFAULT_MATRICES.mutated("S0", 1, 2)
        (report,) = verify_eq16_exact(ExactCheckSpec(0, 1, 2, 2, truncation=40), mutated)
        self.assertFalse(report.passed)
        self.assertIn("entry", report.witness)
        self.assertEqual(report.params["matrices"], "S0[1,2]+1")

    def test_numeric_forward_at_two(self) -> None:
        spec = NumericCheckSpec(0, 1, 5, EvalPoint(ExactComplex(2), Precision(192)), truncation=60)
        report = verify_numeric(spec, "eq16")
        self.assertTrue(report.passed)
        self.assertLess(float(report.residual), config.NUMERIC_RESIDUAL_TARGET)

    def test_numeric_backward_on_negative_axis(self) -> None:
        spec = NumericCheckSpec(1, 3, 3, EvalPoint(ExactComplex(-3), Precision(192)), truncation=60)
        report = verify_numeric(spec, "eq17")
        self.assertTrue(report.passed, (report.residual, report.budget))
        self.assertLess(float(report.residual), config.NUMERIC_RESIDUAL_TARGET)

    def test_low_precision_report_shows_budget(self) -> None:
        spec = NumericCheckSpec(0, 2, 3, EvalPoint(ExactComplex(2), Precision(64)), truncation=200)
        report = verify_numeric(spec, "eq16")
        self.assertIsNotNone(report.budget)
        self.assertIsNotNone(report.residual)

    def test_empty_sweep(self) -> None:
        self.assertEqual(sweep(SweepConfig()), [])

    def test_sweep_isolates_mutated_family(self) -> None:
        points = (SweepPoint(0, 1, 2, 3), SweepPoint(1, 2, 2, 3))
        reports = sweep(SweepConfig(points), DEFAULT_MATRICES.mutated("S0", 1, 2))
        self.assertEqual(len(reports), 8)
        by_family = {0: [], 1: []}
        for r in reports:
            by_family[r.params["l"]].append(r.passed)
        self.assertTrue(all(by_family[1]))
        self.assertFalse(any(by_family[0]))

    def test_sweep_order_is_independent_of_jobs(self) -> None:
        points = (SweepPoint(0, 2, 2, 4), SweepPoint(0, 3, 2, 3, equations=("eq17",)))
        serial = sweep(SweepConfig(points, jobs=1))
        threaded = sweep(SweepConfig(points, jobs=3))
        self.assertEqual([r.check_id for r in serial], [r.check_id for r in threaded])
        self.assertEqual([r.status for r in serial], [r.status for r in threaded])
        self.assertEqual([r.check_id for r in serial], sorted(r.check_id for r in serial))

    def test_numeric_point_needs_z(self) -> None:
        with self.assertRaises(ValueError):
            SweepPoint(0, 1, 2, 3, mode="numeric")
        with self.assertRaises(DomainError):
            SweepPoint(0, 1, 2, 3, mode="numeric", z=ExactComplex(Fraction(1, 2)))


class ServicesSmokeTests(unittest.TestCase):
    def test_series_cache_evicts_least_recently_used(self) -> None:
        cache = SeriesCache(limit=2)
        cache.get_or_build("a", lambda: 1)
        cache.get_or_build("b", lambda: 2)
        self.assertEqual(cache.get_or_build("a", lambda: 99), 1)
        cache.get_or_build("c", lambda: 3)

        self.assertEqual(cache.cached_keys(), ["a", "c"])
        self.assertEqual((cache.hits, cache.misses), (1, 3))

    def test_sweep_runner_turns_exceptions_into_fail_reports(self) -> None:
        def boom():
            raise RuntimeError("boom")

        runner = SweepRunner(workers=2)
        runner.submit("b/ok", {}, lambda: [CheckReport("b/ok", {}, "pass")])
        runner.submit("a/broken", {"l": 0}, boom)
        reports = runner.run()

        self.assertEqual([r.check_id for r in reports], ["a/broken", "b/ok"])
        self.assertEqual(reports[0].status, "fail")
        self.assertIn("boom", reports[0].params["error"])


class ConfigSmokeTests(unittest.TestCase):
    def test_defaults_are_consistent(self) -> None:
        self.assertGreaterEqual(config.DEFAULT_PREC_BITS, config.MIN_PREC_BITS)
        self.assertLessEqual(config.DEFAULT_NU_MIN, config.DEFAULT_NU_MAX)
        self.assertIn(config.DEFAULT_FORMAT, config.OUTPUT_FORMATS)
        self.assertGreater(config.BINOMIAL_ROW_CAP, 0)

    def test_validate_settings_value(self) -> None:
        self.assertEqual(validate_settings_value("12", int, 2, 100), (True, 12, None))
        self.assertFalse(validate_settings_value(1, int, 2, 100)[0])
        self.assertFalse(validate_settings_value(True, int, 0, 100)[0])
        self.assertFalse(validate_settings_value("xml", str, None, None, ("json", "csv"))[0])


class UserSettingsSmokeTests(unittest.TestCase):
    def test_config_file_overrides_defaults_and_flags_override_file(self) -> None:
        root = scratch_path("config-file")
        settings_path = root / "config.json"
        settings_path.write_text(
            json.dumps({"DEFAULT_NU_MAX": 5, "DEFAULT_PREC_BITS": 10, "UNKNOWN": 1}),
            encoding="utf-8",
        )

        with patch.dict(os.environ, {"DQS_CONFIG": str(settings_path)}):
            from_file = effective_config({})
            from_flags = effective_config({"nu_max": 7, "format": "json"})

        self.assertEqual(from_file.nu_max, 5)
        self.assertEqual(from_file.prec_bits, config.DEFAULT_PREC_BITS)
        self.assertTrue(from_file.source.startswith("file:"))
        self.assertEqual((from_flags.nu_max, from_flags.format), (7, "json"))
        self.assertTrue(from_flags.source.endswith("+cli"))

    def test_missing_file_means_defaults_and_bad_flags_are_rejected(self) -> None:
        missing = scratch_path("config-missing") / "absent.json"
        with patch.dict(os.environ, {"DQS_CONFIG": str(missing)}):
            cfg = effective_config({})
            self.assertEqual(cfg.source, "defaults")
            self.assertEqual(cfg.nu_max, config.DEFAULT_NU_MAX)
            with self.assertRaises(DomainError):
                effective_config({"prec_bits": 8})
            with self.assertRaises(DomainError):
                effective_config({"nu_min": 6, "nu_max": 4})


class ReportSmokeTests(unittest.TestCase):
    def _reports(self) -> list[CheckReport]:
        return [
            CheckReport("eq16/exact/l0/k1/nu002", {"l": 0}, "pass", window=(-39, 3), elapsed_ms=4),
            CheckReport("eq16/numeric/l0/k1/nu002/z=2", {"l": 0}, "fail", residual="1.0e-3",
                        budget="1.0e-20", elapsed_ms=7),
        ]

    def test_json_document_round_trips(self) -> None:
        text = dump_json(report_document(self._reports(), {"prec_bits": 192}))
        self.assertEqual(dump_json(json.loads(text)), text)
        doc = json.loads(text)
        self.assertEqual(set(doc), {"version", "config", "checks"})
        self.assertNotIn("residual", doc["checks"][0])
        self.assertEqual(doc["checks"][0]["window"], [-39, 3])

    def test_table_and_csv(self) -> None:
        table = format_table(self._reports())
        self.assertTrue(table.rstrip().endswith("1 passed, 1 failed"))
        lines = format_csv(self._reports()).splitlines()
        self.assertEqual(lines[0], "check_id,status,residual,budget,window_low,window_high,elapsed_ms")
        self.assertEqual(lines[1], "eq16/exact/l0/k1/nu002,pass,,,-39,3,4")


class CliSmokeTests(unittest.TestCase):
    def setUp(self) -> None:
        missing = scratch_path("cli-config") / "absent.json"
        patcher = patch.dict(os.environ, {"DQS_CONFIG": str(missing)})
        patcher.start()
        self.addCleanup(patcher.stop)

    def run_cli(self, *argv: str) -> tuple[int, str, str]:
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = cli.main([*argv, "--quiet"])
        return code, out.getvalue(), err.getvalue()

    def test_eval_apery_values(self) -> None:
        self.assertEqual(self.run_cli("eval", "--l", "0", "--k", "1", "--nu", "1", "--z", "1")[:2], (0, "5\n"))
        self.assertEqual(self.run_cli("eval", "--l", "0", "--k", "1", "--nu", "2", "--z", "1")[:2], (0, "73\n"))

    def test_eval_rejects_inadmissible_k(self) -> None:
        code, _, err = self.run_cli("eval", "--l", "0", "--k", "5", "--nu", "2", "--z", "2")
        self.assertEqual(code, 2)
        self.assertIn("K_0 = {1, 2, 3}", err)

    def test_eval_accepts_negative_rational_point(self) -> None:
        code, out, _ = self.run_cli("eval", "--l", "0", "--k", "2", "--nu", "2", "--z", "-3/2+1/2i",
                                    "--format", "json")
        self.assertEqual(code, 0)
        value = json.loads(out)["value"]
        self.assertEqual(value["z"], "-3/2+1/2i")
        self.assertFalse(value["exact"])

    def test_eval_rejects_unit_disk(self) -> None:
        self.assertEqual(self.run_cli("eval", "--l", "0", "--k", "2", "--nu", "2", "--z", "1/2")[0], 2)

    def test_verify_identities_json(self) -> None:
        code, out, _ = self.run_cli("verify", "identities", "--l", "2", "--format", "json")
        self.assertEqual(code, 0)
        doc = json.loads(out)
        self.assertEqual(len(doc["checks"]), 4)
        self.assertTrue(all(c["status"] == "pass" for c in doc["checks"]))
        self.assertEqual(doc["version"], f"{config.APP_NAME} {config.APP_VERSION}")
        self.assertEqual(doc["config"]["prec_bits"], config.DEFAULT_PREC_BITS)
        self.assertEqual(dump_json(doc), out)

    def test_verify_recurrence_exact(self) -> None:
        code, out, _ = self.run_cli("verify", "recurrence", "--l", "1", "--k", "5", "--nu-min", "2",
                                    "--nu-max", "3", "--mode", "exact", "--format", "json")
        self.assertEqual(code, 0)
        ids = [c["check_id"] for c in json.loads(out)["checks"]]
        self.assertEqual(len([i for i in ids if i.startswith("eq16/")]), 2)
        self.assertEqual(len([i for i in ids if i.startswith("eq17/")]), 2)

    def test_verify_recurrence_numeric_csv(self) -> None:
        code, out, _ = self.run_cli("verify", "recurrence", "--mode", "numeric", "--z", "-3", "--prec", "192",
                                    "--l", "0", "--k", "2", "--nu", "3", "--T", "60", "--format", "csv")
        self.assertEqual(code, 0)
        rows = out.splitlines()
        self.assertTrue(rows[0].startswith("check_id,status,residual,budget"))
        self.assertEqual(len(rows), 3)
        self.assertTrue(all(",pass," in row for row in rows[1:]))

    def test_verify_fails_with_exit_one_on_mutated_constants(self) -> None:
        with patch("dqs.cli.DEFAULT_MATRICES", DEFAULT_MATRICES.mutated("S0", 1, 2)):
            self.assertEqual(self.run_cli("verify", "identities", "--l", "0")[0], 1)

    def test_numeric_without_point_is_usage_error(self) -> None:
        self.assertEqual(self.run_cli("verify", "recurrence", "--mode", "numeric", "--l", "0")[0], 2)

    def test_dump_matrices_csv(self) -> None:
        code, out, _ = self.run_cli("dump", "matrices", "--l", "0", "--format", "csv")
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines()[0], "1,-4,8,-12")
        self.assertEqual(self.run_cli("dump", "matrices", "--l", "3")[0], 2)

    def test_dump_table(self) -> None:
        code, out, _ = self.run_cli("dump", "table", "--l", "0", "--nu-max", "2", "--format", "csv")
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines(), ["l,nu,value", "0,0,1", "0,1,5", "0,2,73"])

    def test_dump_table_accepts_bounds_below_the_recurrence_range(self) -> None:
        code, out, _ = self.run_cli("dump", "table", "--l", "1", "--nu-max", "1", "--format", "csv")
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines(), ["l,nu,value", "1,0,1", "1,1,7"])
        code, out, _ = self.run_cli("dump", "table", "--l", "0", "--nu-max", "0", "--format", "csv")
        self.assertEqual((code, out.splitlines()), (0, ["l,nu,value", "0,0,1"]))
        self.assertEqual(self.run_cli("dump", "table", "--nu-max", "-1")[0], 2)

    def test_unknown_command_is_usage_error(self) -> None:
        self.assertEqual(self.run_cli("frobnicate")[0], 2)


if __name__ == "__main__":
    unittest.main()
