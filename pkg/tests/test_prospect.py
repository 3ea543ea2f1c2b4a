import math

import pytest

from quadperfect import (
    EulerianShape,
    InternalInconsistency,
    LParity,
    QuadInt,
    congruence_identities,
    direct_scan,
    eulerian_parity,
    inert_residues,
    is_n_powerfully_t_perfect,
    mersenne_perfects,
    prime_above,
    ring,
    search_powerfully,
    search_t_perfect,
    verify_bounds,
    worker_count,
    zeta_series,
)
from quadperfect.prospect import (
    _gaps,
    format_checkpoint_line,
    parse_checkpoint_line,
)


class TestSearchTPerfect:
    def test_28_in_minus_eleven(self):
        report = search_t_perfect(ring(-11), 2, 28**2)
        assert QuadInt.from_int(-11, 28) in report.hits
        assert report.cross_checked is True
        assert report.method == "IntegerReduction"

    def test_trivial_bound(self, ctx):
        report = search_t_perfect(ctx, 2, 1)
        assert report.hits == ()
        assert report.cross_checked is True

    def test_gaussian_absence_small(self):
        report = search_t_perfect(ring(-1), 2, 10**5)
        assert report.hits == ()
        assert report.cross_checked is True

    def test_bad_params(self, ctx):
        with pytest.raises(ValueError):
            search_t_perfect(ctx, 1, 100)
        with pytest.raises(ValueError):
            search_t_perfect(ctx, 2, 0)

    def test_hits_certified(self):
        report = search_t_perfect(ring(-11), 2, 8128**2)
        assert [z.as_int() for z in report.hits] == [28, 8128]
        for z in report.hits:
            assert is_n_powerfully_t_perfect(ring(-11), z, 1, 2)


class TestSearchPowerfully:
    def test_finds_the_two_powerfully_perfect_pair(self):
        report = search_powerfully(ring(-1), 2, 2, 90)
        assert QuadInt(-1, 9, 3) in report.hits
        norms = {z.norm() for z in report.hits}
        assert norms == {90}

    def test_n_three_empty(self, d):
        report = search_powerfully(ring(d), 3, 2, 20_000)
        assert report.hits == ()

    def test_agrees_with_t_perfect_at_n_one(self):
        for d in (-11, -19):
            a = search_powerfully(ring(d), 1, 2, 10**3)
            b = search_t_perfect(ring(d), 2, 10**3)
            assert a.hits == b.hits

    def test_direct_scan_respects_workers_env(self, monkeypatch):
        monkeypatch.setenv("QP_WORKERS", "1")
        assert worker_count() == 1
        hits = direct_scan(-1, 2, 2, 90)
        assert QuadInt(-1, 9, 3) in hits
        monkeypatch.setenv("QP_WORKERS", "0")
        with pytest.raises(ValueError):
            worker_count()


class TestCheckpoint:
    def test_line_round_trip(self):
        hits = [QuadInt(-1, 9, 3), QuadInt(-1, 3, 9)]
        line = format_checkpoint_line(-1, 2, 2, 1, 91, hits)
        rec = parse_checkpoint_line(line)
        assert rec == {
            "d": -1,
            "n": 2,
            "t": 2,
            "norm_lo": 1,
            "norm_hi": 91,
            "hits": hits,
        }

    def test_empty_hits_round_trip(self):
        rec = parse_checkpoint_line(format_checkpoint_line(-7, 1, 2, 5, 10, []))
        assert rec["hits"] == []

    def test_gap_computation(self):
        assert _gaps(100, []) == [(1, 101)]
        assert _gaps(100, [(1, 101)]) == []
        assert _gaps(100, [(40, 60)]) == [(1, 40), (60, 101)]
        assert _gaps(100, [(1, 30), (50, 80)]) == [(30, 50), (80, 101)]
        assert _gaps(100, [(1, 60), (40, 80)]) == [(80, 101)]

    def test_scan_resumes_from_checkpoint(self, tmp_path):
        path = str(tmp_path / "scan.ckpt")
        full = direct_scan(-1, 2, 2, 4000)
        # Simulate an interrupted run: only the lower half was completed.
        from quadperfect.scan import scan_shard

        partial = scan_shard(-1, 2, 1, 2000, t_filter=frozenset({2}))
        with open(path, "w") as fh:
            line = format_checkpoint_line(
                -1, 2, 2, 1, 2000,
                [QuadInt(-1, x, y, half=True) for x, y, t in partial],
            )
            fh.write(line + "\n")
        resumed = direct_scan(-1, 2, 2, 4000, checkpoint=path)
        assert resumed == full
        # The file gained records covering the remaining range.
        with open(path) as fh:
            lines = [parse_checkpoint_line(l) for l in fh if l.strip()]
        covered = _gaps(4000, [(r["norm_lo"], r["norm_hi"]) for r in lines])
        assert covered == []

    def test_checkpoint_written_during_scan(self, tmp_path):
        path = str(tmp_path / "fresh.ckpt")
        hits = direct_scan(-1, 2, 2, 90, checkpoint=path)
        assert QuadInt(-1, 9, 3) in hits
        again = direct_scan(-1, 2, 2, 90, checkpoint=path)
        assert again == hits


class TestMersenne:
    def test_minus_eleven_up_to_17(self):
        report = mersenne_perfects(ring(-11), 17)
        assert [z.as_int() for z in report.hits] == [
            28,
            8128,
            2**12 * (2**13 - 1),
            2**16 * (2**17 - 1),
        ]

    def test_gaussian_empty(self):
        assert mersenne_perfects(ring(-1), 31).hits == ()

    def test_small_p_max(self):
        assert [z.as_int() for z in mersenne_perfects(ring(-11), 3).hits] == [28]

    def test_desk_scale_cap(self, ctx):
        with pytest.raises(ValueError):
            mersenne_perfects(ctx, 128)

    def test_hits_within_t_perfect_search(self):
        report = mersenne_perfects(ring(-11), 5)
        top = max((z.norm() for z in report.hits), default=1)
        wide = search_t_perfect(ring(-11), 2, top)
        assert set(report.hits) <= set(wide.hits)


class TestZeta:
    def test_reference_values(self):
        # High-precision references: zeta(1.5), zeta(2), zeta(2.5), zeta(3).
        assert math.isclose(zeta_series(2.0), math.pi**2 / 6, abs_tol=1e-10)
        assert math.isclose(zeta_series(1.5), 2.6123753486854883, abs_tol=1e-10)
        assert math.isclose(zeta_series(2.5), 1.3414872572509171, abs_tol=1e-10)
        assert math.isclose(zeta_series(3.0), 1.2020569031595943, abs_tol=1e-10)

    def test_rejects_pole(self):
        with pytest.raises(ValueError):
            zeta_series(1.0)


class TestVerifyBounds:
    def test_constants(self):
        report = verify_bounds(3, [])
        assert report.ok
        names = [c.name for c in report.checks]
        assert "zeta(5/2)^2 in (1.79, 1.81)" in names

    def test_sample_indices_below_bound(self, d):
        ctx = ring(d)
        samples = [
            (ctx, QuadInt.from_int(d, 360)),
            (ctx, QuadInt.from_int(d, 2**6 * 3**4 * 5 * 7 * 11)),
        ]
        for n in (3, 4, 5):
            assert verify_bounds(n, samples).ok

    def test_inert_product_below_zeta3(self):
        # A product of inert primes in the Gaussian ring: I_3 < zeta(3) < 2.
        ctx = ring(-1)
        z = QuadInt.from_int(-1, 3**3 * 7**2 * 11 * 19)
        report = verify_bounds(3, [(ctx, z)])
        assert report.ok
        from quadperfect import index_n

        assert float(index_n(ctx, z, 3).value) < zeta_series(3.0) < 2

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            verify_bounds(2, [])


class TestInertResidues:
    def test_documented_rings(self):
        assert inert_residues(ring(-11), 11) == frozenset({2, 6, 7, 8, 10})
        assert inert_residues(ring(-1), 4) == frozenset({3})
        assert inert_residues(ring(-3), 3) == frozenset({2})

    def test_stability_when_scan_deepens(self):
        for d, modulus in ((-11, 11), (-1, 4), (-3, 3), (-7, 7)):
            shallow = inert_residues(ring(d), modulus, scan_limit=10**5)
            deep = inert_residues(ring(d), modulus, scan_limit=10**6)
            assert shallow == deep

    def test_too_small_modulus_reported(self):
        with pytest.raises(ValueError, match="does not separate"):
            inert_residues(ring(-11), 5)


class TestEulerian:
    def test_parity_predictor(self):
        assert eulerian_parity(EulerianShape(5, 1, (1,), 7)) is LParity.ODD_L
        assert eulerian_parity(EulerianShape(5, 5, (2,), 7)) is LParity.EVEN_L
        assert eulerian_parity(EulerianShape(13, 13, (1, 2), 23)) is LParity.EVEN_L
        assert eulerian_parity(EulerianShape(5, 9, (3,), 1)) is LParity.ODD_L

    def test_l_counts_odd_exponents(self):
        shape = EulerianShape(5, 1, (1, 2, 3, 4, 7), 7)
        assert shape.L == 3

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            EulerianShape(7, 1, (1,), 7)  # p = 3 mod 4
        with pytest.raises(ValueError):
            EulerianShape(5, 3, (1,), 7)  # k = 3 mod 4
        with pytest.raises(ValueError):
            EulerianShape(5, 1, (0,), 7)  # zero exponent
        with pytest.raises(ValueError):
            EulerianShape(5, 1, (1,), 5)  # m2 prime not 7 mod 8


class TestCongruences:
    def test_all_identities_hold(self):
        report = congruence_identities()
        assert report.ok, report.failures()

    def test_spot_values(self):
        # sigma(25) = 31 = 7 mod 8 = 6*1+1; sum_{l<=5} 5^l = 3906 = 2 mod 8;
        # 2^13 - 1 = 8191 = 7 mod 11.
        assert sum(5**l for l in range(3)) % 8 == (6 * 1 + 1) % 8
        assert sum(5**l for l in range(6)) % 8 == 2
        assert (2**13 - 1) % 11 == 7
