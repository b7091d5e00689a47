import csv
import io
import math

import numpy as np
import pytest

from alphalift.experiments import (
    ALPHA_LIFT_RELAXATION,
    CDF_COLUMNS,
    DELTA_REFINEMENT,
    PUT_COLUMNS,
    alpha_lift_ordering,
    cdf_rows,
    cdf_trials,
    empirical_cdf,
    example_surface,
    nmil,
    put_rows,
    put_sweep,
    records_by_method,
    toy_joint,
    write_csv,
)
from alphalift.lift import INF, alpha_lift, max_sibson_mi, sibson_mi
from alphalift.probability import random_joint
from alphalift.relaxation import RelaxationConfig


def test_ordering_toy(toy):
    assert [toy.x_labels[i] for i in alpha_lift_ordering(toy, INF)][0] == "d"
    assert [toy.x_labels[i] for i in alpha_lift_ordering(toy, 1.5)][0] == "c"


def test_nmil_toy(toy):
    # merging {c, d}: outputs a, b and one symbol of mass 0.57
    h = 1.1539461353172153
    i = -(0.36 * math.log(0.36) + 0.07 * math.log(0.07) + 0.57 * math.log(0.57))
    assert nmil(toy, [2, 3]) == pytest.approx((h - i) / h, abs=1e-12)
    assert nmil(toy, []) == pytest.approx(0.0, abs=1e-12)
    assert nmil(toy, range(4)) == 1.0
    assert nmil(toy, [1]) == pytest.approx(0.0, abs=1e-12)


def test_sweep_endpoints(toy):
    pts = put_sweep(toy, [1.5, 10, INF])
    assert len(pts) == 3 * 5
    for k in range(3):
        first, last = pts[5 * k], pts[5 * k + 4]
        assert first.cut_index == 0 and first.nmil == pytest.approx(0.0, abs=1e-12)
        assert first.min_sibson == pytest.approx(sibson_mi(toy, first.alpha), abs=1e-12)
        assert first.min_max_sibson == pytest.approx(max_sibson_mi(toy, first.alpha), abs=1e-12)
        assert (last.nmil, last.min_sibson, last.min_max_sibson) == (1.0, 0.0, 0.0)
        assert math.isnan(last.epsilon_equiv)


def test_sweep_monotone_random():
    for seed in range(10):
        j = random_joint(8, 12, seed)
        pts = put_sweep(j, [1.5, 10, INF])
        for k in range(3):
            block = pts[13 * k: 13 * (k + 1)]
            n = np.array([p.nmil for p in block])
            ms = np.array([p.min_sibson for p in block])
            mm = np.array([p.min_max_sibson for p in block])
            assert np.all(np.diff(n) >= -1e-12)
            assert np.all(np.diff(ms) <= 1e-12)
            assert np.all(np.diff(mm) <= 1e-12)
            assert np.all(mm <= max_sibson_mi(j, block[0].alpha) + 1e-12)


def test_surface_shape_and_domain():
    out = example_surface(2, [0.1, 0.5, 0.6, 0.9])
    assert out.shape == (4, 4)
    np.testing.assert_allclose(out[2], alpha_lift(toy_joint(0.6), 2), atol=1e-14)
    with pytest.raises(ValueError):
        example_surface(2, [0.0, 0.5])


def test_trials_deterministic_and_job_invariant():
    cfg = RelaxationConfig(eps_bar=1.0, alpha=10, epsilon=0.45, delta=0.01)
    a = cdf_trials(12, 15, 20, cfg, base_seed=3)
    b = cdf_trials(12, 15, 20, cfg, base_seed=3, jobs=2)
    c = cdf_trials(6, 15, 20, cfg, base_seed=3)
    assert a == b
    assert a[:12] == c
    assert len(records_by_method(a, DELTA_REFINEMENT)) == 12
    assert len(records_by_method(a, ALPHA_LIFT_RELAXATION)) == 12
    for rec in a:
        assert 0 <= rec.nmil <= 1
        assert 0 <= rec.realized_delta <= 1


def test_empirical_cdf():
    assert empirical_cdf([0.1, 0.2, 0.3, 0.4], 0.2) == 0.5
    assert empirical_cdf([0.5], 0.2) == 0.0


def test_csv_output(toy):
    text = write_csv(put_rows(put_sweep(toy, [2])), PUT_COLUMNS)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0].keys()) == PUT_COLUMNS
    assert rows[-1]["nmil"] == "1" and rows[-1]["min_sibson"] == "0"
    cfg = RelaxationConfig(eps_bar=1.0, alpha=10, epsilon=0.45, delta=0.01)
    buf = io.StringIO()
    write_csv(cdf_rows(cdf_trials(2, 4, 5, cfg, 0)), CDF_COLUMNS, buf)
    assert buf.getvalue().splitlines()[0] == ",".join(CDF_COLUMNS)
    assert len(buf.getvalue().splitlines()) == 5
