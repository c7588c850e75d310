"""Smoke test for the pycwe extension module.

Build and install first:

    pip install maturin
    maturin build --release -m crates/py/Cargo.toml -o dist
    pip install dist/pycwe-*.whl
"""

import math
import tempfile
from pathlib import Path

import pycwe


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


def test_region():
    sq = pycwe.Region.rect((0, 0), (10, 10))
    close(sq.area(), 100.0, 1e-9)
    hole = pycwe.polygonize_circle((5, 5), 2.0, 1e-4)
    ring = sq.difference(hole)
    assert len(ring.holes()) == 1
    close(ring.area(), 100.0 - math.pi * 4.0, 1e-2)
    assert ring.point_in(5, 5) == "outside"
    assert ring.point_in(1, 1) == "inside"
    close(sq.intersection(hole).area(), hole.area(), 1e-6)  # snap grid


def test_engagement():
    # Tool centred on the left edge of a big plate: right half engaged.
    plate = pycwe.Region.rect((0, -50), (100, 50))
    ivs = pycwe.engagement_intervals((0, 0), 5.0, plate)
    assert len(ivs) == 1
    close(ivs[0][0], 270.0, 1e-6)
    close(ivs[0][1], 90.0, 1e-6)

    oracle = pycwe.analytical_engagement((0, -50), (100, 50), [], (0, 0), 5.0)
    close(oracle[0][0], 270.0, 1e-9)


def test_simulate():
    tool = pycwe.Tool("T1", 10.0, 30.0)
    stock = pycwe.Stock.box([0, 0, 0], [60, 40, 10])
    cls = [(-10 + 5 * k, 20, 8) for k in range(13)]
    sim = pycwe.simulate(tool, stock, cls, operation="Slot", chord_tol=1e-4, timing=False)
    recs = sim.records
    assert len(recs) == 12
    removed = sum(r.removed_volume for r in recs)
    close(removed, sim.initial_volume - sim.final_volume, 1e-6 * sim.initial_volume)
    assert sim.perf["n_cls_scheduled"] == 12
    assert sim.cwe_csv().startswith("cl_index,")
    # Steady slot: feed per step equals the radius, so the width is 240 degrees.
    mid = recs[6]
    z, ivs, _ = mid.slices[0]
    (entry, exit_) = ivs[0]
    close((exit_ - entry) % 360.0, 240.0, 0.05)

    with tempfile.TemporaryDirectory() as d:
        sim.write_outputs(d, angles="both")
        for f in ["cwe.csv", "slices.csv", "slices_feed_relative.csv", "perf.csv"]:
            assert (Path(d) / f).exists(), f


def test_errors():
    try:
        pycwe.Tool("T1", -1.0, 30.0)
    except pycwe.ValidationError:
        pass
    else:
        raise AssertionError("negative diameter accepted")
    assert issubclass(pycwe.ValidationError, ValueError)
    assert issubclass(pycwe.GeometryError, RuntimeError)


def test_validate():
    rows = pycwe.validate()
    assert len(rows) >= 28
    assert all(r["passed"] for r in rows)


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok {name}")
    print("pycwe smoke test passed")
