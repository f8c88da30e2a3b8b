"""Smoke test for the skelbary extension module.

Build and install first, e.g.
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/skelbary-*.whl
then run `python python/smoke_test.py`.
"""

from fractions import Fraction
import math

import skelbary


def main():
    cube = skelbary.generate("cube", 3)
    assert cube.f_vector() == [8, 12, 6], cube.f_vector()
    assert cube.dim == 3 and cube.ambient_dim == 3
    assert len(cube.facets) == 6

    square = skelbary.Polytope([[-1, -1], [1, -1], [1, 1], [-1, 1], [0, 0]], name="square")
    assert len(square.vertices) == 4
    assert square.contains([Fraction(1, 2), "-1/3"])
    assert not square.contains([2, 0])
    assert len(square.carrier_face(["-1", "0"])) == 2

    origin = [0, 0, 0]
    out = skelbary.decompose(cube, origin, n=3, k=1)
    assert out["status"] == "witness", out
    assert skelbary.check_witness(cube, origin, out, n=3, k=1)
    total = [sum(Fraction(p[c]) for p in out["points"]) / 3 for c in range(3)]
    assert total == [0, 0, 0]
    phi = skelbary.evaluate_phi(cube, out["points"], 1)
    assert phi["phi_max_abs"] < 1e-9

    tampered = dict(out, points=[["0", "0", "0"]] + out["points"][1:])
    assert not skelbary.check_witness(cube, origin, tampered, n=3, k=1)

    refuted = skelbary.decompose(square, [0, 0], n=1, k=1)
    assert refuted["status"] == "infeasible" and refuted["all_certified"]

    factored = skelbary.decompose(cube, origin, n=4, k=1, strategy="factored")
    assert skelbary.check_witness(cube, origin, factored, n=4, k=1)

    assert math.isclose(skelbary.dist_to_skeleton(cube, origin, 1), math.sqrt(2))
    full = list(range(8))
    assert skelbary.intersection_dimension(cube, [full, full], ["1/2", "1/2"]) == 3
    report = skelbary.verify_dimension_inequality(square, 2, 1)
    assert report["violations"] == 0

    csv_text, summary = skelbary.run_sweep("cube", 2, (2, 3), (1, 2), trials=2, seed=1)
    assert csv_text.splitlines()[0] == "generator,d,n,k,status,tuples_examined,phi_max_abs,elapsed_ms"
    assert summary["violations"] == 0 and summary["success"] == 8, summary

    try:
        skelbary.decompose(square, [3, 3], n=2, k=1)
    except ValueError:
        pass
    else:
        raise AssertionError("point outside the polytope was accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
