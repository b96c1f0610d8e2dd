"""Smoke test for the vn_entropy_py extension module.

Build and install first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/*.whl
"""

import math

import vn_entropy_py as vn


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    assert close(vn.mean(2, 2), 1.0 / 3.0, 1e-14)
    assert close(vn.variance(2, 2), 0.032124297741466, 1e-14)
    assert vn.mean(1, 7) == 0.0

    stats = vn.exact_stats(3, 5)
    assert close(stats.second_moment, stats.variance + stats.mean**2, 1e-14)

    c = vn.coefficients(2, 3)
    assert (c.c1, c.c4, c.c6) == (30.0, 6.0, 24.0)
    assert close(c.c3 - c.c8, c.c3_minus_c8, 1e-9)
    assert vn.coefficients(3, 3).c3 is None

    assert close(vn.two_point_moment(4, 6, 1.0, 1.0), 1.0, 1e-10)

    value, error = vn.second_moment_numeric(2, 4)
    assert close(value, vn.exact_stats(2, 4).second_moment, 1e-6 * value)
    assert error >= 0.0

    est = vn.estimate_stats(2, 4, samples=20000, seed=1, batches=20)
    z = (est.mean - vn.mean(2, 4)) / est.mean_se
    assert math.isfinite(z) and abs(z) < 4.0, z

    try:
        vn.mean(3, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("m > n accepted")

    print("smoke test passed:", stats)


if __name__ == "__main__":
    main()
