"""Smoke test for the zeta_partition_py extension module.

Build and install first, e.g.

    pip install maturin
    maturin build --release -m crates/py/Cargo.toml
    pip install target/wheels/zeta_partition-*.whl

then run ``python python/smoke_test.py``.
"""

import math

import zeta_partition_py as zp


def main():
    assert zp.to_factorial(34) == [0, 2, 1, 1]
    assert zp.from_factorial([1, 2, 3, 4]) == 119
    assert [zp.left_factorial(n) for n in range(1, 8)] == [1, 2, 4, 10, 34, 154, 874]

    assert zp.classify_b(10) == 5
    assert zp.classify_a(50) == (3, 4)
    assert zp.subclass_digits(50, 3) == (2, [2, 2])
    assert zp.sequence("A4", 200) == [7, 23, 39, 50, 55, 71, 87, 103, 104, 119, 135, 151, 167, 183, 199]

    b5 = zp.b_residues(5)
    assert (b5.modulus, b5.residues) == (120, [10, 12, 16, 18, 22, 24])
    assert 130 in b5 and 131 not in b5
    assert b5.density() == (1, 20)
    assert str(zp.bmk_residues(3, 3)) == "mod 54: 14 32"

    last = zp.greedy_assign("last", 6)
    assert last.level(4).residues == [19, 21]
    assert [x for x in range(1, 34) if last.owner(x) is None] == [1, 3, 7, 9, 13, 15, 25, 27, 31, 33]
    assert last.progression_hit(1, 2) == (3, 5, 6)
    assert zp.greedy_assign("random", 5, seed=3).level(5).residues == zp.greedy_assign("random", 5, seed=3).level(5).residues
    assert zp.oracle_equivalence(7)
    assert zp.missed_set_check(33, 6)[0] == "confirmed"
    assert zp.missed_density(5) == (1, 5)

    value, bound = zp.zeta_minus_one(2)
    assert abs(value - (math.pi ** 2 / 6 - 1)) < 1e-10 and bound < 1e-12
    assert abs(zp.zeta_row_sum(30) - 1) < 4e-9
    assert zp.column_sum_identity(7) == (1, 42)
    assert zp.max_exponent(32) == 5

    report = zp.empirical_density("B2", 1000)
    assert (report.count, report.empirical, report.abs_error) == (500, 0.5, 0.0)
    squarefree = zp.powerfree_density(1, 100_000)
    assert abs(squarefree.empirical - 6 / math.pi ** 2) < 1e-3

    code, out, err = zp.run_cli(["classify", "34"])
    assert (code, out) == (0, "34 B6 A2\n"), (code, out, err)
    code, _, _ = zp.run_cli(["classify", "0"])
    assert code == 2

    for bad in (lambda: zp.classify_a(0), lambda: zp.sequence("A99", 3), lambda: zp.greedy_assign("x", 3)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("zeta_partition_py smoke test passed")


if __name__ == "__main__":
    main()
