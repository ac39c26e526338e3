"""Smoke test for the wpvol extension module."""

import math
import os
import tempfile
from fractions import Fraction

import wpvol


def value(p):
    return sum(Fraction(n, d) * math.pi ** (2 * k) for k, n, d in p.terms())


def main():
    e = wpvol.Engine()
    assert e.convention == "paper"
    assert str(e.coeff(1, 1, [0])) == "pi^2/6"
    assert str(wpvol.Engine("half").coeff(1, 1, [0])) == "pi^2/12"

    computed = e.fill(4, 3)
    assert computed > 0 and len(e) > 0

    v04 = e.eval_exact(0, 4, [(1, 1)] * 4)
    assert str(v04) == "2*pi^2 + 2", v04
    lo, hi = e.eval(0, 4, [1.0] * 4)
    assert lo <= float(v04) <= hi

    coeffs = dict((tuple(k), c) for k, c in e.volume(1, 2))
    assert coeffs[(0, 0)].terms() == [(2, 1, 4)]
    assert abs(value(coeffs[(0, 0)]) - math.pi ** 4 / 4) < 1e-12

    a, b = e.coeff(2, 1, [0]), e.coeff(2, 1, [1])
    assert a.compare(b) == 1 and b.compare(a) == -1
    assert (a - a).is_zero() and (a + b) - b == a

    lo, hi = wpvol.leading_order([2.0])
    assert lo <= math.sinh(1.0) <= hi

    lam, bound = wpvol.lambda_ab(1.0, 2.0)
    assert bound < 1e-12 and lam > 0

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "cache.txt")
        e.save(path)
        again = wpvol.Engine.load(path)
        assert len(again) == len(e)
        assert str(again.coeff(2, 1, [3])) == str(e.coeff(2, 1, [3]))
        try:
            wpvol.Engine.load(path, "half")
        except ValueError as err:
            assert "convention mismatch" in str(err)
        else:
            raise AssertionError("mismatch accepted")

    try:
        e.coeff(0, 2, [0, 0])
    except ValueError:
        pass
    else:
        raise AssertionError("invalid signature accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
