"""2x2 matrices as row-major 4-tuples (q, r, s, t) = [[q, r], [s, t]]."""

from __future__ import annotations

Mat = tuple[int, int, int, int]

IDENTITY: Mat = (1, 0, 0, 1)
MINUS_IDENTITY: Mat = (-1, 0, 0, -1)
T: Mat = (1, 1, 0, 1)
S: Mat = (0, -1, 1, 0)


def mul(x: Mat, y: Mat) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mul_mod(x: Mat, y: Mat, n: int) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % n, (a * f + b * h) % n, (c * e + d * g) % n, (c * f + d * h) % n)


def det(x: Mat) -> int:
    return x[0] * x[3] - x[1] * x[2]


def inv_sl2(x: Mat) -> Mat:
    """Inverse of a determinant-one matrix."""
    q, r, s, t = x
    return (t, -r, -s, q)


def inv_mod(x: Mat, n: int) -> Mat:
    q, r, s, t = x
    u = pow(det(x) % n, -1, n) if n > 1 else 0
    return (t * u % n, -r * u % n, -s * u % n, q * u % n)


def reduce(x: Mat, n: int) -> Mat:
    return (x[0] % n, x[1] % n, x[2] % n, x[3] % n)


def neg(x: Mat) -> Mat:
    return (-x[0], -x[1], -x[2], -x[3])


def power(x: Mat, k: int) -> Mat:
    out = IDENTITY
    base = x if k >= 0 else inv_sl2(x)
    for _ in range(abs(k)):
        out = mul(out, base)
    return out


def diag(a: int, d: int) -> Mat:
    return (a, 0, 0, d)


def as_nested(x: Mat) -> list[list[int]]:
    return [[x[0], x[1]], [x[2], x[3]]]
