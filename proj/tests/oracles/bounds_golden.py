"""Independent evaluation of the bound right-hand sides at fixed points.

Writes tests/golden.hpp. Uses mpmath at 40 digits, so the frozen values are
correctly rounded doubles of the exact formulas.
"""
from mpmath import mp, mpf, sqrt, log

mp.dps = 40


def bc(M, N, A, th, a, b, nu, e):
    M, N, A = mpf(M), mpf(N), mpf(A)
    pre = a * b * nu * sqrt(1 + abs(th) * A / (M * N))
    amn = A * M * N
    return pre * (amn ** (mpf(7) / 20 + e) * (M + N) ** mpf(0.25)
                  + amn ** (mpf(3) / 8 + e) * (A * N + A * M) ** (mpf(1) / 8))


def bcr(M, N, A, R, th, a, b, nu, e, x):
    M, N, A, R = mpf(M), mpf(N), mpf(A), mpf(R)
    pre = M ** e * a * b * nu * sqrt(A * M * N) * R ** mpf(0.25) * (1 + abs(th) * A / (M * N)) ** mpf(0.25)
    br = (N ** (-mpf(1) / 8) + R ** (mpf(1) / 8) * N ** (mpf(1) / 8) * M ** (-mpf(1) / 4)
          + M ** (mpf(1) / 10) * R ** (-mpf(3) / 20) * A ** (-x) * N ** (-mpf(3) / 20)
          + N ** (mpf(3) / 20) * A ** (-mpf(3) / 20) * M ** (-mpf(1) / 5)
          + N ** (mpf(3) / 8) * M ** (-mpf(1) / 2))
    return pre * br


def cb(M, N, A, bb, th, beta, nu, e):
    M, N, A, bb = mpf(M), mpf(N), mpf(A), mpf(bb)
    pre = beta ** 2 * nu ** 2 * M ** e * sqrt(1 + abs(th) * A / (bb * M * N))
    return pre * (A * M * sqrt(bb * N) + bb ** mpf(0.75) * A * sqrt(M) * N ** mpf(1.25)
                  + A * M ** mpf(1.2) * N ** mpf(0.1) * bb ** mpf(-0.4)
                  + bb ** mpf(0.2) * A ** mpf(0.4) * M ** mpf(1.2) * N ** mpf(0.7)
                  + sqrt(bb) * A ** mpf(0.7) * M ** mpf(0.6) * N ** mpf(1.3)
                  + sqrt(bb) * A * N ** mpf(1.75))


def disp(M, N, Q, D, alpha, Estar, kappa, C, e, X):
    M, N, Q, D, X = mpf(M), mpf(N), mpf(Q), mpf(D), mpf(X)
    lk = log(X) ** kappa
    inner = (M / Q * Estar + lk * N ** 2 * Q + lk * N ** 2 * M / sqrt(D)
             + D ** C * X ** e * (Q ** (mpf(15) / 8) * N ** (mpf(11) / 4)
                                   + M ** (mpf(3) / 20) * Q ** (mpf(33) / 20) * N ** (mpf(51) / 20)))
    return alpha * sqrt(inner)


def m(x):
    return mpf(x) if not isinstance(x, str) else mpf(x)


BC = [(16, 8, 4, 1, 1, 1, 1, 0), (128, 64, 16, -3, 0.5, 2, 1.5, 0.01), (1000, 30, 7, 5, 1, 1, 1, 0.05),
      (2, 3, 1, 1, 3, 1, 0.25, 0), (1000000, 1000, 100, -7, 1.2, 0.8, 1.1, 0.001)]
BCR = [(16, 8, 4, 1, 1, 1, 1, 1, 0), (128, 64, 16, 4, -3, 0.5, 2, 1.5, 0.01), (1000, 30, 7, 9, 5, 1, 1, 1, 0.05),
       (2, 3, 1, 16, 1, 3, 1, 0.25, 0), (1000000, 1000, 100, 1000, -7, 1.2, 0.8, 1.1, 0.001)]
CB = [(16, 8, 4, 1, 1, 1, 1, 0), (128, 64, 16, 4, -3, 2, 1.5, 0.01), (1000, 30, 7, 8, 5, 1, 1, 0.05),
      (2, 3, 1, 27, 1, 1, 0.25, 0), (1000000, 1000, 100, 72, -7, 0.8, 1.1, 0.001)]
DISP = [(1, 1, 1, 1, 1, 0, 0, 0, 0, 1), (1000, 10, 30, 2, 1.5, 5000, 1, 2, 0.01, 10000),
        (100000, 50, 200, 1.5, 0.7, 1e6, 2, 0.5, 0.001, 5000000), (64, 8, 8, 1, 1, 0, 0, 0, 0, 512),
        (1e8, 100, 1e4, 1.1, 2, 1e9, 3, 1, 0.02, 1e10)]


def lit(v):
    return mp.nstr(v, 20, min_fixed=-mp.inf, max_fixed=mp.inf) if False else mp.nstr(v, 20)


out = ["#pragma once", "", "// Generated by tests/oracles/bounds_golden.py; do not edit.", "",
       "#include <array>", "", "namespace golden {", ""]
out.append("struct BcPoint { double M, N, A; long theta; double alpha, beta, nu, eps, value; };")
out.append("struct BcrPoint { double M, N, A, R; long theta; double alpha, beta, nu, eps, statement, proof; };")
out.append("struct CbPoint { double M, N, A, b; long theta; double beta, nu, eps, value; };")
out.append("struct DispersionPoint { double M, N, Q, D, alpha, Estar, kappa, C, eps, X, value; };")
out.append("")
out.append("inline constexpr std::array<BcPoint, 5> bc = {{")
for p in BC:
    v = bc(*[m(x) if i != 3 else x for i, x in enumerate(p)])
    out.append("    {%s, %s}," % (", ".join(str(x) for x in p), lit(v)))
out.append("}};")
out.append("inline constexpr std::array<BcrPoint, 5> bcr = {{")
for p in BCR:
    args = [m(x) if i != 4 else x for i, x in enumerate(p)]
    s = bcr(*args, mpf(1) / 20)
    q = bcr(*args, mpf(3) / 10)
    out.append("    {%s, %s, %s}," % (", ".join(str(x) for x in p), lit(s), lit(q)))
out.append("}};")
out.append("inline constexpr std::array<CbPoint, 5> cb = {{")
for p in CB:
    v = cb(*[m(x) if i != 4 else x for i, x in enumerate(p)])
    out.append("    {%s, %s}," % (", ".join(str(x) for x in p), lit(v)))
out.append("}};")
out.append("inline constexpr std::array<DispersionPoint, 5> dispersion = {{")
for p in DISP:
    v = disp(*[m(x) for x in p])
    out.append("    {%s, %s}," % (", ".join(repr(float(x)) for x in p), lit(v)))
out.append("}};")
out += ["", "} // namespace golden", ""]

import pathlib
pathlib.Path(__file__).resolve().parent.parent.joinpath("golden.hpp").write_text("\n".join(out))
