"""Generate weight-2 series f_g for selected M24 classes.

For each class the first seven coefficients come from the traces of g on the
M24-modules K_0..K_6 that appear in the Ramond decomposition of the K3
elliptic genus. The truncated series is then fitted inside an explicit basis
of M_2(Gamma_0(N)) and the fit is used to extend it. The fit is overdetermined
(dim <= 4 against 7 coefficients), which serves as a consistency check.

    python3 gen_fg.py ../../data/tables/m24.json ../../data/moonshine/fg_m24.json
"""
import cmath
import json
import sys
from fractions import Fraction as Fr

import sympy

TERMS = 60

# Dimensions: K_n = A_n for 1A, n = 0..6.
A = [-2, 90, 462, 1540, 4554, 11592, 27830]
# Irreducibles (1-based ATLAS indices) with multiplicities.
K = [
    {1: -2},
    {3: 1, 4: 1},
    {5: 1, 6: 1},
    {10: 1, 11: 1},
    {20: 2},
    {25: 2},
    {22: 2, 26: 2},
]

PERM = {"1A": 24, "2A": 8, "2B": 0, "3A": 6, "4A": 0, "4B": 4, "5A": 4,
        "6A": 2, "7A": 3, "8A": 2, "11A": 2, "14A": 1, "15A": 1, "23A": 1}
LEVEL = {"1A": 1, "2A": 2, "2B": 4, "3A": 3, "4A": 8, "4B": 4, "5A": 5,
         "6A": 6, "7A": 7, "8A": 8, "11A": 11, "14A": 14, "15A": 15, "23A": 23}


def value(v):
    if isinstance(v, str):
        return complex(Fr(v))
    n = v["conductor"]
    z = cmath.exp(2j * cmath.pi / n)
    return sum(complex(Fr(c)) * z ** k for k, c in enumerate(v["coeffs"]))


def mul(a, b, n=TERMS):
    out = [Fr(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def eta_free(d, n=TERMS):
    """prod_{k>=1} (1 - q^{dk}) as a power series."""
    s = [Fr(0)] * n
    s[0] = Fr(1)
    k = 1
    while d * k < n:
        t = s[:]
        for i in range(d * k, n):
            t[i] -= s[i - d * k]
        s = t
        k += 1
    return s


def eta_product(exps, shift, n=TERMS):
    """prod eta(d tau)^e; the q^{sum d e /24} prefactor equals q^shift."""
    s = [Fr(0)] * n
    s[shift] = Fr(1)
    for d, e in exps.items():
        base = eta_free(d, n)
        for _ in range(e):
            s = mul(s, base, n)
    return s


def sigma(m):
    return sum(d for d in range(1, m + 1) if m % d == 0)


def e2(d, n=TERMS):
    s = [Fr(0)] * n
    s[0] = Fr(1)
    for m in range(1, n):
        if m % d == 0:
            s[m] = Fr(-24 * sigma(m // d))
    return s


def theta_q(a, b, c, n=TERMS):
    s = [Fr(0)] * n
    r = int((n * 4) ** 0.5) + 2
    for x in range(-r, r + 1):
        for y in range(-r, r + 1):
            v = a * x * x + b * x * y + c * y * y
            if v < n:
                s[v] += 1
    return s


def basis(N):
    out = []
    one = e2(1)
    for d in range(2, N + 1):
        if N % d == 0:
            ed = e2(d)
            out.append([x - d * y for x, y in zip(one, ed)])
    if N == 1:
        out.append([Fr(0)] * TERMS)
    if N == 11:
        out.append(eta_product({1: 2, 11: 2}, 1))
    if N == 14:
        out.append(eta_product({1: 1, 2: 1, 7: 1, 14: 1}, 1))
    if N == 15:
        out.append(eta_product({1: 1, 3: 1, 5: 1, 15: 1}, 1))
    if N == 23:
        e = eta_product({1: 1, 23: 1}, 1)
        out.append(mul(e, theta_q(1, 1, 6)))
        out.append(mul(e, theta_q(2, 1, 3)))
    return out


def eta3_free(n=TERMS):
    s = [Fr(0)] * n
    k = 0
    while k * (k + 1) // 2 < n:
        s[k * (k + 1) // 2] = Fr((-1) ** k * (2 * k + 1))
        k += 1
    return s


def main(table_path, out_path):
    tab = json.load(open(table_path))
    labels = [c["label"] for c in tab["classes"]]
    chars = [c["values"] for c in tab["characters"]]
    records = []
    for cls in PERM:
        j = labels.index(cls)
        e = PERM[cls]
        tr = []
        for kn in K:
            v = sum(m * value(chars[i - 1][j]) for i, m in kn.items())
            assert abs(v.imag) < 1e-9 and abs(v.real - round(v.real)) < 1e-9
            tr.append(round(v.real))
        inner = [Fr(e, 24) * a - t for a, t in zip(A, tr)]
        head = mul(eta3_free(7), inner + [Fr(0)] * (TERMS - 7), 7)
        B = basis(LEVEL[cls])
        M = sympy.Matrix([[b[i] for b in B] for i in range(7)])
        rhs = sympy.Matrix([head[i] for i in range(7)])
        sol, params = M.gauss_jordan_solve(rhs)
        if params.shape[0]:
            sol = sol.subs({p: 0 for p in params})
        coeff = [Fr(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in sol]
        full = [sum(c * b[i] for c, b in zip(coeff, B)) for i in range(TERMS)]
        assert full[:7] == head, cls
        records.append({
            "class": cls,
            "e": e,
            "level": LEVEL[cls],
            "source": "M24 traces on K_0..K_6, fitted in M_2(Gamma_0(N))",
            "coeffs": [str(x) for x in full],
        })
        print(cls, [str(x) for x in full[:8]])
    doc = {"format": "k3moon-fg/1", "records": records}
    with open(out_path, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
