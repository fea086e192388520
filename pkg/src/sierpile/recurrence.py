"""
Exact linear-recurrence utilities over the rationals: Berlekamp-Massey, and
the coefficient of a simple geometric term in the closed form of a sequence.
"""

from fractions import Fraction

F = Fraction


def berlekamp_massey(seq):
    """
    Shortest c with s[n] = sum_i c[i] s[n-1-i] for all n >= len(c) within `seq`.
    Only trustworthy if len(seq) >= 2 * len(c); see `find_recurrence`.
    """
    s = [F(x) for x in seq]
    C, B = [F(1)], [F(1)]
    L, m, b = 0, 1, F(1)
    for n in range(len(s)):
        d = s[n] + sum(C[i] * s[n - i] for i in range(1, L + 1))
        if d == 0:
            m += 1
            continue
        T = C[:]
        coef = d / b
        C = C + [F(0)] * (len(B) + m - len(C))
        for i, x in enumerate(B):
            C[i + m] -= coef * x
        if 2 * L <= n:
            L, B, b, m = n + 1 - L, T, d, 1
        else:
            m += 1
    return [-c for c in C[1:L + 1]]


def find_recurrence(seq, margin=2):
    """Berlekamp-Massey with a sufficiency check: needs 2L + margin terms."""
    c = berlekamp_massey(seq)
    if len(seq) < 2 * len(c) + margin:
        raise ArithmeticError(f"{len(seq)} terms are not enough to certify a recurrence of order {len(c)}")
    return c


def _poly_eval(p, x):
    acc = F(0)
    for a in reversed(p):
        acc = acc * x + a
    return acc


def geometric_coefficient(seq, root, margin=2):
    """
    For a sequence with a constant-coefficient recurrence in which `root` is a
    simple characteristic root, the exact coefficient c of c * root^n in its
    closed form.  Uses S(x) = N(x) / D(x), D(x) = 1 - sum c_i x^{i+1}, and
    c = N(1/root) / E(1/root) with D(x) = (1 - root x) E(x).
    """
    s = [F(x) for x in seq]
    c = find_recurrence(s, margin)
    L = len(c)
    D = [F(1)] + [-x for x in c]
    N = [sum(D[j] * s[i - j] for j in range(min(i, L) + 1)) for i in range(L)]
    x0 = F(1) / F(root)
    if _poly_eval(D, x0) != 0:
        return F(0)
    # synthetic division of D by (1 - root x)
    E = []
    rem = D[:]
    for k in range(L):
        q = rem[k]
        E.append(q)
        rem[k + 1] += q * F(root)
    if rem[L] != 0:
        raise ArithmeticError("division by (1 - root x) left a remainder")
    e0 = _poly_eval(E, x0)
    if e0 == 0:
        raise ArithmeticError(f"{root} is a repeated characteristic root")
    return _poly_eval(N, x0) / e0
