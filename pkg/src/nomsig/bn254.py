"""Arithmetic for the 254-bit Barreto-Naehrig curve (alt_bn128).

Self-contained: base field Fp, the tower Fp2 -> Fp6 -> Fp12, affine point
arithmetic on G1 (over Fp) and on the sextic twist carrying G2 (over Fp2),
and the optimal ate pairing e: G1 x G2 -> GT (a subgroup of Fp12*).

Representation conventions:
  - Fp elements are plain ints in [0, P).
  - Fp2 elements are pairs (a0, a1) meaning a0 + a1*i with i^2 = -1.
  - Fp12 elements are 6-tuples of Fp2 coefficients in w, with w^6 = XI
    where XI = 9 + i is the sextic non-residue.
  - Curve points are affine (x, y) tuples; None is the point at infinity.

G2 points live on the D-type twist y^2 = x^3 + 3/XI over Fp2; the untwist
into E(Fp12) is (x*w^2, y*w^3) and only appears implicitly in the sparse
line evaluations of the Miller loop.
"""

# Curve parameter u and derived constants (36u^4 + 36u^3 + ...).
U = 4965661367192848881
P = 21888242871839275222246405745257275088696311157297823662689037894645226208583
N = 21888242871839275222246405745257275088548364400416034343698204186575808495617
ATE_LOOP = 6 * U + 2

# G2 subgroup cofactor on the twist: #E'(Fp2) = (2*P - N) * N.
G2_COFACTOR = 2 * P - N

XI = (9, 1)


# ---------------------------------------------------------------------------
# Fp2
# ---------------------------------------------------------------------------

F2_ZERO = (0, 0)
F2_ONE = (1, 0)


def f2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def f2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def f2_neg(a):
    return (-a[0] % P, -a[1] % P)


def f2_conj(a):
    return (a[0], -a[1] % P)


def f2_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = a0 * b0
    t1 = a1 * b1
    return ((t0 - t1) % P, ((a0 + a1) * (b0 + b1) - t0 - t1) % P)


def f2_sqr(a):
    a0, a1 = a
    return ((a0 + a1) * (a0 - a1) % P, 2 * a0 * a1 % P)


def f2_muli(a, k):
    """Multiply by an Fp scalar k."""
    return (a[0] * k % P, a[1] * k % P)


def f2_mul_xi(a):
    """Multiply by XI = 9 + i."""
    a0, a1 = a
    return ((9 * a0 - a1) % P, (9 * a1 + a0) % P)


def f2_inv(a):
    a0, a1 = a
    d = pow(a0 * a0 + a1 * a1, P - 2, P)
    return (a0 * d % P, -a1 * d % P)


def f2_pow(a, e):
    r = F2_ONE
    while e:
        if e & 1:
            r = f2_mul(r, a)
        a = f2_sqr(a)
        e >>= 1
    return r


def _sqrt_fp(a):
    # P = 3 mod 4
    r = pow(a, (P + 1) // 4, P)
    return r if r * r % P == a else None


def f2_sqrt(a):
    """Square root in Fp2 via the complex method, or None if a is not a QR."""
    if a == F2_ZERO:
        return F2_ZERO
    a0, a1 = a
    if a1 == 0:
        r = _sqrt_fp(a0)
        if r is not None:
            return (r, 0)
        r = _sqrt_fp(-a0 % P)
        return None if r is None else (0, r)
    s = _sqrt_fp((a0 * a0 + a1 * a1) % P)
    if s is None:
        return None
    inv2 = (P + 1) // 2
    for sign in (s, -s % P):
        d = (a0 + sign) * inv2 % P
        x0 = _sqrt_fp(d)
        if x0 is None or x0 == 0:
            continue
        x1 = a1 * pow(2 * x0, P - 2, P) % P
        if f2_sqr((x0, x1)) == a:
            return (x0, x1)
    return None


# ---------------------------------------------------------------------------
# Fp6 = Fp2[v] / (v^3 - XI), used only for Fp12 inversion
# ---------------------------------------------------------------------------


def _f6_mul(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    t00 = f2_mul(a0, b0)
    t11 = f2_mul(a1, b1)
    t22 = f2_mul(a2, b2)
    c0 = f2_add(t00, f2_mul_xi(f2_sub(f2_mul(f2_add(a1, a2), f2_add(b1, b2)), f2_add(t11, t22))))
    c1 = f2_add(f2_sub(f2_mul(f2_add(a0, a1), f2_add(b0, b1)), f2_add(t00, t11)), f2_mul_xi(t22))
    c2 = f2_add(f2_sub(f2_mul(f2_add(a0, a2), f2_add(b0, b2)), f2_add(t00, t22)), t11)
    return (c0, c1, c2)


def _f6_inv(a):
    a0, a1, a2 = a
    c0 = f2_sub(f2_sqr(a0), f2_mul_xi(f2_mul(a1, a2)))
    c1 = f2_sub(f2_mul_xi(f2_sqr(a2)), f2_mul(a0, a1))
    c2 = f2_sub(f2_sqr(a1), f2_mul(a0, a2))
    t = f2_add(f2_mul(a0, c0), f2_mul_xi(f2_add(f2_mul(a2, c1), f2_mul(a1, c2))))
    ti = f2_inv(t)
    return (f2_mul(c0, ti), f2_mul(c1, ti), f2_mul(c2, ti))


def _f6_mul_v(a):
    return (f2_mul_xi(a[2]), a[0], a[1])


def _f6_neg(a):
    return (f2_neg(a[0]), f2_neg(a[1]), f2_neg(a[2]))


def _f6_sub(a, b):
    return (f2_sub(a[0], b[0]), f2_sub(a[1], b[1]), f2_sub(a[2], b[2]))


# ---------------------------------------------------------------------------
# Fp12 = Fp2[w] / (w^6 - XI)
# ---------------------------------------------------------------------------

F12_ONE = (F2_ONE, F2_ZERO, F2_ZERO, F2_ZERO, F2_ZERO, F2_ZERO)


def f12_mul(a, b):
    c = [(0, 0)] * 11
    for i in range(6):
        ai = a[i]
        if ai == F2_ZERO:
            continue
        for j in range(6):
            if b[j] == F2_ZERO:
                continue
            c[i + j] = f2_add(c[i + j], f2_mul(ai, b[j]))
    for k in range(10, 5, -1):
        if c[k] != F2_ZERO:
            c[k - 6] = f2_add(c[k - 6], f2_mul_xi(c[k]))
    return tuple(c[:6])


def f12_sqr(a):
    return f12_mul(a, a)


def f12_conj(a):
    """The p^6-power Frobenius: negates the odd-w coefficients."""
    return (a[0], f2_neg(a[1]), a[2], f2_neg(a[3]), a[4], f2_neg(a[5]))


def f12_inv(a):
    # Split against the subfield Fp6 = Fp2[w^2]: a = a0 + a1*w.
    a0 = (a[0], a[2], a[4])
    a1 = (a[1], a[3], a[5])
    t = _f6_inv(_f6_sub(_f6_mul(a0, a0), _f6_mul_v(_f6_mul(a1, a1))))
    r0 = _f6_mul(a0, t)
    r1 = _f6_neg(_f6_mul(a1, t))
    return (r0[0], r1[0], r0[1], r1[1], r0[2], r1[2])


_FROB_GAMMA = tuple(f2_pow(XI, i * (P - 1) // 6) for i in range(6))


def f12_frob(a):
    """The p-power Frobenius."""
    return tuple(f2_mul(f2_conj(a[i]), _FROB_GAMMA[i]) for i in range(6))


def f12_pow(a, e):
    if e < 0:
        return f12_pow(f12_inv(a), -e)
    r = F12_ONE
    while e:
        if e & 1:
            r = f12_mul(r, a)
        a = f12_mul(a, a)
        e >>= 1
    return r


# ---------------------------------------------------------------------------
# G1: y^2 = x^3 + 3 over Fp
# ---------------------------------------------------------------------------

G1_B = 3
G1_GEN = (1, 2)


def g1_is_on_curve(pt):
    if pt is None:
        return True
    x, y = pt
    return (y * y - x * x * x - G1_B) % P == 0


def g1_neg(pt):
    return None if pt is None else (pt[0], -pt[1] % P)


def g1_add(p, q):
    if p is None:
        return q
    if q is None:
        return p
    x1, y1 = p
    x2, y2 = q
    if x1 == x2:
        if (y1 + y2) % P == 0:
            return None
        m = 3 * x1 * x1 * pow(2 * y1, P - 2, P) % P
    else:
        m = (y2 - y1) * pow(x2 - x1, P - 2, P) % P
    x3 = (m * m - x1 - x2) % P
    return (x3, (m * (x1 - x3) - y1) % P)


def _jac_double_fp(q):
    x, y, z = q
    a = x * x % P
    b = y * y % P
    c = b * b % P
    d = 2 * ((x + b) * (x + b) - a - c) % P
    e = 3 * a % P
    x3 = (e * e - 2 * d) % P
    return (x3, (e * (d - x3) - 8 * c) % P, 2 * y * z % P)


def _jac_madd_fp(q, xa, ya):
    """Mixed Jacobian + affine addition; the points must be distinct."""
    x, y, z = q
    z2 = z * z % P
    u2 = xa * z2 % P
    s2 = ya * z * z2 % P
    h = (u2 - x) % P
    i = 4 * h * h % P
    j = h * i % P
    r = 2 * (s2 - y) % P
    v = x * i % P
    x3 = (r * r - j - 2 * v) % P
    return (x3, (r * (v - x3) - 2 * y * j) % P, 2 * z * h % P)


def g1_mul(pt, k):
    """Scalar multiplication via Jacobian doubling with mixed affine additions."""
    k %= N
    if pt is None or k == 0:
        return None
    xa, ya = pt
    acc = None
    for i in range(k.bit_length() - 1, -1, -1):
        if acc is not None:
            acc = _jac_double_fp(acc)
        if (k >> i) & 1:
            if acc is None:
                acc = (xa, ya, 1)
            else:
                z2 = acc[2] * acc[2] % P
                if xa * z2 % P == acc[0]:  # same x: double or cancel
                    if ya * acc[2] * z2 % P == acc[1]:
                        acc = _jac_double_fp(acc)
                    else:
                        acc = None
                else:
                    acc = _jac_madd_fp(acc, xa, ya)
        if acc is not None and acc[2] == 0:
            acc = None
    if acc is None:
        return None
    zi = pow(acc[2], P - 2, P)
    zi2 = zi * zi % P
    return (acc[0] * zi2 % P, acc[1] * zi2 * zi % P)


# ---------------------------------------------------------------------------
# G2 on the twist: y^2 = x^3 + 3/XI over Fp2
# ---------------------------------------------------------------------------

TW_B = f2_mul(f2_inv(XI), (3, 0))
G2_GEN = (
    (
        10857046999023057135944570762232829481370756359578518086990519993285655852781,
        11559732032986387107991004021392285783925812861821192530917403151452391805634,
    ),
    (
        8495653923123431417604973247489272438418190587263600148770280649306958101930,
        4082367875863433681332203403145435568316851327593401208105741076214120093531,
    ),
)


def g2_is_on_curve(pt):
    if pt is None:
        return True
    x, y = pt
    return f2_sqr(y) == f2_add(f2_mul(f2_sqr(x), x), TW_B)


def g2_neg(pt):
    return None if pt is None else (pt[0], f2_neg(pt[1]))


def g2_add(p, q):
    if p is None:
        return q
    if q is None:
        return p
    x1, y1 = p
    x2, y2 = q
    if x1 == x2:
        if f2_add(y1, y2) == F2_ZERO:
            return None
        m = f2_mul(f2_muli(f2_sqr(x1), 3), f2_inv(f2_muli(y1, 2)))
    else:
        m = f2_mul(f2_sub(y2, y1), f2_inv(f2_sub(x2, x1)))
    x3 = f2_sub(f2_sub(f2_sqr(m), x1), x2)
    return (x3, f2_sub(f2_mul(m, f2_sub(x1, x3)), y1))


def _jac_double_f2(q):
    x, y, z = q
    a = f2_sqr(x)
    b = f2_sqr(y)
    c = f2_sqr(b)
    d = f2_muli(f2_sub(f2_sub(f2_sqr(f2_add(x, b)), a), c), 2)
    e = f2_muli(a, 3)
    x3 = f2_sub(f2_sqr(e), f2_muli(d, 2))
    return (x3, f2_sub(f2_mul(e, f2_sub(d, x3)), f2_muli(c, 8)), f2_muli(f2_mul(y, z), 2))


def _jac_madd_f2(q, xa, ya):
    x, y, z = q
    z2 = f2_sqr(z)
    u2 = f2_mul(xa, z2)
    s2 = f2_mul(f2_mul(ya, z), z2)
    h = f2_sub(u2, x)
    i = f2_muli(f2_sqr(h), 4)
    j = f2_mul(h, i)
    r = f2_muli(f2_sub(s2, y), 2)
    v = f2_mul(x, i)
    x3 = f2_sub(f2_sub(f2_sqr(r), j), f2_muli(v, 2))
    return (
        x3,
        f2_sub(f2_mul(r, f2_sub(v, x3)), f2_muli(f2_mul(y, j), 2)),
        f2_muli(f2_mul(z, h), 2),
    )


def g2_mul(pt, k):
    # No reduction mod N here: the subgroup check relies on multiplying by N.
    if k < 0:
        return g2_mul(g2_neg(pt), -k)
    if pt is None or k == 0:
        return None
    xa, ya = pt
    acc = None
    for i in range(k.bit_length() - 1, -1, -1):
        if acc is not None:
            acc = _jac_double_f2(acc)
        if (k >> i) & 1:
            if acc is None:
                acc = (xa, ya, F2_ONE)
            else:
                z2 = f2_sqr(acc[2])
                if f2_mul(xa, z2) == acc[0]:
                    if f2_mul(f2_mul(ya, acc[2]), z2) == acc[1]:
                        acc = _jac_double_f2(acc)
                    else:
                        acc = None
                else:
                    acc = _jac_madd_f2(acc, xa, ya)
        if acc is not None and acc[2] == F2_ZERO:
            acc = None
    if acc is None:
        return None
    zi = f2_inv(acc[2])
    zi2 = f2_sqr(zi)
    return (f2_mul(acc[0], zi2), f2_mul(f2_mul(acc[1], zi2), zi))


def g2_in_subgroup(pt):
    return g2_is_on_curve(pt) and g2_mul(pt, N) is None


# Fixed-base tables: affine 2^i multiples of the generators.
_G1_POWS = [G1_GEN]
for _ in range(N.bit_length() - 1):
    _G1_POWS.append(g1_add(_G1_POWS[-1], _G1_POWS[-1]))
_G2_POWS = [G2_GEN]
for _ in range(N.bit_length() - 1):
    _G2_POWS.append(g2_add(_G2_POWS[-1], _G2_POWS[-1]))


def g1_mul_base(k):
    """k * G1_GEN using the precomputed doubling table."""
    k %= N
    acc = None
    i = 0
    while k:
        if k & 1:
            xa, ya = _G1_POWS[i]
            if acc is None:
                acc = (xa, ya, 1)
            elif xa * (acc[2] * acc[2]) % P == acc[0]:  # mod-N coincidence
                z2 = acc[2] * acc[2] % P
                acc = _jac_double_fp(acc) if ya * acc[2] * z2 % P == acc[1] else None
            else:
                acc = _jac_madd_fp(acc, xa, ya)
        k >>= 1
        i += 1
    if acc is None or acc[2] == 0:
        return None
    zi = pow(acc[2], P - 2, P)
    zi2 = zi * zi % P
    return (acc[0] * zi2 % P, acc[1] * zi2 * zi % P)


def g2_mul_base(k):
    """k * G2_GEN using the precomputed doubling table."""
    k %= N
    acc = None
    i = 0
    while k:
        if k & 1:
            xa, ya = _G2_POWS[i]
            if acc is None:
                acc = (xa, ya, F2_ONE)
            elif f2_mul(xa, f2_sqr(acc[2])) == acc[0]:  # mod-N coincidence
                z2 = f2_sqr(acc[2])
                if f2_mul(f2_mul(ya, acc[2]), z2) == acc[1]:
                    acc = _jac_double_f2(acc)
                else:
                    acc = None
            else:
                acc = _jac_madd_f2(acc, xa, ya)
        k >>= 1
        i += 1
    if acc is None or acc[2] == F2_ZERO:
        return None
    zi = f2_inv(acc[2])
    zi2 = f2_sqr(zi)
    return (f2_mul(acc[0], zi2), f2_mul(f2_mul(acc[1], zi2), zi))


# ---------------------------------------------------------------------------
# Optimal ate pairing
# ---------------------------------------------------------------------------

# Frobenius on the twist: psi(x, y) = (conj(x)*XI^((p-1)/3), conj(y)*XI^((p-1)/2)).
_TW_FROB_X = f2_pow(XI, (P - 1) // 3)
_TW_FROB_Y = f2_pow(XI, (P - 1) // 2)


def _tw_frob(pt):
    return (f2_mul(f2_conj(pt[0]), _TW_FROB_X), f2_mul(f2_conj(pt[1]), _TW_FROB_Y))


def _line(t, q, xp, yp):
    """Sparse Fp12 value of the line through untwisted t, q at the G1 point."""
    x1, y1 = t
    x2, y2 = q
    if x1 == x2 and f2_add(y1, y2) == F2_ZERO:
        # Vertical: xp - x1*w^2
        return ((xp % P, 0), F2_ZERO, f2_neg(x1), F2_ZERO, F2_ZERO, F2_ZERO)
    if x1 == x2:
        m = f2_mul(f2_muli(f2_sqr(x1), 3), f2_inv(f2_muli(y1, 2)))
    else:
        m = f2_mul(f2_sub(y2, y1), f2_inv(f2_sub(x2, x1)))
    # m*xp*w - yp + (y1 - m*x1)*w^3
    return (
        (-yp % P, 0),
        f2_muli(m, xp),
        F2_ZERO,
        f2_sub(y1, f2_mul(m, x1)),
        F2_ZERO,
        F2_ZERO,
    )


def miller_loop(q, pt):
    """f_{6u+2, Q}(P) with the two Frobenius correction lines."""
    if q is None or pt is None:
        return F12_ONE
    xp, yp = pt
    f = F12_ONE
    t = q
    for i in range(ATE_LOOP.bit_length() - 2, -1, -1):
        f = f12_mul(f12_sqr(f), _line(t, t, xp, yp))
        t = g2_add(t, t)
        if (ATE_LOOP >> i) & 1:
            f = f12_mul(f, _line(t, q, xp, yp))
            t = g2_add(t, q)
    q1 = _tw_frob(q)
    f = f12_mul(f, _line(t, q1, xp, yp))
    t = g2_add(t, q1)
    nq2 = g2_neg(_tw_frob(q1))
    f = f12_mul(f, _line(t, nq2, xp, yp))
    return f


_HARD_EXP = (P**4 - P**2 + 1) // N


def final_exp(f):
    f = f12_mul(f12_conj(f), f12_inv(f))  # ^(p^6 - 1)
    f = f12_mul(f12_frob(f12_frob(f)), f)  # ^(p^2 + 1)
    return f12_pow(f, _HARD_EXP)  # ^((p^4 - p^2 + 1) / n)


def pairing(p1, q2):
    """e(p1, q2) for p1 in G1 (affine/None) and q2 on the twist (affine/None)."""
    return final_exp(miller_loop(q2, p1))


def multi_miller(pairs):
    """Product of Miller loops with a single shared final exponentiation."""
    f = F12_ONE
    for p1, q2 in pairs:
        f = f12_mul(f, miller_loop(q2, p1))
    return final_exp(f)
