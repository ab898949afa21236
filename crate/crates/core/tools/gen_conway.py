#!/usr/bin/env python3
"""Generate Conway polynomials C(p, m) for all p^m <= 2^16, m >= 2.

Emits a Rust table (coefficients low-to-high, monic leading 1 included).
Run: python3 gen_conway.py > ../src/fqlinalg/conway_table.rs
"""
import itertools
import sys

LIMIT = 1 << 16


def primes_upto(n):
    sieve = [True] * (n + 1)
    sieve[0] = sieve[1] = False
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            for j in range(i * i, n + 1, i):
                sieve[j] = False
    return [i for i, v in enumerate(sieve) if v]


def factor(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def polymulmod(a, b, f, p):
    # a, b: lists low-to-high with len deg(f); f monic len deg+1
    m = len(f) - 1
    res = [0] * (2 * m - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    res[i + j] = (res[i + j] + x * y) % p
    for d in range(len(res) - 1, m - 1, -1):
        c = res[d]
        if c:
            for k in range(m + 1):
                res[d - m + k] = (res[d - m + k] - c * f[k]) % p
    return res[:m]


def polypowmod(base, e, f, p):
    m = len(f) - 1
    result = [1] + [0] * (m - 1)
    while e:
        if e & 1:
            result = polymulmod(result, base, f, p)
        base = polymulmod(base, base, f, p)
        e >>= 1
    return result


def xpow(e, f, p):
    m = len(f) - 1
    x = [0] * m
    if m == 1:
        x = [(-f[0]) % p]
    else:
        x[1] = 1
    return polypowmod(x, e, f, p)


def is_primitive(f, p):
    m = len(f) - 1
    if f[0] == 0:
        return False
    order = p ** m - 1
    one = [1] + [0] * (m - 1)
    if xpow(order, f, p) != one:
        return False
    for r in factor(order):
        if xpow(order // r, f, p) == one:
            return False
    return True


def eval_poly_at(g, elem, f, p):
    # g low-to-high coefficients, elem a residue mod f
    m = len(f) - 1
    acc = [0] * m
    for c in reversed(g):
        acc = polymulmod(acc, elem, f, p)
        acc[0] = (acc[0] + c) % p
    return acc


def conway(p, m, known):
    divisors = [d for d in range(1, m) if m % d == 0]
    for tup in itertools.product(range(p), repeat=m):
        # tup = (a_{m-1}, ..., a_0); coefficient of x^j is (-1)^(m-j) a_j
        coeffs = [0] * (m + 1)
        coeffs[m] = 1
        for idx, a in enumerate(tup):
            j = m - 1 - idx
            sign = -1 if (m - j) % 2 else 1
            coeffs[j] = (sign * a) % p
        if not is_primitive(coeffs, p):
            continue
        ok = True
        for d in divisors:
            g = known[(p, d)]
            e = (p ** m - 1) // (p ** d - 1)
            elem = xpow(e, coeffs, p)
            if any(eval_poly_at(g, elem, coeffs, p)):
                ok = False
                break
        if ok:
            return coeffs
    raise RuntimeError(f"no Conway polynomial for {p}^{m}")


def main():
    known = {}
    rows = []
    for p in primes_upto(LIMIT):
        m = 1
        while p ** m <= LIMIT:
            known[(p, m)] = conway(p, m, known)
            if m >= 2:
                rows.append((p, m, known[(p, m)]))
            m += 1
            if p ** m > LIMIT:
                break
    out = sys.stdout
    out.write("// Generated by tools/gen_conway.py. Do not edit.\n\n")
    out.write("/// `(p, m, coefficients)` with coefficients listed from x^0 up to the monic x^m.\n")
    out.write("pub(crate) static CONWAY: &[(u32, u32, &[u32])] = &[\n")
    for p, m, c in rows:
        out.write(f"    ({p}, {m}, &{c}),\n")
    out.write("];\n")


if __name__ == "__main__":
    main()
