#!/usr/bin/env python3
# Complete enumeration of semistable curves with given bad primes:
# disc = +-p1^x p2^y, quadratic in a6 -> integer solve.
import math
from sympy import primerange

def cinvs(a1,a2,a3,a4,a6):
    b2 = a1*a1 + 4*a2
    b4 = 2*a4 + a1*a3
    b6 = a3*a3 + 4*a6
    b8 = a1*a1*a6 + 4*a2*a6 - a1*a3*a4 + a2*a3*a3 - a4*a4
    c4 = b2*b2 - 24*b4
    c6 = -b2**3 + 36*b2*b4 - 216*b6
    disc = -b2*b2*b8 - 8*b4**3 - 27*b6*b6 + 9*b2*b4*b6
    return c4,c6,disc

def isqrt_exact(n):
    if n < 0: return None
    r = math.isqrt(n)
    return r if r*r == n else None

def enum(bad, a4range, vmax1, vmax2, bound=10**16):
    found = {}
    targets = []
    p1, p2 = bad
    for x in range(1, vmax1+1):
        for y in range(1, vmax2+1):
            t = p1**x * p2**y
            if t > bound: break
            targets.append(t); targets.append(-t)
    for a1 in (0,1):
        for a2 in (-1,0,1):
            for a3 in (0,1):
                for a4 in range(-a4range, a4range+1):
                    # disc as quadratic in a6: collect coefficients
                    # b6 = a3^2 + 4 a6 ; b8 = (a1^2+4a2) a6 + (-a1 a3 a4 + a2 a3^2 - a4^2)
                    b2 = a1*a1 + 4*a2
                    b4 = 2*a4 + a1*a3
                    # disc = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
                    # = A a6^2 + B a6 + C
                    A = -27*16
                    B = -b2*b2*(b2) - 27*2*4*(a3*a3) + 9*b2*b4*4
                    C = (-b2*b2*(-a1*a3*a4 + a2*a3*a3 - a4*a4)
                         - 8*b4**3 - 27*(a3*a3)**2 + 9*b2*b4*(a3*a3))
                    for t in targets:
                        # A a6^2 + B a6 + C - t = 0
                        D = B*B - 4*A*(C - t)
                        r = isqrt_exact(D)
                        if r is None: continue
                        for sgn in (1,-1):
                            num = -B + sgn*r
                            if num % (2*A) != 0: continue
                            a6 = num // (2*A)
                            c4,c6,d = cinvs(a1,a2,a3,a4,a6)
                            if d != t: continue
                            if c4 % p1 == 0 or c4 % p2 == 0: continue  # multiplicative
                            minimal = True
                            for u in (2,3,5,7):
                                if c4 % u**4 == 0 and c6 % u**6 == 0 and d % u**12 == 0:
                                    minimal = False
                            if not minimal: continue
                            found[(a1,a2,a3,a4,a6)] = d
    return found

def ap_count(a, ell):
    a1,a2,a3,a4,a6 = [x % ell for x in a]
    n = 1
    for x in range(ell):
        for y in range(ell):
            if (y*y + a1*x*y + a3*y - (x**3 + a2*x*x + a4*x + a6)) % ell == 0:
                n += 1
    return ell + 1 - n

def is_good(a, ell):
    _,_,d = cinvs(*a)
    return d % ell != 0

def fingerprint(a, upto=60):
    return tuple((ell, ap_count(a, ell)) for ell in primerange(2, upto) if is_good(a, ell))

c201 = enum((3,67), 400, 24, 10)
c469 = enum((7,67), 400, 20, 10)
print("201-conductor curves:", len(c201))
cls201 = {}
for a,d in c201.items(): cls201.setdefault(fingerprint(a), []).append((a,d))
print("201 classes:", len(cls201))
for fp, cs in sorted(cls201.items(), key=lambda kv: kv[1][0][0]):
    print("  class:", [(c[0], c[1]) for c in cs], " ap:", fp[:7])
cls469 = {}
for a,d in c469.items(): cls469.setdefault(fingerprint(a), []).append((a,d))
print("469 classes:", len(cls469))
for fp, cs in sorted(cls469.items(), key=lambda kv: kv[1][0][0]):
    print("  class:", [(c[0], c[1]) for c in cs], " ap:", fp[:7])
print("== congruence pairing mod 5 ==")
for fp1, cs1 in cls201.items():
    for fp2, cs2 in cls469.items():
        d1 = dict(fp1); d2 = dict(fp2)
        ok = all((d1[ell]-d2[ell]) % 5 == 0 for ell in primerange(2,60) if ell in d1 and ell in d2)
        if ok:
            print("5-congruent pair:", cs1, "<->", cs2)
