"""Independent oracle values frozen into the C++ tests.

Everything here is computed with mpmath / scipy quadrature, brute force or
residue calculus and never calls the C++ library.
Run:  python3 tests/oracles/compute_oracles.py
"""
import math
import cmath
import mpmath as mp
from scipy import integrate

mp.mp.dps = 30


def chord_arc_endpoints(R, z, s):
    c = (R * R - s * s - z * z) / (2 * s * z)
    a = math.acos(c)
    return a, 2 * math.pi - a


def chord_arc_by_sampling(R, z, s, n=2_000_000):
    # dense membership sampling of theta -> z + s e^{i theta}
    inside = [abs(z + s * cmath.exp(1j * 2 * math.pi * k / n)) < R for k in range(n)]
    first = inside.index(True)
    last = n - 1 - inside[::-1].index(True)
    return 2 * math.pi * first / n, 2 * math.pi * last / n


def phi_trapezoid(a, b, z, n=4096):
    tot = 0
    for k in range(n):
        t = 2 * math.pi * k / n
        zeta = complex(a * math.cos(t), b * math.sin(t))
        dz = complex(-a * math.sin(t), b * math.cos(t))
        tot += dz.conjugate() / (zeta - z)
    return tot * (2 * math.pi / n) / (2j * math.pi)


def L(z):
    return -math.log(abs(z) ** 2)


def f_nu(nu, z):
    if z == 0:
        return 0
    return (z / z.conjugate()) * L(z) ** (-nu)


def u_nu(nu, z):
    if z == 0:
        return 0
    if nu == 1:
        return -z * math.log(L(z))
    return z * L(z) ** (1 - nu) / (nu - 1)


def T_dense(f, z, R=0.5):
    # T f(z) = -(1/pi) \iint f(zeta)/(zeta - z) dA, polar about the origin
    def re(r, t):
        zeta = r * cmath.exp(1j * t)
        return (f(zeta) / (zeta - z) * r).real

    def im(r, t):
        zeta = r * cmath.exp(1j * t)
        return (f(zeta) / (zeta - z) * r).imag
    opts = dict(epsabs=1e-11, epsrel=1e-11)
    vr = integrate.dblquad(re, 0, 2 * math.pi, 0, R, **opts)[0]
    vi = integrate.dblquad(im, 0, 2 * math.pi, 0, R, **opts)[0]
    return -(vr + 1j * vi) / math.pi


def nw_disk(z, r, R=1.0):
    # \int_{D(0,R) \ D(z,r)} (zeta - z)^{-2} dzeta-bar ^ dzeta, ray form about z:
    # 2i \int_0^{2pi} e^{-2 i t} log(max(rho(t), r)/r) dt
    def rho(t):
        b = z * math.cos(t)
        return -b + math.sqrt(b * b + R * R - z * z)

    def g(t, part):
        v = 2j * cmath.exp(-2j * t) * math.log(max(rho(t), r) / r)
        return v.real if part == 0 else v.imag
    # split at the kinks rho(t) = r
    kinks = []
    if r > R - z:
        c = (R * R - r * r - z * z) / (2 * r * z)
        if -1 < c < 1:
            a = math.acos(c)
            kinks = [a, 2 * math.pi - a]
    pts = sorted([0.0] + kinks + [2 * math.pi])
    tot = 0
    for lo, hi in zip(pts[:-1], pts[1:]):
        tot += integrate.quad(g, lo, hi, args=(0,), epsabs=1e-13, limit=400)[0]
        tot += 1j * integrate.quad(g, lo, hi, args=(1,), epsabs=1e-13, limit=400)[0]
    return tot


if __name__ == "__main__":
    print("chord arcs disk(0,1) z=0.8 s=0.5:", chord_arc_endpoints(1, 0.8, 0.5))
    print("  sampled:", chord_arc_by_sampling(1, 0.8, 0.5))
    print("Phi ellipse(2,1) at 0, 4096-node trapezoid:", phi_trapezoid(2, 1, 0))
    print("Phi ellipse(2,1) at 0.5+0.25i:", phi_trapezoid(2, 1, 0.5 + 0.25j))
    print("radial inverse_first nu=2 h=.25:", 1 / (2 - 1) * abs(math.log(.25)) ** (1 - 2))
    print("radial inverse_first nu=3 h=.1:", 1 / 2 * abs(math.log(.1)) ** -2)
    v = mp.quad(lambda s: s ** -2 * abs(mp.log(s)) ** -2, [0.1, 0.2, 0.5])
    print("radial inverse_square nu=2 h=.1 h0=.5:", v, "bound", 10 / math.log(10) ** 2)
    # integration by parts: int_h^h0 s^-2 L^-nu = F(h) - F(h0) + nu int_h^h0 s^-2 L^-nu-1
    bad = 0
    worst = 0
    for nu in (0.5, 1, 2, 3):
        for h in (1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.3, 0.4):
            for h0 in (0.45, 0.5):
                val = mp.quad(lambda x: mp.e ** (-x) * abs(x) ** (-nu), [math.log(h), math.log(h0)])
                bound = abs(math.log(h)) ** (-nu) / h
                worst = max(worst, float(val / bound))
                bad += val > bound
    print("inverse_square grid: violations", bad, "of 64, worst ratio", worst)
    for nu in (1.5, 2, 3):
        for h in (0.25, 0.1, 0.01):
            # s = exp(-1/u) maps (0, h] onto (0, 1/|ln h|] with integrand u^(nu-2)
            q = mp.quad(lambda u: u ** (nu - 2), [0, 1 / abs(math.log(h))])
            closed = abs(math.log(h)) ** (1 - nu) / (nu - 1)
            print(f"  part2 nu={nu} h={h}: quad={float(q):.12g} closed={closed:.12g}")
    print("f_2(0.1) =", f_nu(2, 0.1 + 0j), " 1/(2 ln 10)^2 =", 1 / (2 * math.log(10)) ** 2)
    print("u_2(0.1) =", u_nu(2, 0.1 + 0j))
    print("u_1(0.1) =", u_nu(1, 0.1 + 0j))
    print("2T f_2(0) = -1/ln 4 =", -1 / math.log(4))
    for nu in (1.5, 2, 3):
        print(f"2T f_{nu}(0) = -(ln4)^(1-nu)/(nu-1) =", -(math.log(4)) ** (1 - nu) / (nu - 1))
    # T f_nu closed form vs dense quadrature
    for nu, z in ((2, 0.1 + 0.05j), (1.5, -0.2 + 0.1j)):
        dense = T_dense(lambda w: f_nu(nu, w), z)
        closed = u_nu(nu, z) - z * math.log(4) ** (1 - nu) / (nu - 1)
        print(f"T f_{nu}({z}) dense={dense} closed={closed}")
    print("T 1 at 0.3+0.1i on unit disk (dense):", T_dense(lambda w: 1, 0.3 + 0.1j, R=1.0))
    for z, r in ((0.0, 0.5), (0.5, 0.7), (0.5, 0.2), (0.3, 1.0), (0.9, 0.5)):
        print(f"nw disk(0,1) z={z} r={r}:", nw_disk(z, r))
    # |du_2(2^-k)| = 1/L + 1/L^2 with L = 2 k ln 2
    du2 = [1 / (2 * k * math.log(2)) + 1 / (2 * k * math.log(2)) ** 2 for k in range(4, 21)]
    print("du_2 on k=4..20: first", du2[0], "last", du2[-1], "max/min", max(du2) / min(du2))
    for nu, x in ((2, 0.1), (3, 0.1), (1, 0.1)):
        Lx = L(complex(x, 0))
        d = -math.log(Lx) + 1 / Lx if nu == 1 else Lx ** (1 - nu) / (nu - 1) + Lx ** -nu
        print(f"du_{nu}({x}) =", d)
    # segment modulus of f_nu on [0, h]: |f_nu(h)| = (2 ln(1/h))^-nu, regressed on ln ln(1/h)
    for nu in (2, 3):
        xs = [math.log(k * math.log(2)) for k in range(4, 15)]
        ys = [-nu * math.log(2 * k * math.log(2)) for k in range(4, 15)]
        n = len(xs)
        mx, my = sum(xs) / n, sum(ys) / n
        slope = sum((a - mx) * (b - my) for a, b in zip(xs, ys)) / sum((a - mx) ** 2 for a in xs)
        print(f"segment regression f_{nu}: nu_hat =", -slope)
    # 2T partials for f_1 at 0: -(1/pi) 2pi int_eps^{1/2} ds/(s 2 ln(1/s)) ... modulus ln ln(1/eps) - ln ln 2
    for k in range(2, 7):
        eps = math.exp(-2 ** k)
        print(f"|2T f_1 partial| eps=exp(-{2**k}):", math.log(math.log(1 / eps)) - math.log(math.log(2)))
    # H on ellipse(2,1) with f = 1 equals -Phi(0) = -1/3; the pv integral itself is 2 pi i / 3
    print("H_direct 1 on ellipse(2,1) at 0: -1/3; pv integral 2*pi*i/3 =", 2j * math.pi / 3)
