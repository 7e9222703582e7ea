"""Extended-precision reference values frozen into the Rust test suites.

Every value is computed by brute-force integration or direct arithmetic at
50 significant digits with mpmath, independently of the Rust code paths.
Run: python3 oracles.py
"""
import mpmath as mp

mp.mp.dps = 50


def upper_tail(n, x):
    # Q(n, x) = int_x^inf t^(n-1) e^-t dt / Gamma(n), integrated piecewise
    # around the mode so the quadrature sees the bulk of the mass.
    n = mp.mpf(n)
    x = mp.mpf(x)
    lg = mp.loggamma(n)
    f = lambda t: mp.exp((n - 1) * mp.log(t) - t - lg) if t > 0 else (mp.mpf(1) if n == 1 else mp.mpf(0))
    pts = sorted(set([x] + [p for p in _mode_points(n) + _edge_points(n, x, +1) if p > x]))
    return mp.quad(f, pts + [mp.inf], maxdegree=12)


def _mode_points(n):
    s = mp.sqrt(n)
    return [n + j * s for j in (-16, -8, -4, -2, -1, 0, 1, 2, 4, 8, 16, 40)]


def _edge_points(n, x, direction):
    # geometric breakpoints away from the endpoint, scaled by the local
    # decay length of the integrand there
    if x == 0:
        return []
    slope = abs(1 - (n - 1) / x)
    scale = 1 / max(slope, 1 / mp.sqrt(n))
    return [x + direction * scale * 2 ** j for j in [k / 2 for k in range(-8, 26)]]


def lower_tail(n, x):
    n = mp.mpf(n)
    x = mp.mpf(x)
    if x == 0:
        return mp.mpf(0)
    lg = mp.loggamma(n)
    f = lambda t: mp.exp((n - 1) * mp.log(t) - t - lg) if t > 0 else (mp.mpf(1) if n == 1 else mp.mpf(0))
    pts = sorted(set([mp.mpf(0), x] + [p for p in _mode_points(n) + _edge_points(n, x, -1) if 0 < p < x]))
    return mp.quad(f, pts, maxdegree=12)


def gamma_grid():
    rows = []
    for n in (1, 2, 5, 10, 100, 1000, 10000):
        for mult in ("0", "0.5", "1", "2", "10"):
            x = mp.mpf(n) * mp.mpf(mult)
            q = upper_tail(n, x)
            p = lower_tail(n, x)
            # sanity against the library closed form
            assert abs(q - mp.gammainc(n, x, mp.inf, regularized=True)) <= mp.mpf(10) ** -11 * max(q, mp.mpf(10) ** -300) or q < mp.mpf(10) ** -300
            rows.append((n, mult, p, q))
    return rows


def geometry(n_rx, l, k, rate):
    c = mp.power(2, mp.mpf(rate) / (2 * n_rx)) - 1
    a = l * k * mp.power(2, -mp.mpf(rate) / n_rx) * (mp.sqrt(2) / c + 1) ** 2
    b = 2 * l * k / c ** 2
    return a, b


def integral_bound(m, n_rx, k, l, rate, p):
    nn = n_rx * l * k
    mm = m * n_rx * k
    a, b = geometry(n_rx, l, k, rate)
    pref = mp.power(p, nn) * mp.gamma(nn + mm) / (mp.gamma(nn) * mp.gamma(mm))
    return pref * mp.quad(lambda x: x ** (nn - 1) / (1 + p * x) ** (mm + nn), [a, b])


def bound1(m, n_rx, k, l, rate, p):
    nn = n_rx * l * k
    mm = m * n_rx * k
    a, b = geometry(n_rx, l, k, rate)
    return mp.gamma(nn + mm) / (mp.gamma(nn + 1) * mp.gamma(mm)) * mp.power(p, nn) / (1 + p * b) ** (mm + nn) * (b ** nn - a ** nn)


def bound2(m, n_rx, k, l, rate, p):
    nn = n_rx * l * k
    mm = m * n_rx * k
    a, b = geometry(n_rx, l, k, rate)
    e = 1 - nn - mm
    return mp.gamma(nn + mm - 1) / (mp.gamma(nn) * mp.gamma(mm)) * a ** (nn - 1) * mp.power(p, nn - 1) * ((1 + p * a) ** e - (1 + p * b) ** e)


def conditional(m, n_rx, k, l, rate, p, h):
    nn = n_rx * l * k
    a, b = geometry(n_rx, l, k, rate)
    # mass of Gamma(nn, 1) between a*p*h and b*p*h via the density integral
    f = lambda t: t ** (nn - 1) * mp.exp(-t) / mp.gamma(nn)
    return mp.quad(f, [a * p * h, b * p * h])


def simpson_integral_term(m, n_rx, k, l, rate, p, panels=10 ** 6):
    # composite Simpson of the integrand alone (no prefactor) at extended precision
    nn = n_rx * l * k
    mm = m * n_rx * k
    a, b = geometry(n_rx, l, k, rate)
    mp.mp.dps = 30
    hstep = (b - a) / panels
    f = lambda x: x ** (nn - 1) / (1 + p * x) ** (mm + nn)
    s = f(a) + f(b)
    for i in range(1, panels):
        s += (4 if i % 2 else 2) * f(a + i * hstep)
    mp.mp.dps = 50
    return s * hstep / 3


def zeta_minus_one(kmax=48):
    return [(kk, mp.zeta(kk) - 1) for kk in range(2, kmax + 1)]


def ser_2x1_bpsk(p):
    # E over ||h||^2 ~ Gamma(2,1) of Q(sqrt(2 p g))
    qf = lambda x: mp.erfc(x / mp.sqrt(2)) / 2
    return mp.quad(lambda g: qf(mp.sqrt(2 * p * g)) * g * mp.exp(-g), [0, 1 / mp.mpf(p), 1, 10, mp.inf])


if __name__ == "__main__":
    print("# zeta(k) - 1")
    for kk, z in zeta_minus_one():
        print(kk, mp.nstr(z, 20))
    print("# gamma grid: n mult P Q")
    for n, mult, p, q in gamma_grid():
        print(n, mult, mp.nstr(p, 20), mp.nstr(q, 20))
    print("# misc")
    print("lngamma(10.5)", mp.nstr(mp.loggamma(mp.mpf("10.5")), 20))
    print("gamma_p(100,100)", mp.nstr(lower_tail(100, 100), 20))
    print("geometry(1,1,1,2)", [mp.nstr(v, 20) for v in geometry(1, 1, 1, 2)])
    print("geometry(1,1,1,1)", [mp.nstr(v, 20) for v in geometry(1, 1, 1, 1)])
    print("conditional(2,1,1,1,1,10,h=1)", mp.nstr(conditional(2, 1, 1, 1, 1, 10, 1), 20))
    print("integral(2,1,1,1,1,100)", mp.nstr(integral_bound(2, 1, 1, 1, 1, 100), 20))
    print("integral(2,2,1,1,2,100)", mp.nstr(integral_bound(2, 2, 1, 1, 2, 100), 20))
    print("integral(1,1,1,1,1,10)", mp.nstr(integral_bound(1, 1, 1, 1, 1, 10), 20))
    print("integral(2,1,1,1,1,1e3)", mp.nstr(integral_bound(2, 1, 1, 1, 1, 1000), 20))
    print("integral(2,1,1,1,1,1e4)", mp.nstr(integral_bound(2, 1, 1, 1, 1, 10000), 20))
    print("bound1(2,1,1,1,1,100)", mp.nstr(bound1(2, 1, 1, 1, 1, 100), 20))
    print("bound2(2,1,1,1,1,100)", mp.nstr(bound2(2, 1, 1, 1, 1, 100), 20))
    for p in (1, 10, 100):
        print("ser_2x1_bpsk", p, mp.nstr(ser_2x1_bpsk(p), 20))
    print("simpson integrand(2,1,1,1,1,100)", mp.nstr(simpson_integral_term(2, 1, 1, 1, 1, 100), 20))
