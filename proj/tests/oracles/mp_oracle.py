"""High-precision reference values for the C++ test suite.

Independent of the C++ code: a direct 6x6 boundary-matching solve in global
coordinates at 40 significant digits, plus mpmath root finding and numerical
differentiation. Run with `python3 tests/oracles/mp_oracle.py`; the printed
numbers are the ones frozen in tests/*.cpp.
"""
import mpmath as mp

mp.mp.dps = 40


def gamma_delta(xi):
    s = mp.sqrt(1 + mp.mpf(xi) ** 2)
    return mp.sqrt((s + 1) / 2), mp.sqrt((s - 1) / 2)


def amplitudes(xi, ka):
    """Returns (T_L, T_R, R_L, R_R) for the +/- i xi barrier on [-ka, ka], k = 1."""
    k = mp.mpf(1)
    a = mp.mpf(ka)
    q1 = mp.sqrt(k ** 2 - 1j * mp.mpf(xi))
    q2 = mp.sqrt(k ** 2 + 1j * mp.mpf(xi))
    e = mp.exp

    def system(left):
        M = mp.matrix(6, 6)
        rhs = mp.matrix(6, 1)
        x = -a
        # unknowns: cL, A1, B1, A2, B2, cR ; cL multiplies e^{-ikx}, cR e^{ikx}
        M[0, 0] = e(-1j * k * x); M[0, 1] = -e(1j * q1 * x); M[0, 2] = -e(-1j * q1 * x)
        M[1, 0] = -1j * k * e(-1j * k * x); M[1, 1] = -1j * q1 * e(1j * q1 * x); M[1, 2] = 1j * q1 * e(-1j * q1 * x)
        M[2, 1] = 1; M[2, 2] = 1; M[2, 3] = -1; M[2, 4] = -1
        M[3, 1] = 1j * q1; M[3, 2] = -1j * q1; M[3, 3] = -1j * q2; M[3, 4] = 1j * q2
        x = a
        M[4, 3] = e(1j * q2 * x); M[4, 4] = e(-1j * q2 * x); M[4, 5] = -e(1j * k * x)
        M[5, 3] = 1j * q2 * e(1j * q2 * x); M[5, 4] = -1j * q2 * e(-1j * q2 * x); M[5, 5] = -1j * k * e(1j * k * x)
        if left:
            rhs[0] = -e(1j * k * (-a)); rhs[1] = -1j * k * e(1j * k * (-a))
        else:
            rhs[4] = e(-1j * k * a); rhs[5] = -1j * k * e(-1j * k * a)
        return mp.lu_solve(M, rhs)

    sl = system(True)
    sr = system(False)
    return sl[5], sr[0], sl[0], sr[5]


def phase(xi, ka):
    return mp.arg(amplitudes(xi, ka)[0])


def residuals(xi, ka):
    g, d = gamma_delta(xi)
    return (g ** 2 * mp.cos(2 * g * ka) + d ** 2 * mp.cosh(2 * d * ka),
            g ** 3 * mp.sin(2 * g * ka) - d ** 3 * mp.sinh(2 * d * ka))


def fixed_v_time_ratio(xi, ka):
    inv = mp.mpf(xi) * mp.mpf(ka) ** 2
    f = lambda x: phase(inv / x ** 2, x)
    return 1 + mp.diff(f, mp.mpf(ka)) / 2


def fixed_xi_time_ratio(xi, ka):
    return 1 + mp.diff(lambda x: phase(xi, x), mp.mpf(ka)) / 2


if __name__ == "__main__":
    g, d = gamma_delta(1)
    print("dispersion xi=1", mp.nstr(g, 20), mp.nstr(d, 20))
    for xi, ka in [(1, 1), (2, 1), (0.4, 3), (3, 2)]:
        tl, tr, rl, rr = amplitudes(xi, ka)
        print(f"amplitudes xi={xi} ka={ka}")
        for name, v in [("T_L", tl), ("T_R", tr), ("R_L", rl), ("R_R", rr)]:
            print("  ", name, mp.nstr(mp.re(v), 18), mp.nstr(mp.im(v), 18))
        print("   |T|^2", mp.nstr(abs(tl) ** 2, 18))
    root = mp.findroot(lambda x, k: residuals(x, k), (mp.mpf(2), mp.mpf(1)))
    print("first singularity", mp.nstr(root[0], 18), mp.nstr(root[1], 18))
    print("fixed-v tau/tau0 xi=1 ka=20", mp.nstr(fixed_v_time_ratio(1, 20), 15))
    print("fixed-v tau/tau0 xi=1 ka=10", mp.nstr(fixed_v_time_ratio(1, 10), 15))
    print("fixed-xi tau/tau0 xi=2 ka=1", mp.nstr(fixed_xi_time_ratio(2, 1), 15))
    print("fixed-xi tau/tau0 xi=0.5 ka=3", mp.nstr(fixed_xi_time_ratio(0.5, 3), 15))
