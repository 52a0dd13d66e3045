"""Reference values for the test suite, computed independently of the
package: plain closed-form arithmetic in 50-digit mpmath, root finding with
mpmath.findroot, and small brute-force matrices built here from scratch.

    python3 scripts/oracles.py

Prints one name=value line per quantity. The tests freeze these values.
"""
import mpmath as mp

mp.mp.dps = 50


def derived(g, w, W, G):
    lam = g * mp.sqrt(W * (w - 2 * G))
    s = lam ** 2 / W
    alpha = (w - 2 * G) * (1 - g ** 2) / 2
    Delta = 16 * alpha * (alpha + 2 * G)
    E_dn = mp.sqrt((w - s) ** 2 - 4 * G ** 2)
    E_up = mp.sqrt((w + s) ** 2 - 4 * G ** 2)
    r_dn = mp.log((w - s - 2 * G) / (w - s + 2 * G)) / 4
    return dict(lam=lam, alpha=alpha, Delta=Delta, E_down=E_dn, E_up=E_up, R=E_up / E_dn, r_down=r_dn)


def peak_g(g, w, G, n=1):
    alpha = (w - 2 * G) * (1 - g ** 2) / 2
    D = 16 * alpha * (alpha + 2 * G)
    return 2048 * n ** 2 * mp.pi ** 2 * (w - 2 * G) ** 2 * g ** 2 * (alpha + G) ** 2 * (alpha + 2 * G) ** 2 / D ** 3


def ladder(n):
    a = mp.zeros(n, n)
    for m in range(n - 1):
        a[m, m + 1] = mp.sqrt(m + 1)
    return a


def main():
    out = {}
    d = derived(mp.mpf("0.8"), 1, 1000, mp.mpf("0.2"))
    out.update({f"ref_{k}": v for k, v in d.items()})
    out["ref_R_frac"] = d["R"] - mp.floor(d["R"])
    out["ref_x_mean_half_period"] = 2 * mp.sqrt(2) * (d["alpha"] + mp.mpf("0.4")) / mp.sqrt(d["Delta"])
    out["ref_peak_g"] = peak_g(mp.mpf("0.8"), 1, mp.mpf("0.2"))
    out["ref_peak_ratio"] = 4 * mp.mpf("0.64") * mp.mpf("0.36")

    # working point with R = 2.5 at omega = 1, G = 0.2
    Rg = lambda g: derived(g, 1, 1000, mp.mpf("0.2"))["R"] - mp.mpf("2.5")
    out["wp_first_g_c"] = mp.findroot(Rg, (mp.mpf("0.7"), mp.mpf("0.8")), solver="bisect")

    # correction order estimate at g = 0.96, omega = 1, G = 0.2, Omega = 1e3
    D96 = derived(mp.mpf("0.96"), 1, 1000, mp.mpf("0.2"))["Delta"]
    out["x_corr_order_096"] = D96 ** mp.mpf("-2.5") / 1000
    out["var_corr_order_096"] = D96 ** -3 / 1000

    # brute-force moments in a 12-level space
    n = 12
    a = ladder(n)
    ad = a.T
    P = 1j * (ad - a) / mp.sqrt(2)
    P2 = P * P
    phi = mp.matrix([1 / mp.sqrt(2), 1j / mp.sqrt(2)] + [0] * (n - 2))
    ev = lambda A, v: (v.H * A * v)[0]
    out["var_P2_phi_std"] = mp.re(ev(P2 * P2, phi) - ev(P2, phi) ** 2)
    vac = mp.matrix([1] + [0] * (n - 1))
    out["four_var_P_vacuum"] = 4 * mp.re(ev(P * P, vac) - ev(P, vac) ** 2)
    out["mean_P_phi_std"] = mp.re(ev(P, phi))

    # squeezed vacuum: <n> = sinh^2 r and <2k|S[r]|0> for r = 0.5
    r = mp.mpf("0.5")
    out["sq_mean_n_r05"] = mp.sinh(r) ** 2
    for k in range(4):
        out[f"sq_amp_2k{k}_r05"] = ((-mp.tanh(r)) ** k * mp.sqrt(mp.factorial(2 * k))
                                    / (2 ** k * mp.factorial(k) * mp.sqrt(mp.cosh(r))))

    # small coupling (lam / Omega = 1e-3): ground energy of the full model to
    # second order is the zero-point energy of the down branch,
    # (sqrt(w'^2 - 4 G^2) - w') / 2 - Omega / 2 with w' = omega - lam^2 / Omega;
    # at G = 0 the state |down, 0> is exact with energy -Omega / 2
    W, lam, G = mp.mpf(1000), mp.mpf(1), mp.mpf("0.2")
    wp = 1 - lam ** 2 / W
    out["pt_ground_energy_G02"] = (mp.sqrt(wp ** 2 - 4 * G ** 2) - wp) / 2 - W / 2
    out["pt_ground_energy_G0"] = -W / 2

    for k, v in out.items():
        print(f"{k}={mp.nstr(v, 17)}")


if __name__ == "__main__":
    main()
