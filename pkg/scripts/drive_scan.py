"""How the drive strength G sets the size of the neglected alpha X^2 part of
the QFI and the curvature of the homodyne peak slope.

At t = tau_1 the numeric QFI is 4 (dalpha/dg)^2 Var[h_alpha] with the full
N = 16 G ((alpha + 2G) P^2 - alpha X^2); the dominant-term form keeps only
P^2. The script prints their ratio, and the log-log slope of I_g(tau_1)
against Delta over g in [0.9, 0.99], for a few G.

    python3 scripts/drive_scan.py
"""
import numpy as np
from scipy.stats import linregress

from sjcm.fock import HilbertConfig, make_state
from sjcm.hamiltonians import auto_cutoff
from sjcm.homodyne import inverted_variance_peaks
from sjcm.model import derive_parameters, params_from_g, tau
from sjcm.qfi import qfi_numeric_g, qfi_tau_n


def main():
    print("G     g     n_max  F_num/F_dominant")
    for G in (0.1, 0.2, 0.3, 0.4):
        for g in (0.9, 0.95):
            p = params_from_g(g, 1.0, 1000.0, G)
            cfg = HilbertConfig(auto_cutoff(p))
            F = qfi_numeric_g(p, tau(derive_parameters(p).Delta), make_state("phi_std", cfg), cfg)
            print(f"{G:<5} {g:<5} {cfg.n_max:<6} {F / qfi_tau_n(p, 1, 1.25):.4f}")
    print("\nG     slope of log I_g(tau_1) vs log Delta, g in [0.9, 0.99]")
    gs = np.linspace(0.9, 0.99, 30)
    for G in (0.1, 0.2, 0.3, 0.4, 0.45):
        ps = [params_from_g(g, 1.0, 1000.0, G) for g in gs]
        D = np.log([derive_parameters(p).Delta for p in ps])
        I = np.log([inverted_variance_peaks(p, 1) for p in ps])
        print(f"{G:<5} {linregress(D, I).slope:.4f}")
    print("\ncutoff needed near criticality")
    for G in (0.1, 0.2, 0.4):
        print(f"G={G}: g=0.99 n_max={auto_cutoff(params_from_g(0.99, 1.0, 1000.0, G))}")


if __name__ == "__main__":
    main()
