#!/usr/bin/env python3
"""Recompute the frozen reference constants used by the test suite.

Deliberately independent of the tsvkit package: every formula is transcribed
directly here, the network is solved by brute-force nodal analysis with plain
numpy, S-parameters come from an explicit matrix inverse, and the Bessel
values come from the integral representation instead of a series.  Run it and
diff against tests/reference_values.py whenever the model constants change.
"""

import numpy as np

EPS0 = 8.8541878128e-12   # F/m
MU0 = 1.25663706212e-6    # H/m
Q = 1.602176634e-19       # C
KB = 1.380649e-23         # J/K

# reference parameter set (typical 3D-IC process values)
H = 50e-6        # via height, m
R = 2.5e-6       # via radius, m
P = 40e-6        # pitch, m
TOX = 0.5e-6     # liner thickness, m
RHO_CU = 1.68e-8
MU_R = 1.0
EPS_OX = 3.9
EPS_SI = 11.9
N_A = 1.2e21     # m^-3
N_I = 1.45e16    # m^-3
SIGMA_SI = 1.0 / 0.12
TEMP = 300.0
Z0 = 50.0

VT = KB * TEMP / Q


def r_dc():
    return RHO_CU * H / (np.pi * R * R)


def skin_depth(f):
    return np.sqrt(RHO_CU / (np.pi * f * MU_R * MU0))


def r_ac(f):
    return RHO_CU * H / (2 * np.pi * R * skin_depth(f))


def r_total(f):
    return np.hypot(r_dc(), r_ac(f))


def c_ox():
    return 2 * np.pi * EPS_OX * EPS0 * H / np.log((R + TOX) / R)


def w_d():
    return np.sqrt(4 * EPS_SI * EPS0 * VT * np.log(N_A / N_I) / (Q * N_A))


def c_d():
    inner = R + TOX
    return 2 * np.pi * EPS_SI * EPS0 * H / np.log((inner + w_d()) / inner)


def c_si():
    return np.pi * EPS_SI * EPS0 * H / np.arccosh(P / (2 * R))


def g_si():
    return np.pi * SIGMA_SI * H / np.arccosh(P / (2 * R))


def l_tsv():
    hr = H / R
    rh = R / H
    bracket = np.log(hr + np.sqrt(1 + hr * hr)) + rh - np.sqrt(1 + rh * rh)
    return MU0 * MU_R * H / (2 * np.pi) * bracket


def nodal_matrix(f):
    """5-node admittance matrix: 0=port1, 1=port2, 2=port3, 3=mid, 4=stack node."""
    s = 2j * np.pi * f
    y_seg = 1.0 / (r_total(f) / 2 + s * l_tsv() / 2)
    y = np.zeros((5, 5), dtype=complex)

    def stamp(a, b, adm):
        if a >= 0:
            y[a, a] += adm
        if b >= 0:
            y[b, b] += adm
        if a >= 0 and b >= 0:
            y[a, b] -= adm
            y[b, a] -= adm

    stamp(0, 3, y_seg)                      # port1 - mid
    stamp(3, 2, y_seg)                      # mid - port3
    stamp(3, 1, g_si())                     # mid - port2, lateral conductance
    stamp(3, 1, s * c_si())                 # mid - port2, lateral capacitance
    stamp(1, 4, s * c_d())                  # port2 - stack node
    stamp(4, -1, s * c_ox())                # stack node - ground
    return y


def z_matrix(f):
    y = nodal_matrix(f)
    v = np.linalg.solve(y, np.eye(5)[:, [0, 1, 2]])
    return v[[0, 1, 2], :]


def s_matrix(f):
    z = z_matrix(f)
    eye = np.eye(3)
    return (z - Z0 * eye) @ np.linalg.inv(z + Z0 * eye)


def transfer(f, substrate_load):
    y = nodal_matrix(f)
    y[2, 2] += 1.0 / Z0                     # port 3 termination
    if substrate_load is not None:
        y[1, 1] += 1.0 / substrate_load
    rhs = np.zeros(5, dtype=complex)
    rhs[0] = 1.0
    v = np.linalg.solve(y, rhs)
    return v[1] / v[0]


def db(x):
    return 20 * np.log10(np.abs(x))


def bessel_quadrature(n, x, pts=4097):
    t = np.linspace(0.0, np.pi, pts)
    return np.trapezoid(np.cos(n * t - x * np.sin(t)), t) / np.pi


def main():
    print("# element values")
    print(f"R_DC = {r_dc():.15e}")
    print(f"SKIN_DEPTH_1GHZ = {skin_depth(1e9):.15e}")
    print(f"SKIN_DEPTH_100GHZ = {skin_depth(100e9):.15e}")
    print(f"R_AC_1GHZ = {r_ac(1e9):.15e}")
    print(f"R_AC_100GHZ = {r_ac(100e9):.15e}")
    print(f"R_TOTAL_1GHZ = {r_total(1e9):.15e}")
    print(f"C_OX = {c_ox():.15e}")
    print(f"W_D = {w_d():.15e}")
    print(f"C_D = {c_d():.15e}")
    print(f"C_SI = {c_si():.15e}")
    print(f"G_SI = {g_si():.15e}")
    print(f"L_TSV = {l_tsv():.15e}")

    print("# scattering levels, 50 ohm reference")
    print(f"S21_DB_1GHZ = {db(s_matrix(1e9)[1, 0]):.12f}")
    print(f"S21_DB_10GHZ = {db(s_matrix(10e9)[1, 0]):.12f}")
    print(f"S31_DB_10GHZ = {db(s_matrix(10e9)[2, 0]):.12f}")

    print("# substrate transfer, port 3 terminated, port 2 loaded with z0")
    for f, name in ((0.5e9, "HALF_GHZ"), (1e9, "ONE_GHZ"), (2e9, "TWO_GHZ")):
        print(f"TRANSFER_Z0_{name} = {abs(transfer(f, Z0)):.15e}")
    print(f"TRANSFER_OPEN_1GHZ = {abs(transfer(1e9, None)):.15e}")

    print("# spur model: single-point calibration at (0.1 Vpp, 1 GHz, -36.1 dBc)")
    h1 = abs(transfer(1e9, Z0))
    k_sub = 2.0 * 10.0 ** (-36.1 / 20.0) * 1e9 / (h1 * 0.05)
    print(f"K_SUB = {k_sub:.15e}")

    def spur_dbc(h, a_pp, f_agg):
        v_peak = h * a_pp / 2
        beta = k_sub * v_peak / f_agg
        return 20 * np.log10(beta / 2)

    spur700 = spur_dbc(h1, 0.7, 1e9)
    print(f"SPUR_700MV_DBC = {spur700:.12f}")
    h05, h2 = abs(transfer(0.5e9, Z0)), abs(transfer(2e9, Z0))
    s05 = spur_dbc(h05, 0.3, 0.5e9)
    s2 = spur_dbc(h2, 0.3, 2e9)
    print(f"SPUR_300MVPP_HALF_GHZ_DBC = {s05:.12f}")
    print(f"SPUR_300MVPP_TWO_GHZ_DBC = {s2:.12f}")
    print(f"ROLLOFF_DB = {s05 - s2:.12f}")

    print("# Bessel J0/J1 by quadrature")
    for x in (0.05, 0.1, 0.3, 0.5, 1.0, 1.9):
        print(f"J0[{x}] = {bessel_quadrature(0, x):.15e}")
        print(f"J1[{x}] = {bessel_quadrature(1, x):.15e}")


if __name__ == "__main__":
    main()
