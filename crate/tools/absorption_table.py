#!/usr/bin/env python3
"""Generate the bundled specific-attenuation table (dB/km) for a sea-level
standard atmosphere: 15 degC, 1013.25 hPa, 7.5 g/m^3 water vapour.

Line-by-line sum over the water-vapour resonances and the 118.75 GHz oxygen
line, plus the non-resonant dry-air continuum. Values are approximate and are
meant for reproducing capacity-versus-frequency trends, not for link planning.

Usage: python3 tools/absorption_table.py > crates/core/data/absorption_std_atmosphere.csv
"""
import math

# f0 [GHz], b1, b2, b3, b4, b5, b6
WATER = [
    (22.235080, 0.1079, 2.144, 26.38, 0.76, 5.087, 1.00),
    (67.803960, 0.0011, 8.732, 28.58, 0.69, 4.930, 0.82),
    (119.995940, 0.0007, 8.353, 29.48, 0.70, 4.780, 0.79),
    (183.310087, 2.273, 0.668, 29.06, 0.77, 5.022, 0.85),
    (321.225630, 0.0470, 6.179, 24.04, 0.67, 4.398, 0.54),
    (325.152888, 1.514, 1.541, 28.23, 0.64, 4.893, 0.74),
    (336.227764, 0.0010, 9.825, 26.93, 0.69, 4.740, 0.61),
    (380.197353, 11.67, 1.048, 28.11, 0.54, 5.063, 0.89),
    (390.134508, 0.0045, 7.347, 21.52, 0.63, 4.810, 0.55),
    (437.346667, 0.0632, 5.048, 18.45, 0.60, 4.230, 0.48),
    (439.150807, 0.9098, 3.595, 20.07, 0.63, 4.483, 0.52),
    (443.018343, 0.1920, 5.048, 15.55, 0.60, 5.083, 0.50),
    (448.001085, 10.41, 1.405, 25.64, 0.66, 5.028, 0.67),
    (470.888999, 0.3254, 3.597, 21.34, 0.66, 4.506, 0.65),
    (474.689092, 1.260, 2.379, 23.20, 0.65, 4.804, 0.64),
    (488.490108, 0.2529, 2.852, 25.86, 0.69, 5.201, 0.72),
    (503.568532, 0.0372, 6.731, 16.12, 0.61, 3.980, 0.43),
    (504.482692, 0.0124, 6.731, 16.12, 0.61, 4.010, 0.45),
    (547.676440, 0.9785, 0.158, 26.00, 0.70, 4.500, 1.00),
    (552.020960, 0.1840, 0.158, 26.00, 0.70, 4.500, 1.00),
    (556.935985, 497.0, 0.159, 30.86, 0.69, 4.552, 1.00),
    (620.700807, 5.015, 2.391, 24.38, 0.71, 4.856, 0.68),
    (645.766085, 0.0067, 8.633, 18.00, 0.60, 4.000, 0.50),
    (658.005280, 0.2732, 7.816, 32.10, 0.69, 4.140, 1.00),
    (752.033113, 243.4, 0.396, 30.86, 0.68, 4.352, 0.84),
    (841.051732, 0.0134, 8.177, 15.90, 0.33, 5.760, 0.45),
    (859.965698, 0.1325, 8.055, 30.60, 0.68, 4.090, 0.84),
    (899.303175, 0.0547, 7.914, 29.85, 0.68, 4.530, 0.90),
    (902.611085, 0.0386, 8.429, 28.65, 0.70, 5.100, 0.95),
    (906.205957, 0.1836, 5.110, 24.08, 0.70, 4.700, 0.53),
    (916.171582, 8.400, 1.441, 26.73, 0.70, 5.150, 0.78),
    (923.112692, 0.0079, 10.293, 29.00, 0.70, 5.000, 0.80),
    (970.315022, 9.009, 1.919, 25.50, 0.64, 4.940, 0.67),
    (987.926764, 134.6, 0.257, 29.85, 0.68, 4.550, 0.90),
    (1780.000000, 17506.0, 0.952, 196.3, 2.00, 24.15, 5.00),
]

T = 288.15
RHO = 7.5
P_TOTAL = 1013.25
E = RHO * T / 216.7
P_DRY = P_TOTAL - E
THETA = 300.0 / T


def line_shape(f, f0, width):
    return (f / f0) * (width / ((f0 - f) ** 2 + width ** 2) + width / ((f0 + f) ** 2 + width ** 2))


def n_imag(f):
    total = 0.0
    for f0, b1, b2, b3, b4, b5, b6 in WATER:
        s = b1 * 1e-1 * E * THETA ** 3.5 * math.exp(b2 * (1.0 - THETA))
        width = b3 * 1e-4 * (P_DRY * THETA ** b4 + b5 * E * THETA ** b6)
        width = 0.535 * width + math.sqrt(0.217 * width ** 2 + 2.1316e-12 * f0 ** 2 / THETA)
        total += s * line_shape(f, f0, width)
    # 118.75 GHz oxygen line
    s = 945.0 * 1e-7 * P_DRY * THETA ** 3
    width = 15.92e-4 * (P_DRY * THETA ** 0.8 + 1.1 * E * THETA)
    width = math.sqrt(width ** 2 + 2.25e-6)
    total += s * line_shape(f, 118.750334, width)
    # dry continuum
    d = 5.6e-4 * (P_DRY + E) * THETA ** 0.8
    total += f * P_DRY * THETA ** 2 * (
        6.14e-5 / (d * (1 + (f / d) ** 2)) + 1.4e-12 * P_DRY * THETA ** 1.5 / (1 + 1.9e-5 * f ** 1.5)
    )
    return total


def main():
    print("frequency_GHz,kappa0_dB_per_km")
    f = 50.0
    while f <= 1000.0 + 1e-9:
        print(f"{f:.1f},{0.1820 * f * n_imag(f):.6g}")
        f += 0.5


if __name__ == "__main__":
    main()
