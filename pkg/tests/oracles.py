"""Independent reference computations used to freeze expected values.

Nothing here imports the package under test.
"""

import math

import numpy as np

SW_SEED = 20210601


def sw_dataset(n):
    """Fixed Shapiro-Wilk test vector of length n.

    Only uniform doubles from PCG64 are used (a stable numpy stream); shapes
    come from closed-form transforms, so the data do not depend on numpy's
    distribution samplers.
    """
    u = np.random.default_rng(SW_SEED + n).random((2, n))
    u1 = 1.0 - u[0]  # (0, 1]
    z = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u[1])
    shapes = {
        10: z,
        50: -np.log(u1),  # exponential
        100: z,
        500: np.exp(0.25 * z),  # mildly skewed lognormal
        2000: z + 0.15 * z ** 2,  # skewed normal mixture
    }
    return shapes[n] * 17.0 + 140.0


def poisson_quantile_by_summation(p, lam):
    k, pmf = 0, math.exp(-lam)
    cdf = pmf
    while cdf < p:
        k += 1
        pmf = math.exp(k * math.log(lam) - lam - math.lgamma(k + 1))
        cdf += pmf
    return k


def sort_interpolate(values, p):
    xs = sorted(values)
    h = (len(xs) - 1) * p + 1  # 1-based position
    lo = int(math.floor(h))
    if lo >= len(xs):
        return xs[-1]
    return xs[lo - 1] + (h - lo) * (xs[lo] - xs[lo - 1])


def spreadsheet_annual_load(
    length, width, stories, story_height, wwr,
    wall_rsi, floor_rsi, roof_rsi, u_glz, shgc,
    equip, light, people, inf, vent_area, vent_person, op_frac, inf_sched,
    t_heat, t_cool, climate_rows, people_w=120.0, b_floor=0.5, rho_c=1200.0,
):
    """Annual heating+cooling per floor area, written out cell by cell.

    Uses the closed forms Q_h = L^2/(L+G) and Q_c = G^2/(G+L_c), which are
    algebraically equal to the utilization-factor balance.
    """
    gross = length * width * stories
    height = stories * story_height
    facade = {"N": length * height, "S": length * height, "E": width * height, "W": width * height}
    glz = {o: facade[o] * wwr[o] for o in "NSEW"}
    opq = {o: facade[o] - glz[o] for o in "NSEW"}
    h_tr = (sum(opq.values()) / wall_rsi + length * width / roof_rsi
            + b_floor * length * width / floor_rsi + u_glz * sum(glz.values()))
    q = inf * gross * inf_sched + vent_area * gross + vent_person * people * gross
    h = h_tr + rho_c * q
    total = 0.0
    for t_out, hours, irr in climate_rows:
        g = ((equip + light + people_w * people) * gross * op_frac * hours / 1000.0
             + shgc * sum(glz[o] * irr[o] for o in "NSEW") * hours / 1000.0)
        lh = max(0.0, h * (t_heat - t_out) * hours / 1000.0)
        lc = max(0.0, h * (t_cool - t_out) * hours / 1000.0)
        qh = lh * lh / (lh + g) if lh + g > 0 else 0.0
        qc = g * g / (g + lc) if g + lc > 0 else 0.0
        total += qh + qc
    return total / gross
