#!/usr/bin/env python3
"""Brute-force reference for the time-averaged acoustic energy.

Independent of the C++ code: integrates the delayed Galerkin system with a
method-of-steps RK4 whose midpoint delayed values come from cubic Hermite
interpolation of stored (u_f, du_f/dt), starting from eta_1 = 1 with zero
history, discards the transient and averages E_ac = 1/4 sum(eta^2 + mu^2).

    python3 tools/reference_energy.py [--beta 7] [--tau 0.2] [--modes 10]
"""
import argparse
import math

import numpy as np


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--modes", type=int, default=10)
    ap.add_argument("--beta", type=float, default=7.0)
    ap.add_argument("--tau", type=float, default=0.2)
    ap.add_argument("--xf", type=float, default=0.2)
    ap.add_argument("--dt", type=float, default=0.01)
    ap.add_argument("--transient", type=float, default=200.0)
    ap.add_argument("--span", type=float, default=1000.0)
    args = ap.parse_args()

    n, h = args.modes, args.dt
    j = np.arange(1, n + 1)
    w = j * math.pi
    zeta = 0.1 * j**2 + 0.06 * np.sqrt(j)
    c = np.cos(w * args.xf)
    s = np.sin(w * args.xf)
    lag = int(round(args.tau / h))

    def f(eta, mu, uf_del):
        q = args.beta * (math.sqrt(abs(1.0 + uf_del)) - 1.0)
        return w * mu, -w * eta - zeta * mu - 2.0 * q * s

    def hermite(u0, d0, u1, d1, theta):
        h00 = 2 * theta**3 - 3 * theta**2 + 1
        h10 = theta**3 - 2 * theta**2 + theta
        h01 = -2 * theta**3 + 3 * theta**2
        h11 = theta**3 - theta**2
        return h00 * u0 + h10 * h * d0 + h01 * u1 + h11 * h * d1

    n_skip = int(round(args.transient / h))
    n_avg = int(round(args.span / h)) + 1
    total = n_skip + n_avg - 1
    eta = np.zeros(n)
    mu = np.zeros(n)
    eta[0] = 1.0
    uf = np.zeros(total + lag + 1)
    duf = np.zeros(total + lag + 1)
    uf[lag] = eta @ c
    duf[lag] = (w * mu) @ c
    acc = 0.0
    for k in range(total + 1):
        if k >= n_skip:
            acc += 0.25 * (eta @ eta + mu @ mu)
        if k == total:
            break
        i = k  # index of u_f at t - tau in the padded history
        d0 = uf[i]
        dm = hermite(uf[i], duf[i], uf[i + 1], duf[i + 1], 0.5)
        d1 = uf[i + 1]
        k1 = f(eta, mu, d0)
        k2 = f(eta + 0.5 * h * k1[0], mu + 0.5 * h * k1[1], dm)
        k3 = f(eta + 0.5 * h * k2[0], mu + 0.5 * h * k2[1], dm)
        k4 = f(eta + h * k3[0], mu + h * k3[1], d1)
        eta = eta + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        mu = mu + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        uf[k + lag + 1] = eta @ c
        duf[k + lag + 1] = (w * mu) @ c
    print(f"{acc / n_avg:.10f}")


if __name__ == "__main__":
    main()
