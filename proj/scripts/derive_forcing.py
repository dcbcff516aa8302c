#!/usr/bin/env python3
"""Derive the closed-form forcing for the manufactured convergence study.

The solver advances  u_t = div(grad u + u grad psi) + f.  Given the chosen
manufactured pair

    u   = sin(pi t) sin(pi x) sin(pi y)
    psi = sin(pi t) cos(pi x) cos(pi y)

this script computes  f = u_t - lap(u) - grad(u).grad(psi) - u lap(psi)
with sympy, simplifies, and prints both the raw expression and the grouped
form that is hard-coded in the C++ driver.  Run it whenever the manufactured
solution changes.
"""
import sympy as sp

x, y, t = sp.symbols("x y t", real=True)
pi = sp.pi

u = sp.sin(pi * t) * sp.sin(pi * x) * sp.sin(pi * y)
psi = sp.sin(pi * t) * sp.cos(pi * x) * sp.cos(pi * y)

lap = lambda w: sp.diff(w, x, 2) + sp.diff(w, y, 2)
adv = sp.diff(u, x) * sp.diff(psi, x) + sp.diff(u, y) * sp.diff(psi, y)

f = sp.simplify(sp.diff(u, t) - lap(u) - adv - u * lap(psi))

grouped = (
    pi * sp.cos(pi * t) * sp.sin(pi * x) * sp.sin(pi * y)
    + 2 * pi**2 * sp.sin(pi * t) * sp.sin(pi * x) * sp.sin(pi * y)
    + pi**2 * sp.sin(pi * t) ** 2 * sp.sin(2 * pi * x) * sp.sin(2 * pi * y)
)

print("f =", f)
print("grouped matches:", sp.simplify(f - grouped) == 0)
