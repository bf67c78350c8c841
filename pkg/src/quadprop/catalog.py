"""Built-in example symbols: heat, free Schrodinger, harmonic oscillator,
and the Kramers-Fokker-Planck quadratic model."""

import numpy as np

from .symplectic import build_symbol

__all__ = ["CATALOG_NAMES", "catalog_symbol"]

CATALOG_NAMES = ("heat", "free_schrodinger", "harmonic_oscillator", "kfp")


def heat():
    """q(x, xi) = xi^2."""
    return build_symbol(1, [[0, 0], [0, 1]], np.zeros((2, 2)))


def free_schrodinger():
    """q(x, xi) = i xi^2."""
    return build_symbol(1, np.zeros((2, 2)), [[0, 0], [0, 1]])


def harmonic_oscillator():
    """q(x, xi) = i(x^2 + xi^2)."""
    return build_symbol(1, np.zeros((2, 2)), np.eye(2))


def kfp(a=1.0):
    """Kramers-Fokker-Planck: q(x, v, xi, eta) = eta^2 + v^2/4 + i(v xi - a x eta),
    coordinates ordered (x, v, xi, eta)."""
    Qr = np.zeros((4, 4))
    Qi = np.zeros((4, 4))
    Qr[3, 3] = 1.0
    Qr[1, 1] = 0.25
    Qi[1, 2] = Qi[2, 1] = 0.5
    Qi[0, 3] = Qi[3, 0] = -a / 2
    return build_symbol(2, Qr, Qi)


def catalog_symbol(name, kfp_a=1.0):
    if name == "heat":
        return heat()
    if name == "free_schrodinger":
        return free_schrodinger()
    if name == "harmonic_oscillator":
        return harmonic_oscillator()
    if name == "kfp":
        return kfp(kfp_a)
    raise KeyError("unknown example %r" % (name,))
