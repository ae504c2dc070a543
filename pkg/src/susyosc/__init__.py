"""Singular oscillator, SU(1,1) coherent states, Darboux partners and their
supersymmetric extension with supercoherent states."""

from .darboux import Regime, TransformSpec, make_transform
from .grassmann import Supernumber
from .oscillator import OscillatorParams, make_params, params_from_k

__version__ = "0.1.0"

__all__ = [
    "OscillatorParams",
    "make_params",
    "params_from_k",
    "Regime",
    "TransformSpec",
    "make_transform",
    "Supernumber",
]
