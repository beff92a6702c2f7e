"""Photorefractive-effect loophole analysis for GMCS CVQKD.

Submodules: :mod:`pe_model` (crystal response), :mod:`mzm` (modulator
transfer and PE index), :mod:`channel` (quadrature generation),
:mod:`estimation`, :mod:`keyrate`, :mod:`scenario` (K / K_p / K_e
comparison), :mod:`monitor` (variance-monitoring countermeasure) and
:mod:`cli`.
"""

__version__ = "0.1.0"
