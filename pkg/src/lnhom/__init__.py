"""Simulation and analysis toolkit for two-photon interference in
thin-film lithium niobate directional couplers."""

__version__ = "0.1.0"
