"""Monte Carlo simulator for mechanically detecting circular-polarization
collapse of entangled photons, and for the frame dependence of that readout."""

__version__ = "0.1.0"
