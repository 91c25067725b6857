"""Extended Lipkin Model lab: exact spectra, mean field, ADAPT-VQE, Trotter
dynamics, trapped-ion circuits and phase classification from dynamics."""

from .hamiltonians import ModelParams

__version__ = "0.1.0"
__all__ = ["ModelParams", "__version__"]
