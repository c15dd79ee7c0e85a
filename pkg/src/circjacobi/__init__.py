"""Small-tau expansion of the Fourier transform of the bulk-scaled circular Jacobi beta ensemble density."""

__version__ = "0.1.0"
