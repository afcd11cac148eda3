"""Simulators for shallow two-dimensional random quantum circuits.

The suite contains a column-sweep matrix-product-state sampler with rigorous
truncation-error certificates, a patch-and-stitch sampler driven by
conditional-mutual-information decay, the effective one-dimensional
unitary-and-measurement dynamics these algorithms induce, a brute-force
statevector oracle for validation at small sizes, and the Ising-type spin
models whose order/disorder controls when the approximate algorithms work.
"""

__version__ = "0.1.0"
