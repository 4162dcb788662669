"""
Numerical engines: exponent hypotheses, radial grids and weights, the radial
p-Laplace solver, a priori bounds, and the fixed-point construction.
"""
