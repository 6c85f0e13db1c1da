"""pointgas: characteristic functionals of Poisson-type point measures,
superposed boson-gas thermodynamics, and a lattice hole-pairing model.

Submodules
----------
specfun      scalar special functions (polylog, Mittag-Leffler, stable laws)
functionals  characteristic functionals, samplers, ground-state potentials
bec          condensation thermodynamics of superposed grand-canonical gases
quiver       lattice current algebra, quiver energy, hole-pairing search
cli          command-line interface
"""

__version__ = "0.1.0"
