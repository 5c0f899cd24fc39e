"""Numerical toolkit for dilute and charged Bose gas energetics.

Subpackages by topic:

- ``scattering``   zero-energy two-body scattering in 2D/3D, scattering
  lengths, the kinetic fraction ``s`` and the exact energy identity
- ``homogeneous``  closed-form upper/lower bounds for the homogeneous gas,
  Temple's inequality, soft potentials, cell-method combinatorics
- ``meanfield``    Gross-Pitaevskii and Thomas-Fermi minimization in traps
- ``onedim``       Lieb-Liniger energy density, transverse modes, the five
  1D functionals and regime classification for elongated traps
- ``charged``      Bogolubov quadratic bound, Foldy constant and law, the
  two-component variational problem
- ``oracles``      independent brute-force verifiers (spectra, exact
  diagonalization, truncated Fock spaces, finite differences)
- ``cli``          command-line front end and batch sweeps
"""

__version__ = "0.1.0"

SCHEMA_VERSION = "1.0"
