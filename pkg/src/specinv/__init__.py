"""specinv: a numerical workbench for spectral-invariance constructions.

Contour functional calculus and Moore-Penrose inverses, commutator scales and
semi-ideal norms on matrix models, discretized boundary-groupoid convolution
algebras with length functions and rapid-decay norms, the cusp-flow twisted
convolution algebra, and local symbols on a torus fiber model; each identity
and inequality rendered as a tolerance-controlled check.
"""

__version__ = "0.1.0"
