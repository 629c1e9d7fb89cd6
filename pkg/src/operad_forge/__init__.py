"""Exact symbolic workbench for the operadic calculus of weighted
differential algebras: planar-tree free operads, the minimal resolution
with its contraction, Koszul-dual decomposition tables, the deformation
L-infinity structure, and the classical cochain complexes, all over Q[L].
"""

__version__ = "0.1.0"
