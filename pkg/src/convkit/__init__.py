"""Exact symbolic engine for convolution homotopy Lie algebras.

Everything is computed over the rationals with explicit Koszul signs:
graded spaces and maps (convkit.linalg), non-symmetric operads and
cooperads given by structure constants (convkit.operads), algebras and
conilpotent coalgebras with bar/cobar constructions (convkit.algebras),
shifted-homotopy-Lie bracket families with Maurer-Cartan machinery
(convkit.slinf), and the convolution algebra hom(C, A) with its
morphism actions (convkit.convolution).
"""

__version__ = "0.1.0"
