"""Exact-arithmetic engine for C2-equivariant algebra.

Subpackages:
  abelian        exact integer linear algebra (SNF, homology)
  mackey         C2-Mackey functors as Lewis diagrams
  complexes      chain complexes of Mackey functors, sign-sphere shifts
  tambara        Green/Tambara structure, norms, free involutive algebras
  trace          real Hochschild homology at the chain level
  differentials  involutive cotangent modules and de Rham complexes
  cli            batch front end
"""

__version__ = "0.1.0"
