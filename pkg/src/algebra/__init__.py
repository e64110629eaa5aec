"""
DG algebras: custom, Koszul, and the block algebras K(t) tensor A.
"""
