"""
Semi-free and presented DG modules, including the block form over K(t) tensor A.
"""
