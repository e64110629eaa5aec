"""
Graded homomorphisms, the Hom complex, Ext and semi-free resolutions.
"""
