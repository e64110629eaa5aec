"""
Exact arithmetic over truncated power series rings and Z/p^N, and linear algebra over them.
"""
