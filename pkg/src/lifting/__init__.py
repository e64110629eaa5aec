"""
The t-adic lifting engine, iterated lifting and uniqueness of lifts.
"""
