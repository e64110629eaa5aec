"""
Utility functions for the dglift tool.
"""
