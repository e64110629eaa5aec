"""
Command workflow for the dglift tool.
"""
