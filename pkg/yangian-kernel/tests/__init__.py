"""
Tests package for the Yangian kernel.
"""
