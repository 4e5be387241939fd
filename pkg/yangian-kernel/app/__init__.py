"""
Yangian Kernel Application Package.
"""

__version__ = "0.1.0"
