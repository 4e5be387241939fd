"""
Exact arithmetic, rewriting and verification logic.
"""
