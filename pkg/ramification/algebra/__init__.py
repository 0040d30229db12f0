"""
Exact arithmetic in the base field K, its residue field and Kummer extensions L|K.
"""
