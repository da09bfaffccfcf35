"""
Test suite for the dtanma package
"""
