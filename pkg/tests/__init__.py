"""
wavepath Tests Package
======================

Test suite for the wavepath package.

Run tests with:
    pytest tests/ -v

Author: wavepath Team
Version: 1.0.0
"""
