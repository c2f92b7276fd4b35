"""
quarticlines Test Suite

Run all tests: pytest tests/ -v
Run the searches: pytest tests/ -m slow
Run with coverage: pytest tests/ --cov=quarticlines
"""
