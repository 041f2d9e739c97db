#!/usr/bin/env python3
"""
Test Configuration for wzbench

This file contains minimal pytest configuration following coding standards:
- Unit Tests Primary: Test individual functions against exact oracles
- No Mocks: Test real code, no stubs or mocks
- Fail Fast: Tests must fail on any deviation from expected behavior
- Seeded: Every stochastic test fixes its seed
"""

# No fixtures, no mocks, no external dependencies
# Slow tests are marked with @pytest.mark.slow and skipped by default
