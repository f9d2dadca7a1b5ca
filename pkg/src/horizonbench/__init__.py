"""Horizon and skyline detection toolkit.

Detects the sky/terrain boundary in grayscale images with a patch
classifier plus dynamic-programming path extraction, cleans up binary sky
masks, scores predictions against ground truth, and benchmarks whole
pipelines over synthetic or ingested datasets.
"""

__version__ = "0.1.0"
