"""Corpus preparation, denoising pairs, summarization dataset construction,
evaluation metrics, extractive baselines, and a best-worst-scaling service."""

__version__ = "0.1.0"
