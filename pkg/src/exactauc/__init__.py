"""Exact linear AUC maximization."""
