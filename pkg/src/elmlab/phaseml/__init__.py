"""Phase detection from ELM dynamics: datasets, a numpy CNN and fuzzy C-means."""
