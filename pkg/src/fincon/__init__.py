"""Finite controllability of truncated bilinear quantum control systems."""
