"""Straight-line drawings of graphs on the flat Klein bottle."""
