"""Flatland cameras: two-view geometry of rank-2 projections of the plane."""
