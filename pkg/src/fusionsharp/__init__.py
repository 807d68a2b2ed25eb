"""Saturated fusion systems on small p-groups, simple Mackey functors S_{Q,V}
over F_p, and exact checks of the vanishing of Res-then-Ind composites across
non-centric intersections."""

__version__ = "0.1.0"
