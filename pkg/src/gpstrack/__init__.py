"""Point-to-point trajectory tracking for a planar 3R redundant arm.

A genetic algorithm searches joint-space via points, a coordinate pattern
search refines the result, and closed-form inverse kinematics serves as the
reference solution.
"""

__version__ = "0.1.0"
