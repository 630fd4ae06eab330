"""Abstract bases and the particle record shared by the simulators."""
