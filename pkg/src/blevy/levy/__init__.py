"""Jump-diffusion motion of a single particle."""
