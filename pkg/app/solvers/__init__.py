"""Real root isolation, bivariate system solving and approximate fibers."""
