# Greedoid Lattice Toolkit
