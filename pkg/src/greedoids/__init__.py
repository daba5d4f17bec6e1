# Greedoids package
