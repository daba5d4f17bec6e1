# Topology package
