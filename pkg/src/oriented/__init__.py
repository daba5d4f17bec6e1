# Oriented structures package
