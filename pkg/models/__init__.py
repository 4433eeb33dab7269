# Models package: Schur maps and operators
