# Services package: scalar dynamics, interpolation, matrix calculus, iteration
