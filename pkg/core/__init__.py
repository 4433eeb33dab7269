# Core package: configuration, errors, logging, shared numerics
