"""Meta-package workbench: a self-describing modelling kernel with DSL tooling."""

__version__ = "0.1.0"
