"""kleislab: finite models of Kleisli dualities between spaces with relations
and distributive lattices with hemimorphisms."""

__version__ = "0.1.0"
