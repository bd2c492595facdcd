"""Problem files, reports, the example corpus and the grid oracle."""
from .problem import load_problem, parse_problem, serialize_problem

__all__ = ["load_problem", "parse_problem", "serialize_problem"]
