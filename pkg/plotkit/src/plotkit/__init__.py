"""Offline figure generation for covertnet experiment outputs.

Consumes the records CSV and the plain-text graph description; never
imports the planning package.
"""

from .data import GraphDescription, PlotkitError, read_graph, read_records
from .recipes import KINDS, FigureRecipe, load_recipe, recipe_from_dict
from .render import render

__version__ = "0.1.0"
