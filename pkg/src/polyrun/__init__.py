"""Polynomial functors, wellfounded trees and behaviour machines, and running one on the other."""
from .cofree import Behavior, bisimilar, counit, duplicate, laxator, map_behavior, moore, step, truncate, unit_behavior
from .effects import Lottery, identity_monad, lottery_monad
from .errors import PolyError
from .free import Leaf, Node, graft, map_tree, ret, tree_equal
from .interaction import moore_pipeline, run_against_answerer, run_on, xi
from .poly import (
    NATURALS, STAR, Y, Finite, PolyMap, Polynomial, coproduct, dirichlet, eval_map, internal_hom, polynomial,
    substitution,
)

__version__ = "0.1.0"
