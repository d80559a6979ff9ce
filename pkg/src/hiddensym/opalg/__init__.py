from .canonical import OperatorExpr, Monomial, anticommutator, commutator, multiply, reduce
from .expr import Expr

__all__ = ["Expr", "Monomial", "OperatorExpr", "anticommutator", "commutator", "multiply", "reduce"]
