#!env python
"""
    I hold the exceptions raised by hyperppr.

    Validation problems with a dataset or an argument derive from
    ``ValueError`` through ``InputError``; problems found while computing
    derive from ``ComputationError``.  The cli maps the two families to
    different exit codes.
"""


class HyperPprError(Exception):
    """ base class for every hyperppr error """


class InputError(HyperPprError, ValueError):
    """ the dataset or an argument is not acceptable """


class ComputationError(HyperPprError, RuntimeError):
    """ a numeric routine could not produce a trustworthy answer """


class IsolatedVertex(InputError):
    """ a vertex has degree zero """

    def __init__(self, vertex: int):
        super().__init__(f'vertex {vertex} has degree 0')
        self.vertex = vertex


class EmptyEdge(InputError):
    """ a hyperedge without members """

    def __init__(self, edge: int):
        super().__init__(f'edge {edge} has no members')
        self.edge = edge


class DuplicateMember(InputError):
    """ a vertex listed twice in one hyperedge """

    def __init__(self, edge: int, vertex: int):
        super().__init__(f'edge {edge} lists vertex {vertex} more than once')
        self.edge = edge
        self.vertex = vertex


class NonPositiveWeight(InputError):
    """ a hyperedge weight that is not a positive finite number """

    def __init__(self, edge: int, weight: float):
        super().__init__(f'edge {edge} has non-positive weight {weight!r}')
        self.edge = edge
        self.weight = weight


class VertexOutOfRange(InputError):
    """ a vertex id outside [0, n) """

    def __init__(self, vertex: int, n: int):
        super().__init__(f'vertex {vertex} is outside [0, {n})')
        self.vertex = vertex
        self.n = n


class DegenerateSubset(InputError):
    """ conductance asked for the empty set or the whole vertex set """


class EmptySubset(InputError):
    """ an operation needs a non-empty subset """


class MalformedLine(InputError):
    """ a text input line could not be parsed """

    def __init__(self, line_no: int, reason: str = 'malformed line'):
        super().__init__(f'line {line_no}: {reason}')
        self.line_no = line_no
        self.reason = reason


class NotAGraph(InputError):
    """ a graph routine got an edge with more than two members """

    def __init__(self, edge: int, size: int):
        super().__init__(f'edge {edge} has {size} members, graph routines need at most 2')
        self.edge = edge
        self.size = size


class NotADistribution(InputError):
    """ a vector expected to be a probability distribution is not one """


class InvalidParameter(InputError):
    """ a parameter outside its documented range """


class TooLarge(InputError):
    """ an exhaustive routine refused an instance above its size guard """

    def __init__(self, n: int, limit: int):
        super().__init__(f'n={n} exceeds the exhaustive limit of {limit}')
        self.n = n
        self.limit = limit


class ExpansionBudgetExceeded(InputError):
    """ an expansion would create more edges than allowed """

    def __init__(self, needed: int, budget: int):
        super().__init__(f'expansion needs {needed} edges, budget is {budget}')
        self.needed = needed
        self.budget = budget


class NonFiniteState(ComputationError, ArithmeticError):
    """ an iterate overflowed or became NaN """

    def __init__(self, iteration: int):
        super().__init__(f'non-finite state at iteration {iteration}; the step size is too large')
        self.iteration = iteration


class NoConvergence(ComputationError):
    """ an iterative method ran out of iterations """

    def __init__(self, iterations: int, gap: float):
        super().__init__(f'no convergence after {iterations} iterations (last gap {gap:.3g})')
        self.iterations = iterations
        self.gap = gap


class SingularSystem(ComputationError, ArithmeticError):
    """ a linear system that must be regular was singular """
