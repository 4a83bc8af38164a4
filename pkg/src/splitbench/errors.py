"""Exception hierarchy shared by all modules."""


class SplitbenchError(Exception):
    pass


class RangeError(SplitbenchError):
    """An element index is out of range."""


class CycleError(SplitbenchError):
    """Transitive closure of the given pairs violates antisymmetry."""


class SizeError(SplitbenchError):
    """A construction or search would exceed a configured cap."""


class NotALattice(SplitbenchError):
    """Some pair of elements lacks a unique meet or join."""


class NotDistributive(SplitbenchError):
    pass


class NotACover(SplitbenchError):
    pass


class MissingResidual(SplitbenchError):
    """A required (dual) relative pseudocomplement does not exist."""


class AxiomError(SplitbenchError):
    """A named algebra law fails; the message carries a witness."""


class BadParameter(SplitbenchError):
    pass


class NotSI(SplitbenchError):
    """The algebra is not subdirectly irreducible."""


class NotACongruenceFilter(SplitbenchError):
    pass


class SignatureMismatch(SplitbenchError):
    pass


class NotAnUpSet(SplitbenchError):
    pass


class NotRegular(SplitbenchError):
    pass


class PreconditionError(SplitbenchError):
    pass


class FormatError(SplitbenchError):
    """A file or stream does not parse as a known JSON format."""
