"""Exception hierarchy shared by every ddsl module."""


class DSLError(Exception):
    """Base class for all library errors."""


class ModelError(DSLError):
    """A simplicial model (or update model) failed validation."""


class EmptyComplex(ModelError):
    pass


class ChromaViolation(ModelError):
    pass


class ForeignProposition(ModelError):
    pass


class DanglingVertexRef(ModelError):
    pass


class UnknownFace(DSLError):
    pass


class EmptyResult(DSLError):
    """A topological operation produced no simplices."""


class FormulaSyntaxError(DSLError):
    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


class EmptyGroup(FormulaSyntaxError):
    pass


class UnresolvedActionRef(DSLError):
    pass


class RosterMismatch(DSLError):
    pass


class UnsupportedGroupMismatch(DSLError):
    """[a]D_H phi where H differs from the colours of the action simplex."""


class UnsupportedReduction(DSLError):
    """A reduction rule is applied outside the domain where it is sound."""


class BoundsTooLarge(DSLError):
    pass
