"""Exception hierarchy shared by all modules."""


class TorusRotError(Exception):
    pass


class CertificationError(TorusRotError, ValueError):
    """An exact ceiling or comparison could not be certified from the convergent."""


class WindowError(TorusRotError, ValueError):
    """Requested index or horizon lies outside the modeled window."""


class ConstructionError(TorusRotError, ValueError):
    pass


class ConsistencyError(TorusRotError):
    """Two independent routes to the same quantity disagree."""


class ThinningError(TorusRotError):
    def __init__(self, stage, message=None):
        self.stage = stage
        super().__init__(message or f"approximating family exhausted at stage {stage}")
