class FuselabError(Exception):
    """A class of Errors that is raised on issues with a detection experiment"""


class FuselabFileError(FuselabError):
    """An Error that is raised on issues with reading or writing files using fuselab"""


class FuselabValidationError(FuselabError):
    """An Error that is raised on issues with validating configuration files using fuselab"""


class FuselabFileNotFoundError(FuselabFileError, FileNotFoundError):
    """An Error that is raised when a file can not be found"""


class FuselabDomainError(FuselabError, ValueError):
    """An Error that is raised when an operation is called outside of its mathematical domain"""


class FuselabNumericalError(FuselabError):
    """An Error that is raised when a numerical procedure can not produce a usable result"""


class MLConvergenceError(FuselabNumericalError):
    """An Error that is raised when the maximum likelihood search does not converge

    Attributes
    ----------
    best_theta: float
        The best iterate found before giving up
    """

    def __init__(self, message: str, best_theta: float) -> None:
        super().__init__(message)
        self.best_theta = best_theta
