class ConvergenceError(Exception):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class VerificationError(Exception):
    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = list(failures)


class ResolutionError(Exception):
    pass
