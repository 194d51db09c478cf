"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class TrainingError(RuntimeError):
    """A learner or boosting loop failed to produce a usable fit."""

    def __init__(self, message, epoch=None, round_index=None):
        super().__init__(message)
        self.epoch = epoch
        self.round_index = round_index


class DegenerateEnsembleError(DomainError):
    """The ensemble cannot produce a vote (e.g. total fitness is zero)."""


class UndefinedKappaError(DomainError):
    """Chance agreement equals one while observed agreement is imperfect."""


class DataError(ValueError):
    """Input data could not be parsed into a dataset."""


class ConfigError(ValueError):
    """A run configuration failed validation.

    ``problems`` lists every violated field so they can be reported at once.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
