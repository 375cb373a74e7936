"""Exception types shared across modules."""


class AbstainLabError(Exception):
    pass


class EmptyVersionSpace(AbstainLabError):
    pass


class DuplicatePoints(AbstainLabError):
    pass


class InconsistentSample(AbstainLabError):
    pass


class UseMonteCarlo(AbstainLabError):
    pass


class InjectionOffSupport(AbstainLabError):
    pass


class ConfigError(AbstainLabError):
    pass


class RunAborted(AbstainLabError):
    def __init__(self, round_index: int, cause: Exception):
        super().__init__(f"round {round_index}: {type(cause).__name__}: {cause}")
        self.round_index = round_index
        self.cause = cause
