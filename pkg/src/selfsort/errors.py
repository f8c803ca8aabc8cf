"""Exception hierarchy shared by every module."""


class SelfSortError(Exception):
    pass


class EmptyTraining(SelfSortError):
    pass


class InsufficientTraining(SelfSortError):
    def __init__(self, needed, got):
        super().__init__(f"need {needed} training instances, got {got}")
        self.needed = needed
        self.got = got


class LengthMismatch(SelfSortError):
    pass


class DimensionMismatch(SelfSortError):
    pass


class SpecError(SelfSortError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class TooLargeForOracle(SelfSortError):
    pass


class RepresentativeDegenerate(SelfSortError):
    pass


class ZeroSlopeLine(SelfSortError):
    pass


class UniverseOverflow(SelfSortError):
    pass


class VersionError(SelfSortError):
    pass


class StreamFormatError(SelfSortError):
    pass
