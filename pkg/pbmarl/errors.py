class PbMarlError(Exception):
    """
    Root of all errors raised by pbmarl
    """


class DataError(PbMarlError):
    """
    Election data could not be parsed or is inconsistent (CLI exit code 2)
    """

    exit_code = 2


class MissingSection(DataError):
    pass


class DuplicateProjectId(DataError):
    pass


class DuplicateVoterId(DataError):
    pass


class MalformedRow(DataError):
    """
    A row of a .pb file could not be read
    """

    def __init__(self, message, line=None):
        """Constructor

        Args:
          message: Description of the problem
          line: 1-based line number in the source document, if known
        """
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NonNumericCost(DataError):
    pass


class MissingBudget(DataError):
    pass


class EmptyImpactAreas(DataError):
    pass


class TokenCountMissing(DataError):
    pass


class BallotExceedsTokens(DataError):
    pass


class UnknownProject(DataError):
    pass


class NoFeasibleProject(DataError):
    pass


class ConfigError(PbMarlError):
    """
    Invalid experiment configuration (CLI exit code 3)
    """

    exit_code = 3


class ReportInputError(PbMarlError):
    """
    Report inputs are missing or incomplete (CLI exit code 4)
    """

    exit_code = 4


class ExperimentError(PbMarlError):
    """
    Failure during a simulation run, tagged with the episode it happened in
    """

    def __init__(self, episode, cause):
        self.episode = episode
        self.cause = cause
        super().__init__(f"episode {episode}: {cause}")


class IndexOutOfRange(PbMarlError, IndexError):
    pass


class ZeroDimension(PbMarlError, ValueError):
    pass


class DimensionMismatch(PbMarlError, ValueError):
    pass


class ShapeMismatch(PbMarlError, ValueError):
    pass


class EmptyBatch(PbMarlError, ValueError):
    pass


class EmptyBuffer(PbMarlError, ValueError):
    pass


class EmptyInput(PbMarlError, ValueError):
    pass


class TooFewProjects(PbMarlError, ValueError):
    pass


class UnknownWinnerProject(PbMarlError, KeyError):
    pass


class ZeroVotesOnOwnVotedWinner(PbMarlError, ValueError):
    pass
