class MatrixFileError(Exception):
    pass


class NonReciprocalNetwork(Exception):
    pass


class PassivityViolation(Exception):
    pass


class PatternDimensionMismatch(Exception):
    pass


class IllConditionedLoad(Exception):
    pass


class EmptyPatternMatrix(Exception):
    pass


class DegeneratePatternCoder(Exception):
    pass


class NonOrthonormalPatterns(Exception):
    pass


class RankDeficientChannel(Exception):
    pass


class BisectionBracketFailure(Exception):
    pass


class CandidateSearchFailure(Exception):
    pass


class CodebookFileError(Exception):
    pass


class CodebookTrainingError(Exception):
    pass


class ConfigurationError(Exception):
    pass


class SearchCostMismatch(Exception):
    pass
