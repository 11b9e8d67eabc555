"""Exception hierarchy shared by all semtax modules.

ConfigError maps to CLI exit code 1, DataError (and subclasses) to exit
code 2.
"""


class SemtaxError(Exception):
    pass


class ConfigError(SemtaxError):
    pass


class DataError(SemtaxError):
    pass


class TaxonomyError(DataError):
    pass


class CycleError(TaxonomyError):
    pass


class MultipleRootsError(TaxonomyError):
    pass


class DanglingLinkError(TaxonomyError):
    pass


class DuplicateIdError(TaxonomyError):
    pass


class EmptyLabelError(TaxonomyError):
    pass


class UnknownCategoryError(TaxonomyError):
    pass


class UnknownConceptError(TaxonomyError):
    pass


class EmptyVectorError(DataError):
    """Document has no usable terms, or no term maps to any concept."""


class TrainingError(DataError):
    pass


class CalibrationError(DataError):
    pass


class DegenerateInputError(DataError):
    pass
