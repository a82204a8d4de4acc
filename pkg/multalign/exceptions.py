# Licensed under the MIT License.
"""
Custom exception types
"""


class MultalignError(Exception):
    """Multalign parent exception class"""


class MultalignDataError(MultalignError):
    """Errors with input data or file contents"""


class MultalignDomainError(MultalignError):
    """Values outside the domain an operation is defined on"""


class MultalignDimensionError(MultalignError):
    """Shape mismatches and size guard violations"""


class MultalignDatabaseError(MultalignError):
    """Errors with the results store"""


class MultalignSpreadsheetError(MultalignError):
    """Errors with workbook operations"""
