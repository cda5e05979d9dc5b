class ColumnSelectionError(Exception):
    """
    Base class for every error raised by the column selection apps.
    """


class ParameterError(ColumnSelectionError, ValueError):
    """
    Raised when an operation is called with an argument outside its domain,
    e.g. a rank larger than the matrix or a probability outside [0, 1].
    """


class DegenerateInputError(ColumnSelectionError):
    """
    Raised when the input carries no usable signal, e.g. every estimated
    column norm is zero so no sampling distribution can be formed.
    """


class ParseError(ColumnSelectionError):
    """
    Raised when a text matrix file is malformed.

    Attributes:
        line_number (int | None): 1-based line of the offending input.
        detail (str): The message without the line prefix.
    """

    def __init__(self, message, line_number=None):
        self.line_number = line_number
        self.detail = message
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class FormatError(ColumnSelectionError):
    """
    Raised when a binary or image file uses an unsupported encoding.
    """


class ConfigError(ColumnSelectionError):
    """
    Raised when an experiment configuration fails validation.

    Attributes:
        errors (dict): Field-level validation messages.
    """

    def __init__(self, message, errors=None):
        self.errors = errors or {}
        super().__init__(message)
