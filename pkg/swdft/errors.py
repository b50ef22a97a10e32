"""
Error types for the SWDFT toolkit
Each error knows its CLI exit code and its HTTP status, so both surfaces report it the same way
"""


class SwdftError(Exception):
    """Base error: `detail` is the user-facing message"""

    exit_code: int = 1
    status_code: int = 500

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


# ============================================================================
# INPUT ERRORS (usage)
# ============================================================================

class InvalidInputError(SwdftError):
    """Empty, non-finite or otherwise unusable input"""

    exit_code = 2
    status_code = 400


class InvalidWindowError(InvalidInputError):
    """Window size outside 1 <= n <= N"""


class InvalidSpecError(InvalidInputError):
    """Signal specification inconsistent with the requested signal length"""


class FrequencyIndexError(InvalidInputError, IndexError):
    """Frequency index outside 0..n-1"""


class UnsupportedConfigurationError(SwdftError):
    """Valid input for which an operation is not defined (e.g. closed form with L < n)"""

    exit_code = 2
    status_code = 422


# ============================================================================
# NUMERICAL ERRORS
# ============================================================================

class NumericalFailureError(SwdftError):
    """An objective or solve produced NaN/Inf"""

    exit_code = 3
    status_code = 500


class IncompleteReportError(SwdftError):
    """A simulation report is missing cells of its configured grid"""

    exit_code = 3
    status_code = 500
