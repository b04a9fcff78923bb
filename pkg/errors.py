"""Exception hierarchy shared by every betafull module."""


class BetaError(Exception):
    """Base class for domain errors. The CLI maps these to exit code 1."""

    code = "beta_error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self):
        """
        Envelope used for structured error output

        Returns:
            dict: success flag, error code and details
        """
        return {
            'success': False,
            'error': self.code,
            'message': self.message,
            'details': self.details
        }


class ParseError(BetaError):
    code = "parse_error"


class NotParryAdmissible(BetaError):
    code = "not_parry_admissible"


class BetaOutOfRange(BetaError):
    code = "beta_out_of_range"


class ContextMismatch(BetaError):
    code = "context_mismatch"


class OutOfRange(BetaError):
    code = "out_of_range"


class LetterOutOfRange(BetaError):
    code = "letter_out_of_range"


class NotAdmissible(BetaError):
    code = "not_admissible"


class NotSofic(BetaError):
    code = "not_sofic"


class NotSFT(BetaError):
    code = "not_sft"


class InternalInvariantViolation(BetaError):
    code = "internal_invariant_violation"


class InvalidTable(BetaError):
    code = "invalid_table"


class OutOfDomain(BetaError):
    code = "out_of_domain"
