"""Free noncommutative polynomial kernel and a checker for noncommutative Abel-Hurwitz identities."""
from .errors import ContractViolation, ParseError, RingMismatchError
from .freealg import Monomial, Polynomial, RingSpec, add, equals, mul, pow, serialize, substitute
from .identities import Identity, IdentityCase, Model, Setup, Side, VerificationReport, verify

__all__ = [
    "ContractViolation", "ParseError", "RingMismatchError",
    "Monomial", "Polynomial", "RingSpec", "add", "equals", "mul", "pow", "serialize", "substitute",
    "Identity", "IdentityCase", "Model", "Setup", "Side", "VerificationReport", "verify",
]
__version__ = "0.1.0"
