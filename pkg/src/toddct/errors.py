"""Error taxonomy.

Three broad families, used by the CLI to pick exit codes:

* ValidationError  -- malformed input, bad configuration        (exit 2)
* MathDomainError  -- structurally valid input outside the math  (exit 3)
* ResourceError    -- a guard rail tripped, not a wrong answer   (exit 4)
"""


class ToddCTError(Exception):
    pass


class ValidationError(ToddCTError):
    pass


class MathDomainError(ToddCTError):
    pass


class ResourceError(ToddCTError):
    pass


# --- field / CRT ---------------------------------------------------------

class NotPrime(ValidationError):
    pass


class NoFFTSupport(MathDomainError):
    """2-adic valuation of p-1 too small for the requested transform."""


class DuplicatePrime(ValidationError):
    pass


class ReconstructionFailed(MathDomainError):
    """The residues determine no rational below the height bound; more
    primes are needed."""


# --- truncated series ----------------------------------------------------

class CharTooSmall(MathDomainError):
    """An operation needs to invert an integer divisible by p."""


class NotInvertibleConstantTerm(MathDomainError):
    pass


class ConstantTermNotOne(MathDomainError):
    pass


class ConstantTermNotZero(MathDomainError):
    pass


# --- regular multivariate series -----------------------------------------

class NotRegular(MathDomainError):
    """Coefficient of s^n has total y-degree exceeding n."""


# --- constant terms -------------------------------------------------------

class UnsuitablePrime(MathDomainError):
    """Prime too small for the pole order, or divides a B_0 entry."""


# --- short sums -----------------------------------------------------------

class ParseError(ValidationError):
    pass


class NoValidGamma(MathDomainError):
    pass


class DegreeOverflow(ResourceError):
    """Combining over a common denominator would exceed the degree cap."""


# --- cost specialization / ILP --------------------------------------------

class EmptySum(MathDomainError):
    pass


class ZeroExponentFactor(MathDomainError):
    """A denominator factor 1 - t^0 is identically zero."""


class Unbounded(MathDomainError):
    """Prefix counting ran past the proven upper bound without a hit."""


class SearchSpaceTooLarge(ResourceError):
    pass
