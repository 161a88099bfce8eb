"""Exception hierarchy; the CLI maps each class to an exit code."""


class ToralHopfError(Exception):
    exit_code = 3


class InputError(ToralHopfError, ValueError):
    """Malformed input: bad file, bad flag, inconsistent dimensions."""

    exit_code = 1


class HypothesisError(ToralHopfError):
    """Analysis rejected because a theorem hypothesis is not met."""

    exit_code = 2


class NumericFailure(ToralHopfError, ArithmeticError):
    """Integrator failure, blowup, near resonance, singular solve."""

    exit_code = 3


class ResonanceError(NumericFailure):
    pass


class DegenerateError(HypothesisError):
    pass
