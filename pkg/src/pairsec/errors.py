"""Exception hierarchy shared by all modules."""


class PairsecError(Exception):
    pass


class SeedCongruenceError(PairsecError, ValueError):
    """p(u) or r(u) is not an integer for the given seed."""


class NonPrimeInstanceError(PairsecError, ValueError):
    pass


class SeedNotFoundError(PairsecError, LookupError):
    def __init__(self, message: str, budget: int):
        super().__init__(f"{message} (budget {budget} candidates)")
        self.budget = budget


class UnknownCurveError(PairsecError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown curve"


class SetupValidationError(PairsecError):
    """h is not irreducible modulo p for this instance."""


class RecipeIncompatibilityError(PairsecError):
    """f1 and f2 share no root modulo p."""


class InfeasibleCurveError(PairsecError):
    """No grid point satisfies the relation-count constraint."""


class PolynomialNotFoundError(PairsecError, LookupError):
    pass
