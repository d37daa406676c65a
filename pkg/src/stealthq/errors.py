"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument is outside the documented domain of an operation."""


class DegenerateFeatureError(ValueError):
    """A feature column has zero variance and cannot be standardized."""

    def __init__(self, feature: str):
        super().__init__(f"feature {feature!r} has zero variance in the training rows")
        self.feature = feature


class NotFittedError(RuntimeError):
    """A transform was applied before its statistics were fitted."""


class StealthViolationError(ValueError):
    """An injected perturbation exceeds its configured stealth bound."""

    def __init__(self, component: str, value: float, bound: float):
        super().__init__(
            f"stealth bound violated for {component}: |{value:.6g}| > {bound:.6g}"
        )
        self.component = component
        self.value = value
        self.bound = bound


class DivergenceError(ArithmeticError):
    """An optimizer produced a non-finite loss."""

    def __init__(self, iteration: int, value: float):
        super().__init__(f"non-finite loss {value!r} at iteration {iteration}")
        self.iteration = iteration
        self.value = value
