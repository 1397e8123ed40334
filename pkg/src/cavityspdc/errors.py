"""Exception hierarchy.

Two families matter for the CLI: validation problems (bad inputs, malformed
files, out-of-range queries) exit with code 2, numeric failures (a solve that
has no usable result for physically valid inputs) exit with code 3.
"""


class ToolError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ToolError):
    """Bad input: malformed file, unknown key, value outside its contract."""


class NumericError(ToolError):
    """A computation has no usable result for the given (valid) inputs."""


class OutOfValidityRange(ValidationError):
    """Dispersion model queried outside its fitted wavelength/temperature box."""

    def __init__(self, model_name, axis, wavelength, temperature):
        self.model_name = model_name
        self.axis = axis
        self.wavelength = wavelength
        self.temperature = temperature
        super().__init__(
            f"{model_name}: {axis} query at lambda={wavelength*1e9:.2f} nm, "
            f"T={temperature:.2f} K is outside the model validity range"
        )


class MaterialFileError(ValidationError):
    """Coefficient file is malformed (missing/unknown keys, wrong types)."""


class NoPositivePeriod(NumericError):
    """Quasi-phase-matching has no positive poling period for these waves."""


class DegenerateSlope(NumericError):
    """Group-index difference too small: the linear bandwidth expansion fails.

    Callers should fall back to the half-maximum scan or the second-order
    cluster machinery.
    """


class NoRealRoot(NumericError):
    """Second-order cluster solve produced no real positive candidate."""


class IncompatibleTarget(ValidationError):
    """Bell target polarization structure conflicts with the PM type."""


class InvalidReflectivity(ValidationError):
    """Mirror reflectivity or loss entry outside its physical interval."""


class ScenarioValidation(ValidationError):
    """Scenario document failed schema validation."""

    def __init__(self, messages):
        if isinstance(messages, str):
            messages = [messages]
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))


class UnknownFigure(ValidationError):
    """Requested figure id is not one of the reproducible set."""
