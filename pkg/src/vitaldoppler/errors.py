"""Exception hierarchy shared by every stage of the pipeline."""


class VitalDopplerError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(VitalDopplerError, ValueError):
    """A physical or numerical parameter is outside its allowed range."""


class InvalidInputError(VitalDopplerError, ValueError):
    """Input data has the wrong shape, length or content."""


class DegenerateSignalError(InvalidInputError):
    """A complex sample has zero magnitude so its phase is undefined."""

    def __init__(self, index):
        self.index = int(index)
        super().__init__(f"zero-magnitude sample at index {self.index}; phase undefined")


class ContractError(VitalDopplerError):
    """An operation was applied to data in the wrong state (e.g. wrapped vs unwrapped)."""


class VelocityRangeError(InvalidInputError):
    def __init__(self, requested, span):
        self.requested = float(requested)
        self.span = (float(span[0]), float(span[1]))
        super().__init__(
            f"velocity {self.requested:g} m/s outside map span "
            f"[{self.span[0]:g}, {self.span[1]:g}] m/s"
        )


class AbsentRateError(VitalDopplerError):
    """No spectral peak above the prominence threshold in a search band."""

    def __init__(self, band_name, band):
        self.band_name = band_name
        self.band = (float(band[0]), float(band[1]))
        super().__init__(
            f"no {band_name} peak above prominence threshold in "
            f"[{self.band[0]:g}, {self.band[1]:g}] Hz"
        )


class ConfigError(VitalDopplerError):
    """Configuration could not be parsed or violates a constraint."""


class PipelineError(VitalDopplerError):
    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")
