"""
Error hierarchy shared by the services, the CLI and the HTTP routes.

InputError subclasses map to CLI exit code 1 and HTTP 400.
Anything outside this hierarchy is treated as an internal failure.
"""


class SlideBenchError(Exception):
    """Base class for every error raised on purpose by this package."""


class InputError(SlideBenchError):
    """The caller supplied something we cannot evaluate."""


class DomainError(InputError, ValueError):
    """A numeric argument lies outside the domain of the operation."""


class ConfigError(InputError):
    def __init__(self, message, keys=None):
        super().__init__(message)
        self.keys = list(keys or [])


class LayoutParseError(InputError):
    def __init__(self, message, field=None, line=None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(f"{message}{suffix}")
        self.field = field
        self.line = line


class ImageDecodeError(InputError):
    def __init__(self, path, reason):
        super().__init__(f"cannot decode image '{path}': {reason}")
        self.path = str(path)


class EmptyDeckError(InputError):
    pass


class InsufficientDataError(InputError):
    pass


class RegionOutsideImageError(InputError):
    pass


class PyramidSizeError(InputError):
    def __init__(self, level, min_side, required):
        super().__init__(
            f"image too small for pyramid level {level}: "
            f"min side {min_side}px, level {level} needs at least {required}px"
        )
        self.level = level


class UnsupportedFormatError(InputError):
    def __init__(self, name, supported):
        super().__init__(
            f"unsupported input '{name}'. Supported formats: {', '.join(supported)}"
        )
        self.supported = list(supported)


class CorruptPackageError(InputError):
    pass


class QuizParseError(InputError):
    pass


class LlmError(InputError):
    pass


class LlmTransportError(LlmError):
    """Endpoint unreachable, timed out, or answered with an HTTP error."""


class LlmResponseError(LlmError):
    """Endpoint answered but the reply cannot be parsed."""


class RankingParseError(InputError):
    def __init__(self, message, line=None):
        super().__init__(f"{message} (line {line})" if line is not None else message)
        self.line = line
