"""Exception hierarchy shared by all stages of the flow."""


class SynthError(Exception):
    pass


class FrontendError(SynthError):
    """An error tied to a location in the HDL source.

    The formatted message always starts with ``file:line:column``.
    """

    def __init__(self, message, span=None):
        self.span = span
        self.detail = message
        if span is not None:
            message = f"{span.file}:{span.line}:{span.column}: {message}"
        super().__init__(message)


class LexError(FrontendError):
    pass


class ParseError(FrontendError):
    pass


class UnsupportedConstruct(FrontendError):
    def __init__(self, construct, span=None):
        self.construct = construct
        super().__init__(f"unsupported construct {construct!r}", span)


class DeclarationError(FrontendError):
    pass


class WidthMismatch(FrontendError):
    pass


class MultipleDrivers(FrontendError):
    pass


class CombinationalCycle(FrontendError):
    pass


class UndrivenNet(FrontendError):
    pass


class MissingInput(SynthError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class FormatError(SynthError):
    """Malformed AIGER text; ``line`` is 1-based."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SignatureMismatch(SynthError):
    pass


class ExhaustiveTooLarge(SynthError):
    pass


class UnknownPass(SynthError):
    pass


class BadParameter(SynthError):
    pass


class LibraryIncomplete(SynthError):
    pass
