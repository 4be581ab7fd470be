"""Exception hierarchy.

Validation problems (malformed tables, dangling references) are kept apart
from law failures: the latter are reported in a :class:`~kleene_morita.report.Report`,
never raised.
"""


class KleeneError(Exception):
    pass


class ValidationError(KleeneError):
    """Tables or references are malformed."""


class SizeGuardError(KleeneError):
    """A carrier or enumeration exceeds the configured bound."""


class AlgebraMismatchError(ValidationError):
    """Elements or modules over different algebras were combined."""


class SubalgebraError(ValidationError):
    pass


class PreconditionError(KleeneError):
    pass


class CornerStarError(KleeneError):
    def __init__(self, law: str, counterexample: dict):
        self.law = law
        self.counterexample = counterexample
        super().__init__(f"corner algebra violates {law}: {counterexample}")


class ParseError(KleeneError):
    def __init__(self, message: str, line: int | None = None, section: str | None = None):
        self.line = line
        self.section = section
        where = []
        if section:
            where.append(f"section {section!r}")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
