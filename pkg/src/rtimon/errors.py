"""Exception hierarchy shared across the monitor's modules.

Every error carries a stable slug in ``code`` so the HTTP layer and the CLI
can map failures without string-matching messages.
"""

from __future__ import annotations


class RtiMonError(Exception):
    """Base class for all monitor errors."""

    code = "error"

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context


# --- configuration ---------------------------------------------------------

class MissingDocument(RtiMonError):
    code = "missing_document"


class ConfigParseError(RtiMonError):
    code = "parse_error"

    def __init__(self, document: str, position: str, message: str):
        super().__init__(f"{document}: {message} (at {position})",
                         document=document, position=position)
        self.document = document
        self.position = position


class InvalidConfig(RtiMonError):
    """Raised by load_config when validation finds any error."""

    code = "invalid_config"

    def __init__(self, errors):
        self.errors = list(errors)
        lines = "; ".join(str(e) for e in self.errors)
        super().__init__(f"{len(self.errors)} validation error(s): {lines}")


class UnknownId(RtiMonError):
    code = "unknown_id"


# --- ingestion -------------------------------------------------------------

class SourceUnavailable(RtiMonError):
    code = "source_unavailable"

    def __init__(self, location: str, cause: str):
        super().__init__(f"source unavailable: {location}: {cause}",
                         location=location, cause=cause)
        self.location = location
        self.cause = cause


class EmptySource(RtiMonError):
    code = "empty_source"


class MalformedCsv(RtiMonError):
    code = "malformed_csv"

    def __init__(self, line_no: int, message: str = "malformed CSV"):
        super().__init__(f"{message} at line {line_no}", line_no=line_no)
        self.line_no = line_no


class HeaderMissingColumn(RtiMonError):
    code = "header_missing_column"

    def __init__(self, name: str):
        super().__init__(f"header lacks mapped column {name!r}", name=name)
        self.name = name


# --- integration / store ---------------------------------------------------

class NonFiniteResult(RtiMonError):
    code = "non_finite_result"

    def __init__(self, indicator_id: str, region: str, year: int):
        super().__init__(
            f"transform produced a non-finite value for "
            f"{indicator_id}/{region}/{year}",
            indicator_id=indicator_id, region=region, year=year)


class UnknownIndicator(RtiMonError):
    code = "unknown_indicator"


class CorruptBackup(RtiMonError):
    code = "corrupt_backup"


# --- analytics -------------------------------------------------------------

class NoObservation(RtiMonError):
    code = "no_observation"


class NoReferenceData(RtiMonError):
    code = "no_reference_data"


class ZeroDenominator(RtiMonError):
    code = "zero_denominator"


class CoverageMismatch(RtiMonError):
    code = "coverage_mismatch"


class YearNotInSeries(RtiMonError):
    code = "year_not_in_series"


class InsufficientHistory(RtiMonError):
    code = "insufficient_history"


class NoQualifyingYear(RtiMonError):
    code = "no_qualifying_year"


# --- service ---------------------------------------------------------------

class Unauthorized(RtiMonError):
    code = "unauthorized"


class BindError(RtiMonError):
    code = "bind_error"
