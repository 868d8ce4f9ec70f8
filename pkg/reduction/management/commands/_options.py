"""Argument helpers shared by the management commands."""

from typing import List

from django.core.management.base import CommandError
from pydantic import ValidationError

# Exit statuses of the command-line surface
EXIT_FAILURES = 1
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_IO = 4


def float_list(raw: str, flag: str) -> List[float]:
    try:
        return [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise CommandError(f"{flag}: expected comma-separated numbers, got {raw!r}", returncode=EXIT_USAGE)


def int_list(raw: str, flag: str) -> List[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise CommandError(f"{flag}: expected comma-separated integers, got {raw!r}", returncode=EXIT_USAGE)


def name_list(raw: str) -> List[str]:
    return [part.strip() for part in raw.split(",") if part.strip()]


def usage_error(e: ValidationError) -> CommandError:
    details = "; ".join(
        f"{'.'.join(str(p) for p in err['loc']) or 'value'}: {err['msg']}" for err in e.errors()
    )
    return CommandError(details, returncode=EXIT_USAGE)
