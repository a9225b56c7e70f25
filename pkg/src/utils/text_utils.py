"""Text utilities for reports and exported files."""

import math
import re


def format_uncertainty(value: float, sigma: float, zero_sigma_decimals: int = 3) -> str:
    """Format a value with its one-sigma error in parenthesis notation.

    The error is rounded to one significant digit and the value is printed to
    the same decimal place, e.g. ``0.5165 +- 0.012`` becomes ``0.52(1)``.

    Args:
        value: Central value
        sigma: One standard deviation, non-negative
        zero_sigma_decimals: Decimal places used when ``sigma`` is zero

    Returns:
        Formatted string such as ``0.718(5)`` or ``0.000(0)``
    """
    if sigma < 0 or not math.isfinite(sigma):
        raise ValueError(f"sigma must be finite and non-negative, got {sigma}")

    if sigma == 0:
        return f"{value:.{zero_sigma_decimals}f}(0)"

    decimals = -math.floor(math.log10(sigma))
    digit = round(sigma * 10**decimals)
    # 0.096 rounds up to 0.1: one decimal fewer
    if digit == 10:
        decimals -= 1
        digit = 1

    decimals = max(decimals, 0)
    return f"{value:.{decimals}f}({digit})"


def last_digit_unit(printed: str) -> float:
    """Size of one unit in the last printed decimal place of ``printed``.

    Args:
        printed: A printed number, optionally followed by ``(d)``

    Returns:
        ``10**-k`` where ``k`` is the number of printed decimals
    """
    number = printed.split("(", 1)[0].strip()
    if "." not in number:
        return 1.0
    return 10.0 ** -len(number.split(".", 1)[1])


def sanitize_filename(name: str) -> str:
    """Sanitize a name to be used as a filename.

    Args:
        name: Name to sanitize

    Returns:
        Sanitized name safe for use as a filename
    """
    # Replace : / \ * ? " < > | with _
    sanitized = re.sub(r'[:\\/*?"<>|]', "_", name)

    # Also replace spaces with underscores for better compatibility
    sanitized = sanitized.replace(" ", "_")

    return sanitized
