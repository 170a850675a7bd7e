import logging
import os
import sys

logger = logging.getLogger(__name__)

ALLOWED_EXTENSIONS = {".csv", ".txt"}


def read_input(path: str) -> bytes:
    """Read an input CSV as bytes.

    Raises FileNotFoundError for a missing path and IsADirectoryError for a
    directory. Other extensions are read but logged, since spreadsheet
    exports are often misnamed.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"Input not found: {path}")
    if os.path.isdir(path):
        raise IsADirectoryError(f"Input is a directory: {path}")

    ext = os.path.splitext(path)[1].lower()
    if ext not in ALLOWED_EXTENSIONS:
        logger.warning(f"Unexpected extension '{ext}' for {path}; reading it as CSV")

    with open(path, "rb") as f:
        return f.read()


def write_output(data: bytes, out: str | None = None) -> None:
    """Write report bytes to *out*, or to standard output when *out* is None or '-'."""
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return

    directory = os.path.dirname(out)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(out, "wb") as f:
        f.write(data)
    logger.debug(f"Wrote {len(data)} bytes to {out}")
