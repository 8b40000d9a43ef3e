import logging
import sys

from models.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


def write_text(text, out=None):
    """Write ``text`` to the file ``out``, or to stdout when no file is given."""
    if not out:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as e:
        raise ConfigurationError(f"out: cannot write {out}: {str(e)}")
    logger.info("wrote %d bytes to %s", len(text), out)
