import functools
import logging

from pydantic import ValidationError

from bregman_info.constants import EXIT_INPUT_ERROR, EXIT_NUMERICAL_ERROR
from bregman_info.errors import BregmanError
from bregman_info.utils.error_record import ErrorRecord
from bregman_info.utils.report_writer import write_error

logger = logging.getLogger(__name__)


def _output_of(args, kwargs):
    if 'output' in kwargs:
        return kwargs['output']
    for arg in args:
        output = getattr(arg, 'output', None)
        if output is not None:
            return output
    return None


def handle_exceptions(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except BregmanError as e:
            record = ErrorRecord(kind=e.kind, error_message=str(e), exit_code=e.exit_code)
        except ValidationError as e:
            record = ErrorRecord(kind="ValidationError", error_message=str(e), exit_code=EXIT_INPUT_ERROR)
        except (ValueError, OSError) as e:
            record = ErrorRecord(kind=type(e).__name__, error_message=str(e), exit_code=EXIT_INPUT_ERROR)
        except Exception as e:
            logger.exception("Unexpected failure")
            record = ErrorRecord(kind=type(e).__name__, error_message=str(e), exit_code=EXIT_NUMERICAL_ERROR)
        logger.error(f"{record.kind}: {record.error_message}")
        write_error(record, _output_of(args, kwargs))
        return record.exit_code
    return wrapper
