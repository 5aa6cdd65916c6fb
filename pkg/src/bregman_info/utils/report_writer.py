import json
import logging
import math
import sys
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel

from bregman_info.constants import FLOAT_SIGNIFICANT_DIGITS

logger = logging.getLogger(__name__)

INDENT = "  "


def _format_float(value: float) -> str:
    if math.isnan(value):
        return '"nan"'
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    text = format(value, f".{FLOAT_SIGNIFICANT_DIGITS}g")
    if not any(marker in text for marker in '.en'):
        text += ".0"
    return text


def _plain(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode='python')
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, tuple):
        return list(value)
    return value


def encode(value: Any, depth: int = 0) -> str:
    """
    JSON text with every float written to 17 significant digits and non-finite
    floats as strings. Dict keys keep their insertion order.
    """
    value = _plain(value)
    if value is None or isinstance(value, (bool, str)):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _format_float(value)
    pad, inner = INDENT * depth, INDENT * (depth + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{json.dumps(str(key), ensure_ascii=False)}: {encode(item, depth + 1)}"
                 for key, item in value.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, list):
        if not value:
            return "[]"
        if all(isinstance(_plain(item), (int, float)) and not isinstance(item, bool) for item in value):
            return "[" + ", ".join(encode(item, depth + 1) for item in value) + "]"
        return "[\n" + ",\n".join(f"{inner}{encode(item, depth + 1)}" for item in value) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def render_report(report: BaseModel, config: Optional[BaseModel] = None) -> str:
    document = report.model_dump(mode='python')
    if config is not None:
        document['config'] = config.model_dump(mode='python')
    return encode(document) + "\n"


def _emit(text: str, output: Optional[Path]):
    if output is None:
        sys.stdout.write(text)
        return
    output = Path(output)
    output.write_text(text, encoding='utf-8')
    meta = {"generated_at": datetime.now(timezone.utc).isoformat(), "report": output.name}
    output.with_name(output.name + ".meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding='utf-8')
    logger.info(f"Report written to {output}")


def write_report(report: BaseModel, config: Optional[BaseModel] = None, output: Optional[Path] = None):
    """Write the report document to ``output`` (plus a timestamp sidecar) or to stdout."""
    _emit(render_report(report, config), output)


def write_error(record, output: Optional[Path] = None):
    text = encode(record.to_dict()) + "\n"
    try:
        _emit(text, output)
    except OSError:
        logger.error(f"Could not write the error record to {output}; writing it to stdout")
        _emit(text, None)
