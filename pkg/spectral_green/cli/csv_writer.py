"""
Deterministic CSV output: UTF-8, LF line endings, `#` comment lines first and
floats in their shortest round-trip form.
"""

import csv
import io
import sys
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import numpy as np

from spectral_green.custom_logging import logger


def format_value(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return repr(float(value))


def render_csv(header: Sequence[str], rows: Iterable[Sequence], provenance: str,
               comments: Optional[List[str]] = None) -> str:
    buffer = io.StringIO(newline='')
    buffer.write(f"# provenance: {provenance}\n")
    for comment in comments or []:
        buffer.write(f"# {comment}\n")
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(value) for value in row])
    return buffer.getvalue()


def write_output(text: str, output: Optional[Path]) -> None:
    """Write the rendered document to a file, or to stdout when no path is given"""
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    output = Path(output)
    if output.parent and not output.parent.exists():
        output.parent.mkdir(parents=True, exist_ok=True)
    with open(output, 'w', encoding='utf-8', newline='\n') as handle:
        handle.write(text)
    logger.info(f"Wrote {output}")
