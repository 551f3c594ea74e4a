"""Result files: JSON reports and CSV tables, written to a sibling temp file and renamed into place."""
import csv
import io
import os
from pathlib import Path

from loguru import logger

from fracperiodic import constants
from fracperiodic.storage.encoder import decode, encode

TMP_SUFFIX = '.tmp'


def write_atomic(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(exist_ok=True, parents=True)
    tmp = path.with_name(path.name + TMP_SUFFIX)
    try:
        with open(tmp, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            tmp.unlink()
    logger.debug(f'Wrote {path}.')
    return path


def write_json(path, data) -> Path:
    return write_atomic(path, encode(data) + '\n')


def read_json(path):
    return decode(Path(path).read_text(encoding='utf-8'))


def csv_text(header, rows) -> str:
    """Floats go through repr, which round-trips every double."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter=constants.CSV_DELIMITER, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        assert len(row) == len(header), f'Row has {len(row)} values for {len(header)} columns.'
        writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    return buffer.getvalue()


def write_csv(path, header, rows) -> Path:
    return write_atomic(path, csv_text(header, rows))


def read_csv(path):
    with open(path, newline='', encoding='utf-8') as f:
        reader = csv.reader(f, delimiter=constants.CSV_DELIMITER)
        header = next(reader)
        return header, [row for row in reader]
