import json
import logging
import os

from pydantic import ValidationError

from src.reports.models import VerificationReport


def report_to_json(report: VerificationReport) -> str:
    """
    Pretty-printed JSON of a report. Field order follows the schema, so equal
    reports always serialize to identical text.
    """
    return json.dumps(report.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"


def dump_report(report: VerificationReport, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(report_to_json(report))
    logging.getLogger(__name__).debug("Report written to %s", path)
    return path


def _load_json_data(json_data: dict | str) -> dict | None:
    """
    Accept an already decoded dict or a JSON string.
    """
    if isinstance(json_data, dict):
        return json_data

    try:
        return json.loads(json_data)
    except json.JSONDecodeError as json_error:
        logger = logging.getLogger(__name__)
        logger.error("Error during JSON decoding: %s", str(json_error))
        return None


def load_report(source: dict | str) -> VerificationReport | None:
    """
    Parse and validate a report from a path, a JSON string or a dict.

    Returns None when the content is not JSON or does not match the schema;
    the reason is logged.
    """
    if isinstance(source, str) and os.path.isfile(source):
        with open(source, "r", encoding="utf-8") as handle:
            source = handle.read()

    json_data = _load_json_data(source)
    if json_data is None:
        return None

    try:
        return VerificationReport.model_validate(json_data)
    except ValidationError as error:
        logging.getLogger(__name__).error("Report does not match the schema: %s", str(error))
        return None
