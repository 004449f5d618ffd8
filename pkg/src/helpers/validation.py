import functools
import json
import os
from pathlib import Path

from helpers import reports
from helpers.logging import logger
from relproj.errors import InputError
from relproj.report import CheckReport

_SEED = int(os.getenv("RELPROJ_SEED", "0"))
_SAMPLES = os.getenv("RELPROJ_SAMPLES")
_FORMAT = os.getenv("RELPROJ_FORMAT", "json")
FORMATS = ("json", "text")


def error_response(message: str, location: str | None = None, output_format: str = "json") -> dict:
    return reports.get_response(
        body={"error": message, "location": location},
        status_code=reports.INPUT_ERROR,
        output_format=output_format,
    )


def invariant_response(event: dict, err: ArithmeticError, output_format: str = "json") -> dict:
    """A construction a check relies on broke down, reported as a violation."""
    check = CheckReport("invariant", checked=1)
    check.fail({"error": str(err), "kind": type(err).__name__})
    body = reports.build_report(event.get("command") or "", [check], event.get("seed"), event.get("samples"))
    return reports.get_response(body, reports.VIOLATION, output_format)


def load_document(path: str) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    return json.loads(text, parse_float=_reject_float)


def _reject_float(literal: str):
    raise InputError(f"floating literal {literal} is not exact; write it as \"p/q\"")


def parse(event: dict) -> dict:
    """Defaults from the environment, the document loaded from disk if a file is named."""
    output_format = event.get("format") or _FORMAT
    if output_format not in FORMATS:
        raise InputError(f"unknown format {output_format!r}", location="--format")
    samples = event.get("samples")
    if samples is None and _SAMPLES:
        samples = int(_SAMPLES)
    document = event.get("document")
    if document is None and event.get("file"):
        document = load_document(event["file"])
    return {
        "command": event.get("command", ""),
        "file": event.get("file"),
        "document": document,
        "seed": _SEED if event.get("seed") is None else int(event["seed"]),
        "samples": samples,
        "format": output_format,
        "params": event.get("params") or {},
    }


def handle_errors(func):
    @functools.wraps(func)
    def f(event: dict, context=None):
        output_format = event.get("format") or _FORMAT
        try:
            return g(event, context)
        except json.decoder.JSONDecodeError as err:
            logger.exception("JSON error: %s", err)
            return error_response("Unable to parse", f"{event.get('file')}:{err.lineno}:{err.colno}", output_format)
        except InputError as err:
            logger.exception("Input error: %s", err)
            return error_response(str(err), err.location, output_format)
        except OSError as err:
            logger.exception("Unable to read input: %s", err)
            return error_response(f"Unable to read {err.filename}", event.get("file"), output_format)
        except KeyError as err:
            logger.exception("Missing field: %s", err)
            return error_response(f"missing field {err}", event.get("file"), output_format)
        except TypeError as err:
            logger.exception("Error at validation: %s", err)
            return error_response(f"malformed input: {err}", event.get("file"), output_format)
        except ArithmeticError as err:
            logger.exception("Invariant failed: %s", err)
            return invariant_response(event, err, output_format)

    @functools.wraps(func)
    def g(event: dict, context):
        logger.debug("Event: %s", json.dumps(event, default=str))
        parsed_event = parse(event)
        logger.debug("Event (after parsing): %s", json.dumps({**parsed_event, "document": bool(parsed_event["document"])}))
        return func(parsed_event, context)

    return f


def require_document(event: dict) -> list[str]:
    return [] if event["document"] else ["a definition document is required"]
