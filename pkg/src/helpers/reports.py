import dataclasses
import time
from typing import Any, Sequence

from helpers.fraction_encoder import dumps
from helpers.logging import logger
from relproj.report import CheckReport

PASS, VIOLATION, INPUT_ERROR = 0, 1, 2

_CONTENT_TYPES = {"json": "application/json", "text": "text/plain"}


def build_report(
    suite: str,
    checks: Sequence[CheckReport],
    seed: int | None = None,
    samples: int | None = None,
    result: Any = None,
) -> dict:
    report = {
        "suite": suite,
        "seed": seed,
        "samples": samples,
        "passed": all(c.passed for c in checks),
        "checks": [c.to_dict() for c in checks],
    }
    if result is not None:
        report["result"] = result
    return report


def status_of(report: dict) -> int:
    return PASS if report.get("passed", True) else VIOLATION


def render_text(body: dict) -> str:
    if "checks" not in body:
        return "\n".join(f"{key}: {dumps(value)}" for key, value in sorted(body.items()))
    lines = [f"suite {body['suite']} (seed {body['seed']}, samples {body['samples']})"]
    for check in body["checks"]:
        verdict = "pass" if check["passed"] else "FAIL"
        lines.append(f"  {verdict:4} {check['name']}: {check['checked']} checked, {len(check['violations'])} violations")
        for witness in check["violations"][:5]:
            lines.append(f"       witness {dumps(witness).replace(chr(10), ' ')}")
    if "result" in body:
        lines.append(f"result: {dumps(body['result'])}")
    lines.append("PASS" if body["passed"] else "FAIL")
    return "\n".join(lines)


def get_response(body: dict | None = None, status_code: int | None = None, output_format: str = "json") -> dict:
    if status_code is None:
        status_code = status_of(body or {})
    if not body:
        text = ""
    elif output_format == "text":
        text = render_text(body)
    else:
        text = dumps(body)
    return {
        "statusCode": status_code,
        "body": text,
        "headers": {"Content-Type": _CONTENT_TYPES.get(output_format, "application/json")},
    }


class Timer:
    """Logs how long a suite took; timings stay out of report bodies."""

    def __init__(self, suite: str):
        self.suite = suite

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        logger.info("%s finished in %.2fs", self.suite, time.perf_counter() - self.start)
        return False


def labelled(report: CheckReport, label: str) -> CheckReport:
    """Prefix a check name with the task it came from; bare documents keep the plain name."""
    if label == "document":
        return report
    return dataclasses.replace(report, name=f"{label}/{report.name}")
