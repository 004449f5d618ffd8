import random

from helpers import reports, validation, workspace
from helpers.logging import logger
from relproj.errors import InputError
from relproj.proj import field_cover_check, random_point

_SAMPLES = 100


def validate_params(event: dict) -> list[str]:
    errors = validation.require_document(event)
    if event["samples"] is not None and event["samples"] < 1:
        errors.append("Invalid value for param 'samples': must be positive")
    return errors


@validation.handle_errors
def handler(event: dict, context=None) -> dict:
    errors = validate_params(event)
    if errors:
        return reports.get_response({"errors": errors}, reports.INPUT_ERROR, event["format"])

    samples = event["samples"] or _SAMPLES
    checks = []
    for subject in workspace.subjects(event["document"], "algebra", "proj fieldcover"):
        K, task, ws = subject.object, subject.task, subject.workspace
        n = int(task.get("n", 1))
        if n == 0:
            logger.warning("P^0 has a single point over every field object")
        if "points" in task:
            points = []
            for k, ref in enumerate(task["points"]):
                point, verdict = workspace.verify_spec(ws.get(ref, f"{subject.label}.points[{k}]", "point"))
                if point is None:
                    raise InputError("supplied point does not verify", location=f"{subject.label}.points[{k}]")
                points.append(point)
        else:
            rng = random.Random(event["seed"])
            points = [random_point(K, n, rng) for _ in range(samples)]
        checks.append(reports.labelled(field_cover_check(K, n, points), subject.label))

    body = reports.build_report("proj fieldcover", checks, event["seed"], samples)
    return reports.get_response(body, output_format=event["format"])
