from helpers import reports, validation, workspace
from helpers.logging import logger
from relproj.linedesc import verify_covering

_SAMPLES = 8


def validate_params(event: dict) -> list[str]:
    errors = validation.require_document(event)
    if event["samples"] is not None and event["samples"] < 0:
        errors.append("Invalid value for param 'samples': must be nonnegative")
    return errors


@validation.handle_errors
def handler(event: dict, context=None) -> dict:
    errors = validate_params(event)
    if errors:
        return reports.get_response({"errors": errors}, reports.INPUT_ERROR, event["format"])

    samples = _SAMPLES if event["samples"] is None else event["samples"]
    checks = []
    for subject in workspace.subjects(event["document"], "covering", "cover"):
        logger.info("checking covering %s (%s legs)", subject.label, len(subject.object.legs))
        checks.append(reports.labelled(verify_covering(subject.object, event["seed"], samples), subject.label))

    body = reports.build_report("cover", checks, event["seed"], samples)
    return reports.get_response(body, output_format=event["format"])
