from flows import acceptance
from helpers import reports, validation


def validate_params(event: dict) -> list[str]:
    if event["samples"] is not None and event["samples"] < 1:
        return ["Invalid value for param 'samples': must be positive"]
    return []


@validation.handle_errors
def handler(event: dict, context=None) -> dict:
    errors = validate_params(event)
    if errors:
        return reports.get_response({"errors": errors}, reports.INPUT_ERROR, event["format"])

    with reports.Timer("suite all"):
        checks = acceptance.run(event["seed"], event["samples"])

    body = reports.build_report("suite all", checks, event["seed"], event["samples"])
    return reports.get_response(body, output_format=event["format"])
