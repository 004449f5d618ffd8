from helpers import reports, validation, workspace
from helpers.logging import logger
from relproj.proj import chart_membership, quotient_chart_membership


def validate_params(event: dict) -> list[str]:
    return validation.require_document(event)


@validation.handle_errors
def handler(event: dict, context=None) -> dict:
    errors = validate_params(event)
    if errors:
        return reports.get_response({"errors": errors}, reports.INPUT_ERROR, event["format"])

    checks, result = [], {}
    for subject in workspace.subjects(event["document"], "point", "proj verify"):
        spec = subject.object
        if spec.n == 0:
            logger.warning("P^0 has a single point over every field object")
        point, report = workspace.verify_spec(spec)
        checks.append(reports.labelled(report, subject.label))
        if point is None:
            result[subject.label] = None
            continue
        member = quotient_chart_membership if spec.quotient else chart_membership
        result[subject.label] = {
            **workspace.to_point(point),
            "charts": [i for i in range(point.n + 1) if member(point, i)],
        }

    body = reports.build_report("proj verify", checks, event["seed"], event["samples"], result)
    return reports.get_response(body, output_format=event["format"])
