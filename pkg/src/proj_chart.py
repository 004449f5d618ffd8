from helpers import reports, validation, workspace
from relproj.errors import InputError
from relproj.proj import (
    chart_coordinates,
    chart_membership,
    point_from_chart,
    points_equal,
    quotient_chart_coordinates,
    quotient_chart_membership,
)
from relproj.report import CheckReport


def validate_params(event: dict) -> list[str]:
    return validation.require_document(event)


def chart_report(point, quotient: bool, charts: list[int]) -> tuple[CheckReport, dict]:
    """Coordinates in every requested chart; sub points must come back from their own coordinates."""
    report = CheckReport("chart_round_trip")
    member = quotient_chart_membership if quotient else chart_membership
    coordinates = quotient_chart_coordinates if quotient else chart_coordinates
    found = {}
    for i in charts:
        if not member(point, i):
            found[i] = None
            continue
        coords = coordinates(point, i).coords
        found[i] = workspace.to_coords(coords)
        if quotient:
            continue
        report.checked += 1
        if not points_equal(point_from_chart(point.algebra, point.n, i, coords), point):
            report.fail({"chart": i, "reason": "chart coordinates do not recover the point"})
    return report, found


@validation.handle_errors
def handler(event: dict, context=None) -> dict:
    errors = validate_params(event)
    if errors:
        return reports.get_response({"errors": errors}, reports.INPUT_ERROR, event["format"])

    checks, result = [], {}
    for subject in workspace.subjects(event["document"], "point", "proj chart"):
        spec = subject.object
        point, verdict = workspace.verify_spec(spec)
        checks.append(reports.labelled(verdict, subject.label))
        if point is None:
            result[subject.label] = None
            continue
        requested = subject.task.get("index")
        if requested is None:
            charts = list(range(point.n + 1))
        else:
            charts = [int(requested)]
            member = quotient_chart_membership if spec.quotient else chart_membership
            if not member(point, charts[0]):
                raise InputError(f"point is not in chart {requested}", location=f"{subject.label}.index")
        report, found = chart_report(point, spec.quotient, charts)
        checks.append(reports.labelled(report, subject.label))
        result[subject.label] = {str(i): coords for i, coords in found.items()}

    body = reports.build_report("proj chart", checks, event["seed"], event["samples"], result)
    return reports.get_response(body, output_format=event["format"])
