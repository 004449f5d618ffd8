from helpers import reports, validation, workspace
from relproj.proj import (
    chart_coordinates,
    chart_membership,
    dualize_point,
    dualize_point_inv,
    points_equal,
    quotient_chart_coordinates,
    quotient_chart_membership,
    quotients_equal,
)
from relproj.report import CheckReport


def validate_params(event: dict) -> list[str]:
    return validation.require_document(event)


def duality_report(q, p) -> CheckReport:
    """q and its dual p = Psi(q) share chart memberships and chart coordinates."""
    report = CheckReport("dual_charts")
    for i in range(q.n + 1):
        report.checked += 1
        inside = quotient_chart_membership(q, i)
        if inside != chart_membership(p, i):
            report.fail({"chart": i, "reason": "membership differs"})
            continue
        if inside and quotient_chart_coordinates(q, i).coords != chart_coordinates(p, i).coords:
            report.fail({"chart": i, "reason": "coordinates differ"})
    return report


@validation.handle_errors
def handler(event: dict, context=None) -> dict:
    errors = validate_params(event)
    if errors:
        return reports.get_response({"errors": errors}, reports.INPUT_ERROR, event["format"])

    checks, result = [], {}
    for subject in workspace.subjects(event["document"], "point", "proj dualize"):
        spec = subject.object
        point, verdict = workspace.verify_spec(spec)
        checks.append(reports.labelled(verdict, subject.label))
        if point is None:
            result[subject.label] = None
            continue
        round_trip = CheckReport("dual_round_trip", checked=1)
        if spec.quotient:
            q, p = point, dualize_point(point)
            back = quotients_equal(dualize_point_inv(p), q)
            image = p
        else:
            p, q = point, dualize_point_inv(point)
            back = points_equal(dualize_point(q), p)
            image = q
        if not back:
            round_trip.fail({"reason": "dualizing twice does not recover the point"})
        checks += [reports.labelled(round_trip, subject.label), reports.labelled(duality_report(q, p), subject.label)]
        result[subject.label] = workspace.to_point(image)

    body = reports.build_report("proj dualize", checks, event["seed"], event["samples"], result)
    return reports.get_response(body, output_format=event["format"])
