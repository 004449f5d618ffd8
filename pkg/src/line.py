from helpers import reports, validation, workspace
from relproj.linedesc import is_line_object, signature


def validate_params(event: dict) -> list[str]:
    return validation.require_document(event)


@validation.handle_errors
def handler(event: dict, context=None) -> dict:
    errors = validate_params(event)
    if errors:
        return reports.get_response({"errors": errors}, reports.INPUT_ERROR, event["format"])

    checks, result = [], {}
    for subject in workspace.subjects(event["document"], "module", "line"):
        L = subject.object
        A = L.algebra
        _, report = is_line_object(A, L)
        checks.append(reports.labelled(report, subject.label))
        sign = signature(A, L)
        result[subject.label] = {
            "module": workspace.to_module(L),
            "invertible": report.details["invertible"],
            "signature": None if sign is None else workspace.to_vector(sign),
            "symtrivial": sign == A.unit,
        }

    body = reports.build_report("line", checks, event["seed"], event["samples"], result)
    return reports.get_response(body, output_format=event["format"])
