from helpers import reports, validation, workspace
from relproj.calg import (
    AlgebraMap,
    check_algebra_axioms,
    check_algebra_map,
    element_inverse,
    endo,
    factor_through_localization,
    identity_algebra_map,
    inverse_in_localization,
    localize,
)
from relproj.errors import InputError
from relproj.report import CheckReport


def validate_params(event: dict) -> list[str]:
    return validation.require_document(event)


def localization_checks(A, f, targets: list[AlgebraMap]) -> tuple[list[CheckReport], dict]:
    loc = localize(A, endo(A, f))
    inverted = CheckReport("localization_inverts", checked=1)
    inverse = inverse_in_localization(loc.map)
    if inverse is None:
        inverted.fail({"element": workspace.to_vector(f), "reason": "image is not invertible"})
    universal = CheckReport("universal_property")
    factored = []
    for k, v in enumerate(targets):
        if v.source is not A:
            raise InputError("test target does not start at the localized algebra", location=f"targets[{k}]")
        universal.checked += 1
        w = factor_through_localization(loc.map, v)
        factored.append(w is not None)
        inverts = element_inverse(v.target, v.apply(f)) is not None
        if (w is None) == inverts:
            universal.fail({"target": k, "inverts": inverts, "factored": w is not None})
    checks = [check_algebra_map(loc.map), check_algebra_axioms(loc.algebra), inverted, universal]
    result = {
        "dims": list(loc.algebra.carrier.dims),
        "exponent": loc.map.details["exponent"],
        "inverse": None if inverse is None else workspace.to_vector(inverse),
        "factored": factored,
    }
    return checks, result


@validation.handle_errors
def handler(event: dict, context=None) -> dict:
    errors = validate_params(event)
    if errors:
        return reports.get_response({"errors": errors}, reports.INPUT_ERROR, event["format"])

    checks, result = [], {}
    for subject in workspace.subjects(event["document"], "algebra", "localize"):
        A, task, ws = subject.object, subject.task, subject.workspace
        f = workspace.element(A, task["element"], f"{subject.label}.element")
        targets = [ws.typed(t, AlgebraMap, f"{subject.label}.targets[{k}]") for k, t in enumerate(task.get("targets", []))]
        if task.get("identity_target", True):
            targets.append(identity_algebra_map(A))
        found, result[subject.label] = localization_checks(A, f, targets)
        checks += [reports.labelled(c, subject.label) for c in found]

    body = reports.build_report("localize", checks, event["seed"], event["samples"], result)
    return reports.get_response(body, output_format=event["format"])
