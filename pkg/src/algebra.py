from helpers import reports, validation, workspace
from helpers.logging import logger
from relproj.calg import check_algebra_axioms, is_field_object, maximal_ideals, underlying_identities

_TRIALS = 1000


def validate_params(event: dict) -> list[str]:
    errors = validation.require_document(event)
    if event["samples"] is not None and event["samples"] < 1:
        errors.append("Invalid value for param 'samples': must be positive")
    return errors


def summary(A) -> dict:
    return {
        "name": A.name,
        "dims": list(A.carrier.dims),
        "field_object": A.dimension > 0 and is_field_object(A),
        "maximal_ideals": [list(I.subspace.dims) for I in maximal_ideals(A)],
    }


@validation.handle_errors
def handler(event: dict, context=None) -> dict:
    errors = validate_params(event)
    if errors:
        return reports.get_response({"errors": errors}, reports.INPUT_ERROR, event["format"])

    trials = event["samples"] or _TRIALS
    checks, result = [], {}
    for subject in workspace.subjects(event["document"], "algebra", "algebra"):
        A = subject.object
        logger.info("checking algebra %s", subject.label)
        checks.append(reports.labelled(check_algebra_axioms(A), subject.label))
        # alternativity and the norm only make sense for composition algebras
        if subject.task.get("identities", A.name == "octonions"):
            checks.append(reports.labelled(underlying_identities(A, trials, event["seed"]), subject.label))
        result[subject.label] = summary(A)

    body = reports.build_report("algebra", checks, event["seed"], trials, result)
    return reports.get_response(body, output_format=event["format"])
