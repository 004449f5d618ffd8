from helpers import reports, validation, workspace
from helpers.logging import logger
from relproj.cochain_core import braiding, check_hexagon, check_normalized, check_pentagon, coboundary3
from relproj.graded_linear import coherence_spot_check


def validate_params(event: dict) -> list[str]:
    return validation.require_document(event)


def cochain_checks(F) -> list:
    phi = coboundary3(F)
    return [
        check_normalized(F),
        check_pentagon(phi),
        check_hexagon(F, phi),
        coherence_spot_check(phi, braiding(F)),
    ]


@validation.handle_errors
def handler(event: dict, context=None) -> dict:
    errors = validate_params(event)
    if errors:
        return reports.get_response({"errors": errors}, reports.INPUT_ERROR, event["format"])

    checks = []
    for subject in workspace.subjects(event["document"], "cochain", "axioms"):
        logger.info("checking axioms for %s", subject.label)
        checks += [reports.labelled(c, subject.label) for c in cochain_checks(subject.object)]

    body = reports.build_report("axioms", checks, event["seed"], event["samples"])
    return reports.get_response(body, output_format=event["format"])
