from helpers import reports, validation, workspace
from helpers.logging import logger
from relproj.amod import has_retraction
from relproj.linedesc import glue, is_line_object


def validate_params(event: dict) -> list[str]:
    return validation.require_document(event)


@validation.handle_errors
def handler(event: dict, context=None) -> dict:
    errors = validate_params(event)
    if errors:
        return reports.get_response({"errors": errors}, reports.INPUT_ERROR, event["format"])

    checks, result = [], {}
    for subject in workspace.subjects(event["document"], "descent", "glue"):
        datum = subject.object
        glued = glue(datum)
        logger.info("glued %s: dims %s", subject.label, glued.module.carrier.dims)
        checks.append(reports.labelled(glued.report, subject.label))
        line, line_report = is_line_object(datum.covering.base, glued.module)
        if subject.task.get("line", False):
            checks.append(reports.labelled(line_report, subject.label))
        result[subject.label] = {
            "module": workspace.to_module(glued.module),
            "line_object": line,
            "direct_summand": has_retraction(glued.inclusion),
        }

    body = reports.build_report("glue", checks, event["seed"], event["samples"], result)
    return reports.get_response(body, output_format=event["format"])
