from helpers import reports, validation, workspace
from helpers.logging import logger
from relproj.linedesc import Covering
from relproj.proj import sheaf_condition_instance


def validate_params(event: dict) -> list[str]:
    return validation.require_document(event)


@validation.handle_errors
def handler(event: dict, context=None) -> dict:
    errors = validate_params(event)
    if errors:
        return reports.get_response({"errors": errors}, reports.INPUT_ERROR, event["format"])

    checks, result = [], {}
    for subject in workspace.subjects(event["document"], "covering", "proj glue"):
        cov, task, ws = subject.object, subject.task, subject.workspace
        points = []
        for k, ref in enumerate(task["points"]):
            spec = ws.get(ref, f"{subject.label}.points[{k}]", "point")
            point, verdict = workspace.verify_spec(spec)
            checks.append(reports.labelled(verdict, f"{subject.label}/points[{k}]"))
            points.append(point)
        if any(p is None for p in points):
            logger.warning("%s: a local point failed verification; nothing to glue", subject.label)
            result[subject.label] = None
            continue
        transitions = None
        if "transitions" in task:
            transitions = {
                (int(i), int(j)): workspace.transition_value(ws, value, f"{subject.label}.transitions[{k}]")
                for k, (i, j, value) in enumerate(task["transitions"])
            }
        glued, report = sheaf_condition_instance(cov, points, transitions)
        checks.append(reports.labelled(report, subject.label))
        result[subject.label] = None if glued is None else workspace.to_point(glued)

    body = reports.build_report("proj glue", checks, event["seed"], event["samples"], result)
    return reports.get_response(body, output_format=event["format"])
