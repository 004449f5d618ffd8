from helpers import reports, validation, workspace
from relproj.calg import ground_algebra
from relproj.proj import transition
from relproj.report import CheckReport

_FIELDS = ("n", "from", "to", "coords")


def validate_params(event: dict) -> list[str]:
    if event["document"]:
        return []
    params = event["params"]
    errors = [f"Missing param: '{key}'" for key in _FIELDS if params.get(key) is None]
    if not errors and len(params["coords"]) != params["n"]:
        errors.append(f"Invalid value for param 'coords': P^{params['n']} needs {params['n']} coordinates")
    return errors


def transition_task(A, task: dict, where: str) -> tuple[CheckReport, list]:
    n, i, j = int(task["n"]), int(task["from"]), int(task["to"])
    coords = [workspace.element(A, c, f"{where}.coords[{k}]") for k, c in enumerate(task["coords"])]
    moved = transition(A, n, i, j, coords)
    report = CheckReport("transition_inverse", checked=1)
    if list(transition(A, n, j, i, moved)) != coords:
        report.fail({"from": i, "to": j, "reason": "moving back does not recover the coordinates"})
    if A.dimension == 1:
        return report, [c[0] for c in moved]
    return report, workspace.to_coords(moved)


@validation.handle_errors
def handler(event: dict, context=None) -> dict:
    errors = validate_params(event)
    if errors:
        return reports.get_response({"errors": errors}, reports.INPUT_ERROR, event["format"])

    checks, result = [], {}
    document = event["document"]
    if not document:
        report, result["coords"] = transition_task(ground_algebra(), event["params"], "params")
        checks.append(report)
    elif "objects" not in document:
        ws = workspace.Workspace()
        A = ws.algebra(document, "document", default=ground_algebra)
        report, result["coords"] = transition_task(A, document, "document")
        checks.append(report)
    else:
        ws = workspace.Workspace(document)
        for k, task in enumerate(ws.tasks):
            if task.get("command", "proj transition") != "proj transition":
                continue
            label = task.get("name", f"tasks[{k}]")
            A = ws.algebra(task, label, default=ground_algebra)
            report, result[label] = transition_task(A, task, label)
            checks.append(reports.labelled(report, label))

    body = reports.build_report("proj transition", checks, event["seed"], event["samples"], result)
    return reports.get_response(body, output_format=event["format"])
