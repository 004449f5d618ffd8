from helpers import reports, validation, workspace
from relproj.calg import endo, generated_ideal, maximal_ideal_above, partition_of_unity
from relproj.report import CheckReport


def validate_params(event: dict) -> list[str]:
    return validation.require_document(event)


def ideal_checks(A, generators: list) -> tuple[list[CheckReport], dict]:
    """Closure of the generated ideal, and the partition of unity agreeing with it being everything."""
    I = generated_ideal(A, generators)
    closed = CheckReport("ideal_closed", checked=1)
    if not I.is_closed():
        closed.fail({"reason": "generated subspace is not closed under multiplication"})
    if all(A.is_degree_zero(g) for g in generators):
        family, source = generators, "generators"
    else:
        # I is whole iff its identity-degree part generates A_e
        family, source = [v for v in I.subspace.vectors() if A.is_degree_zero(v)], "degree_zero_part"
    certificate = partition_of_unity(A, [endo(A, g) for g in family])
    agreement = CheckReport("partition_of_unity", checked=1, details={"family": source})
    if (certificate is not None) != I.is_whole():
        agreement.fail({"whole": I.is_whole(), "certificate": certificate is not None})
    result = {
        "dims": list(I.subspace.dims),
        "basis": [workspace.to_vector(v) for v in I.subspace.vectors()],
        "whole": I.is_whole(),
        "partition_family": [workspace.to_vector(v) for v in family],
        "partition_of_unity": None if certificate is None else [workspace.to_vector(s.element) for s in certificate],
    }
    if not I.is_whole():
        result["maximal_ideal_above"] = list(maximal_ideal_above(A, I).subspace.dims)
    return [closed, agreement], result


@validation.handle_errors
def handler(event: dict, context=None) -> dict:
    errors = validate_params(event)
    if errors:
        return reports.get_response({"errors": errors}, reports.INPUT_ERROR, event["format"])

    checks, result = [], {}
    for subject in workspace.subjects(event["document"], "algebra", "ideal"):
        A = subject.object
        gens = [
            workspace.element(A, g, f"{subject.label}.generators[{k}]")
            for k, g in enumerate(subject.task["generators"])
        ]
        found, result[subject.label] = ideal_checks(A, gens)
        checks += [reports.labelled(c, subject.label) for c in found]

    body = reports.build_report("ideal", checks, event["seed"], event["samples"], result)
    return reports.get_response(body, output_format=event["format"])
