import pandas as pd

from src.reports.models import VerificationReport


def blocks_frame(report: VerificationReport) -> pd.DataFrame:
    """
    The biderivation block table as a DataFrame, one row per block.
    """
    columns = ["γ", "ε", "l(ε)", "i", "unknowns", "rows", "rank", "nullity", "status"]
    if report.biderivations is None:
        return pd.DataFrame(columns=columns)
    rows = [
        [
            block.parity,
            "(" + ",".join(block.weight) + ")",
            block.level,
            block.degree,
            block.unknowns,
            block.rows_streamed,
            block.rank,
            block.nullity,
            block.status,
        ]
        for block in report.biderivations.blocks
    ]
    return pd.DataFrame(rows, columns=columns)


def predicates_frame(report: VerificationReport) -> pd.DataFrame:
    return pd.DataFrame(
        sorted(report.predicates.items()),
        columns=["check", "status"],
    )


def render_summary(report: VerificationReport, blocks: bool = False, nonzero_only: bool = True) -> str:
    """
    Human-readable summary derived from the report object.
    """
    lines = [
        f"{report.family}({report.n}) over {report.field}: {report.verdict}",
    ]
    if report.dimensions is not None:
        dims = report.dimensions
        lines.append(f"dim L = {dims.L}, dim L' = {dims.Lprime}, dim L0 = {dims.L0}, top degree = {dims.top_degree}")
    if report.biderivations is not None:
        nullities = ", ".join(f"γ={parity}: {total}" for parity, total in report.biderivations.nullity.items())
        lines.append(f"biderivation nullity {nullities}")
    if report.predicates:
        lines.append(predicates_frame(report).to_string(index=False))
    if blocks and report.biderivations is not None:
        frame = blocks_frame(report)
        if nonzero_only:
            frame = frame[(frame["nullity"] > 0) | (frame["status"] != "solved")]
        if not frame.empty:
            lines.append(frame.to_string(index=False))
    return "\n".join(lines)
