# core/report.py
from io import BytesIO
import pandas as pd

DEFAULT_README = [
    "One sheet per check; every row is one instance.",
    "'match' is True when the computed value agreed with the expected one.",
]

def _safe_df(obj) -> pd.DataFrame:
    """Return a DataFrame no matter what we get (None, dict, list, etc.)."""
    if obj is None:
        return pd.DataFrame()
    if isinstance(obj, pd.DataFrame):
        return obj
    try:
        return pd.DataFrame(obj)
    except Exception:
        return pd.DataFrame()

def _prep_for_excel(df: pd.DataFrame) -> pd.DataFrame:
    """Make sure Excel can write it: tuples/lists become strings, None stays empty."""
    if df is None or df.empty:
        return pd.DataFrame()
    out = df.copy()
    for c in out.columns:
        s = out[c]
        if s.dtype == object:
            out[c] = s.map(lambda x: " ".join(map(str, x)) if isinstance(x, (tuple, list)) else x)
    return out

def _sheet_name(name: str, taken: set) -> str:
    base = name[:31]
    out, i = base, 1
    while out in taken:
        suffix = f"~{i}"
        out = base[: 31 - len(suffix)] + suffix
        i += 1
    taken.add(out)
    return out

def build_report(results: dict | None,
                 summary=None,
                 readme: list | None = None) -> bytes:
    """
    Excel workbook: Summary, one sheet per check (names cut to 31 chars), README.
    """
    summary = _prep_for_excel(_safe_df(summary))

    bio = BytesIO()
    taken = {"Summary", "README"}
    with pd.ExcelWriter(bio, engine="xlsxwriter") as xw:
        summary.to_excel(xw, sheet_name="Summary", index=False)
        for name, df in (results or {}).items():
            df = _prep_for_excel(_safe_df(df))
            if not df.empty:
                df.to_excel(xw, sheet_name=_sheet_name(name, taken), index=False)
        pd.DataFrame({"Info": list(readme or DEFAULT_README)}).to_excel(xw, sheet_name="README", index=False)

    bio.seek(0)
    return bio.getvalue()
