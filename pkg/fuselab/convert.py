from typing import Any, Dict, List, Optional, Union

from jinja2 import Environment, PackageLoader

from fuselab import defaults, models


def significant_digits(value: Optional[Union[int, float]]) -> str:
    """Format a number with defaults.CSV_SIGNIFICANT_DIGITS significant digits

    Parameters
    ----------
    value: Optional[Union[int, float]]
        The number (None renders as an empty field)

    Returns
    -------
    str
        The formatted number
    """

    if value is None:
        return ""
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return f"{float(value):.{defaults.CSV_SIGNIFICANT_DIGITS}g}"


class CsvFile:
    """A class for rendering the CSV result files from templates

    Attributes
    ----------
    env: jinja2.Environment
        A jinja2 Environment, that makes the templates available

    """

    def __init__(self, enable_async: bool = True) -> None:
        """Initialize an instance of CsvFile

        Parameters
        ----------
        enable_async: bool
            A bool indicating whether the jinja2.Environment is instantiated with enable_async (defaults to True)
        """

        self.env = Environment(
            loader=PackageLoader("fuselab", "templates"),
            trim_blocks=True,
            lstrip_blocks=True,
            enable_async=enable_async,
            autoescape=False,
        )
        self.env.filters["sig9"] = significant_digits

    async def _render(self, template_name: str, rows: List[Dict[str, Any]]) -> str:
        template = self.env.get_template(template_name)
        return str(await template.render_async(rows=rows))

    async def render_roc(self, curve: models.RocCurve) -> str:
        """Render the Monte Carlo ROC points of every statistic

        Parameters
        ----------
        curve: models.RocCurve
            The ROCs

        Returns
        -------
        str
            The content of the ROC CSV file
        """

        rows = [
            {"statistic": kind.value, **point.dict()} for kind, points in curve.points.items() for point in points
        ]
        return await self._render("roc.csv.j2", rows)

    async def render_roc_weak(self, curve: models.RocCurve) -> str:
        return await self._render("roc_weak.csv.j2", [prediction.dict() for prediction in curve.weak_signal])

    async def render_pdk(self, sweep: models.SweepResult) -> str:
        """Render the rows of a detection-vs-K sweep

        Parameters
        ----------
        sweep: models.SweepResult
            The sweep

        Returns
        -------
        str
            The content of the sweep CSV file
        """

        return await self._render("pdk.csv.j2", [row.dict() for row in sweep.rows])

    async def render_asymptotic(self, rows: List[models.AsymptoticRow]) -> str:
        return await self._render("asymptotic.csv.j2", [row.dict() for row in rows])

    async def render_gtrace(self, rows: List[Dict[str, Any]]) -> str:
        """Render threshold objective traces

        Parameters
        ----------
        rows: List[Dict[str, Any]]
            Dicts with the keys sensor, pe, tau and g

        Returns
        -------
        str
            The content of the trace CSV file
        """

        return await self._render("gtrace.csv.j2", rows)
