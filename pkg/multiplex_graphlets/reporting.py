"""Human-readable run reports rendered with Jinja2.

Reports carry no timestamps, so reruns of an equal config render identical text.
"""

import logging
from pathlib import Path
from typing import Any

from jinja2 import Environment, FileSystemLoader, TemplateNotFound, select_autoescape

from multiplex_graphlets.helpers.encoders import dumps
from multiplex_graphlets.metrics import ConsensusReport

logger = logging.getLogger(__name__)

CONSENSUS_TEMPLATE = "consensus_report.md.j2"
SYNTHETIC_TEMPLATE = "synthetic_summary.md.j2"


class ReportRenderer:
    """Renders Markdown report templates."""

    def __init__(self, template_dir: Path | None = None):
        """Initialize the renderer.

        Args:
            template_dir: Directory containing report templates.
                         Defaults to multiplex_graphlets/templates/
        """
        if template_dir is None:
            template_dir = Path(__file__).parent / "templates"

        self.template_dir = template_dir
        self.env = Environment(
            loader=FileSystemLoader(str(template_dir)),
            autoescape=select_autoescape(enabled_extensions=[]),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        self.env.filters["percent"] = self._percent_filter
        self.env.filters["signed"] = self._signed_filter

    def render(self, template_name: str, context: dict[str, Any] | None = None, **kwargs) -> str:
        """Render a template with the given context.

        Raises:
            TemplateNotFound: If the template file doesn't exist
        """
        try:
            template = self.env.get_template(template_name)
        except TemplateNotFound:
            logger.error("Template not found: %s", template_name)
            raise
        render_context = dict(context or {})
        render_context.update(kwargs)
        logger.debug("Rendering template '%s' with context keys: %s", template_name, sorted(render_context))
        return template.render(render_context)

    @staticmethod
    def _percent_filter(value: float, digits: int = 1) -> str:
        """Usage in templates: {{ 0.625|percent }} -> 62.5%"""
        return f"{100 * value:.{digits}f}%"

    @staticmethod
    def _signed_filter(sign: int) -> str:
        return {1: "+", -1: "-"}.get(sign, "mixed")


_renderer = None


def get_renderer() -> ReportRenderer:
    """Get or create the global renderer instance."""
    global _renderer
    if _renderer is None:
        _renderer = ReportRenderer()
    return _renderer


def render_consensus_report(report: ConsensusReport, title: str = "Consensus correlations", **context) -> str:
    """Markdown table of the retained pairs followed by the thresholds used."""
    return get_renderer().render(CONSENSUS_TEMPLATE, report=report, title=title, **context)


def write_consensus_report(
    report: ConsensusReport, out_dir: str | Path, stem: str = "consensus", **context
) -> tuple[Path, Path]:
    """Write ``<stem>.json`` and ``<stem>.md``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / f"{stem}.json"
    json_path.write_text(dumps(report.model_dump(mode="json")), encoding="utf-8")
    markdown_path = out_dir / f"{stem}.md"
    markdown_path.write_text(render_consensus_report(report, **context), encoding="utf-8")
    return json_path, markdown_path


def render_synthetic_summary(summary: dict[str, Any]) -> str:
    """Markdown summary of the synthetic separation experiment."""
    return get_renderer().render(SYNTHETIC_TEMPLATE, summary=summary)
