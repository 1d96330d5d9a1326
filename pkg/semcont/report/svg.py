"""Minimal SVG writer: fixed viewBox, fixed number formatting, no renderer."""

from xml.sax.saxutils import escape, quoteattr


class SVG:
    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.parts: list[str] = []

    def line(self, x1: float, y1: float, x2: float, y2: float, stroke: str = "#000000", width: float = 1.0) -> None:
        self.parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="{stroke}" stroke-width="{width:.2f}"/>'
        )

    def rect(self, x: float, y: float, w: float, h: float, fill: str, stroke: str = "none") -> None:
        self.parts.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{w:.2f}" height="{h:.2f}" fill="{fill}" stroke="{stroke}"/>'
        )

    def polyline(self, points: list[tuple[float, float]], stroke: str, width: float = 1.5, dash: str | None = None) -> None:
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="{width:.2f}"{dash_attr}/>'
        )

    def text(self, x: float, y: float, content: str, size: int = 12, anchor: str = "start", extra: str = "") -> None:
        extra = f" {extra}" if extra else ""
        self.parts.append(
            f'<text x="{x:.2f}" y="{y:.2f}" font-family="sans-serif" font-size="{size}" '
            f'text-anchor="{anchor}"{extra}>{escape(content)}</text>'
        )

    def image(self, x: float, y: float, w: float, h: float, href: str) -> None:
        self.parts.append(
            f'<image x="{x:.2f}" y="{y:.2f}" width="{w:.2f}" height="{h:.2f}" href={quoteattr(href)}/>'
        )

    def render(self) -> str:
        header = (
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">'
        )
        return "\n".join([header, *self.parts, "</svg>"]) + "\n"
