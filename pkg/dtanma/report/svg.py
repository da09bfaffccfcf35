"""
Minimal SVG Document Builder
"""

import logging
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

SVG_NAMESPACE = "http://www.w3.org/2000/svg"

ET.register_namespace("", SVG_NAMESPACE)

Point = Tuple[float, float]


def _number(value: float) -> str:
    return f"{value:.2f}"


class SvgDocument:
    """
    A self-contained SVG drawing with fixed-precision coordinates

    Every shape carries a `class` attribute so figures can be inspected
    element by element.
    """

    def __init__(self, width: float, height: float, title: Optional[str] = None) -> None:
        self.width = width
        self.height = height
        self.root = ET.Element(
            f"{{{SVG_NAMESPACE}}}svg",
            {
                "width": _number(width),
                "height": _number(height),
                "viewBox": f"0 0 {_number(width)} {_number(height)}",
            },
        )
        if title:
            ET.SubElement(self.root, f"{{{SVG_NAMESPACE}}}title").text = title

    def _add(self, tag: str, parent: Optional[ET.Element], **attributes: str) -> ET.Element:
        target = self.root if parent is None else parent
        return ET.SubElement(
            target,
            f"{{{SVG_NAMESPACE}}}{tag}",
            {key.replace("_", "-"): value for key, value in attributes.items()},
        )

    def group(self, css_class: str, parent: Optional[ET.Element] = None) -> ET.Element:
        return self._add("g", parent, **{"class": css_class})

    def line(
        self,
        start: Point,
        end: Point,
        css_class: str,
        stroke: str = "#000000",
        width: float = 1.0,
        parent: Optional[ET.Element] = None,
    ) -> ET.Element:
        return self._add(
            "line",
            parent,
            x1=_number(start[0]),
            y1=_number(start[1]),
            x2=_number(end[0]),
            y2=_number(end[1]),
            stroke=stroke,
            stroke_width=_number(width),
            **{"class": css_class},
        )

    def circle(
        self,
        center: Point,
        radius: float,
        css_class: str,
        fill: str = "#000000",
        parent: Optional[ET.Element] = None,
        **attributes: str,
    ) -> ET.Element:
        return self._add(
            "circle",
            parent,
            cx=_number(center[0]),
            cy=_number(center[1]),
            r=_number(radius),
            fill=fill,
            **{"class": css_class},
            **attributes,
        )

    def polygon(
        self,
        points: Sequence[Point],
        css_class: str,
        fill: str = "#000000",
        parent: Optional[ET.Element] = None,
    ) -> ET.Element:
        return self._add(
            "polygon",
            parent,
            points=" ".join(f"{_number(x)},{_number(y)}" for x, y in points),
            fill=fill,
            **{"class": css_class},
        )

    def polyline(
        self,
        points: Sequence[Point],
        css_class: str,
        stroke: str = "#000000",
        width: float = 1.0,
        parent: Optional[ET.Element] = None,
    ) -> ET.Element:
        return self._add(
            "polyline",
            parent,
            points=" ".join(f"{_number(x)},{_number(y)}" for x, y in points),
            fill="none",
            stroke=stroke,
            stroke_width=_number(width),
            **{"class": css_class},
        )

    def text(
        self,
        position: Point,
        content: str,
        css_class: str = "label",
        anchor: str = "middle",
        size: float = 11.0,
        parent: Optional[ET.Element] = None,
    ) -> ET.Element:
        element = self._add(
            "text",
            parent,
            x=_number(position[0]),
            y=_number(position[1]),
            text_anchor=anchor,
            font_size=_number(size),
            font_family="sans-serif",
            **{"class": css_class},
        )
        element.text = content
        return element

    def to_string(self) -> str:
        return ET.tostring(self.root, encoding="unicode")

    def write(self, path: Union[str, Path]) -> Path:
        """
        Write the document as UTF-8 XML
        """
        path = Path(path)
        tree = ET.ElementTree(self.root)
        tree.write(path, encoding="utf-8", xml_declaration=True)
        logger.info("Figure written: %s", path)
        return path
