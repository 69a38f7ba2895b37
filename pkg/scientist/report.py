"""Reconstruction reports: a CSV of observed against computed samples and
a self-contained SVG overlaying the two trajectories.

The observed values are drawn as a line and the computed values as dots.
"""
import csv
import logging

from lxml import etree

from .util import format_number

log = logging.getLogger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"
WIDTH, HEIGHT, MARGIN = 640, 400, 48
OBSERVED_COLOR = "#1f4e9c"
COMPUTED_COLOR = "#c62828"


def write_reconstruction_csv(observed, computed, path):
    """Columns k,q,x,q_rec,x_rec; the k=0 row holds x0 with empty states."""
    with open(path, "w") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("k", "q", "x", "q_rec", "x_rec"))
        writer.writerow((0, "", format_number(observed.x0), "", format_number(computed.x0)))
        for k, (seen, rebuilt) in enumerate(zip(observed.samples, computed.samples), start=1):
            writer.writerow((k, seen.q, format_number(seen.x), rebuilt.q, format_number(rebuilt.x)))


def _scaler(low, high, start, end):
    span = (high - low) or 1.0
    return lambda value: start + (value - low) * (end - start) / span


def _element(parent, tag, **attributes):
    node = etree.SubElement(parent, "{%s}%s" % (SVG_NS, tag))
    for name, value in attributes.items():
        node.set(name.replace("_", "-"), str(value))
    return node


def render_svg(observed, computed, title=""):
    """The SVG document as an lxml element tree root."""
    seen = observed.values()
    rebuilt = computed.values()
    low = min(min(seen), min(rebuilt))
    high = max(max(seen), max(rebuilt))
    to_x = _scaler(0, max(1, len(seen) - 1), MARGIN, WIDTH - MARGIN)
    to_y = _scaler(low, high, HEIGHT - MARGIN, MARGIN)

    root = etree.Element("{%s}svg" % SVG_NS, nsmap={None: SVG_NS})
    root.set("width", str(WIDTH))
    root.set("height", str(HEIGHT))
    root.set("viewBox", "0 0 {} {}".format(WIDTH, HEIGHT))
    if title:
        _element(root, "title").text = title
        heading = _element(root, "text", x=WIDTH / 2, y=MARGIN / 2, text_anchor="middle")
        heading.text = title

    axes = _element(root, "g", **{"class": "axes"})
    axes.set("stroke", "#444")
    _element(axes, "line", x1=MARGIN, y1=HEIGHT - MARGIN, x2=WIDTH - MARGIN, y2=HEIGHT - MARGIN)
    _element(axes, "line", x1=MARGIN, y1=MARGIN, x2=MARGIN, y2=HEIGHT - MARGIN)
    for value in (low, high):
        label = _element(root, "text", x=MARGIN - 6, y="%.2f" % to_y(value),
                         text_anchor="end", font_size=11)
        label.text = format_number(value)
    last = _element(root, "text", x=WIDTH - MARGIN, y=HEIGHT - MARGIN + 16,
                    text_anchor="end", font_size=11)
    last.text = "k = {}".format(len(seen) - 1)

    points = " ".join("%.2f,%.2f" % (to_x(k), to_y(x)) for k, x in enumerate(seen))
    _element(root, "polyline", points=points, fill="none", stroke=OBSERVED_COLOR,
             stroke_width=2, **{"class": "observed"})

    dots = _element(root, "g", fill=COMPUTED_COLOR, **{"class": "computed"})
    for k, x in enumerate(rebuilt):
        _element(dots, "circle", cx="%.2f" % to_x(k), cy="%.2f" % to_y(x), r=3.5)
    return root


def write_svg(observed, computed, path, title=""):
    """Write the overlay plot to `path`."""
    root = render_svg(observed, computed, title)
    with open(path, "wb") as handle:
        handle.write(etree.tostring(root, pretty_print=True, xml_declaration=True,
                                    encoding="utf-8"))
    log.debug("Wrote report plot %s", path)
