import io
import math
import xml.etree.ElementTree as ET

import pytest

from slitde.errors import ParseError
from slitde.problems import builtin
from slitde.quadrature import SweepRecord, sweep
from slitde.report import read_csv, records_to_csv, render_svg


def _records():
    out = []
    for method in ["de", "new"]:
        out.extend(sweep(builtin("p51"), method, [10, 20, 40]))
    out.append(SweepRecord("new2", 5, None, None, None, 12, "EvalError: boom, with comma"))
    return out


def test_csv_roundtrip_is_exact():
    records = _records()
    text = records_to_csv(records)
    assert text.splitlines()[0] == "method,n,h,value,abs_error,elapsed_ns,error"
    assert read_csv(io.StringIO(text)) == records


def test_csv_uses_17_digits():
    r = SweepRecord("new", 10, 0.1, 1 / 3, 0.0, 5)
    line = records_to_csv([r]).splitlines()[1]
    assert line == "new,10,0.10000000000000001,0.33333333333333331,0,5,"


def test_csv_is_deterministic():
    r = [SweepRecord("de", n, 0.5 / n, math.pi * n, 1e-3 / n, 100 * n) for n in (1, 2, 3)]
    assert records_to_csv(r) == records_to_csv(list(r))


def test_csv_bad_header():
    with pytest.raises(ParseError):
        read_csv(io.StringIO("a,b\n1,2\n"))
    with pytest.raises(ParseError):
        read_csv(io.StringIO("method,n,h,value,abs_error,elapsed_ns,error\nnew,x,,,,1,\n"))


def test_svg_is_wellformed_with_one_line_per_method():
    svg = render_svg(_records(), title="p51 <test>")
    root = ET.fromstring(svg)
    ns = {"s": "http://www.w3.org/2000/svg"}
    lines = root.findall("s:polyline", ns)
    assert len(lines) == 2
    for pl in lines:
        pts = pl.get("points").split()
        assert len(pts) == 3


def test_svg_empty():
    ET.fromstring(render_svg([]))
