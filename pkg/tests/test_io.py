import numpy as np
import pytest

from shoaltrack.geometry import BoundingBox
from shoaltrack.io import (
    MotParseError,
    SequenceAnnotations,
    parse_mot,
    render_histogram_svg,
    render_report_csv,
    render_report_table,
    write_histogram_csv,
    write_mot,
)
from shoaltrack.locomotion import DirectionSample, Histogram, direction_histogram


def lines(text):
    return text.strip("\n").splitlines(keepends=True)


def test_parse_detection_line():
    ann = parse_mot(lines("1,-1,10,20,30,40,0.9,-1,-1,-1"), "detections")
    assert ann.frame_ids() == [1]
    entry = ann.frames[1][0]
    assert entry.identity is None
    assert entry.box == BoundingBox(10, 20, 30, 40)
    assert entry.score == 0.9


def test_parse_ignores_trailing_columns_and_blank_lines():
    ann = parse_mot(lines("1,5,1,2,3,4,1,-1,-1,-1,extra,cols\n\n2,5,1,2,3,4,1"), "tracks")
    assert ann.num_boxes() == 2


def test_duplicate_identity_rejected_with_line_number():
    text = "1,5,10,20,30,40,1\n1,5,11,21,30,40,1"
    with pytest.raises(MotParseError) as err:
        parse_mot(lines(text), "tracks")
    assert err.value.line_number == 2
    assert "duplicate" in str(err.value)


def test_duplicate_id_tolerated_for_detections():
    text = "1,7,10,20,30,40,1\n1,7,11,21,30,40,1"
    ann = parse_mot(lines(text), "detections")
    assert ann.num_boxes() == 2


def test_non_numeric_field_rejected():
    with pytest.raises(MotParseError) as err:
        parse_mot(lines("1,1,a,2,3,4,1"), "tracks")
    assert err.value.line_number == 1


def test_frame_below_one_rejected():
    with pytest.raises(MotParseError):
        parse_mot(lines("0,1,1,2,3,4,1"), "tracks")


def test_negative_box_size_rejected():
    with pytest.raises(MotParseError):
        parse_mot(lines("1,1,1,2,-3,4,1"), "tracks")


def test_too_few_columns_rejected():
    with pytest.raises(MotParseError):
        parse_mot(lines("1,1,1,2,3,4"), "tracks")


def test_write_empty():
    assert write_mot(SequenceAnnotations(), "tracks") == ""


def test_write_single_line_has_ten_fields():
    ann = SequenceAnnotations()
    ann.add(3, 9, BoundingBox(1, 2, 3, 4), 0.5)
    out = write_mot(ann, "tracks")
    assert out.count("\n") == 1
    assert len(out.strip().split(",")) == 10


def test_round_trip_preserves_values():
    ann = SequenceAnnotations()
    rng = np.random.default_rng(3)
    for frame in range(1, 6):
        for ident in range(1, 4):
            ann.add(frame, ident, BoundingBox(*rng.uniform(0, 100, 4)), float(rng.uniform()))
    text = write_mot(ann, "tracks")
    again = parse_mot(lines(text), "tracks")
    assert write_mot(again, "tracks") == text
    for frame in ann.frames:
        for a, b in zip(sorted(ann.frames[frame]), sorted(again.frames[frame])):
            assert a.identity == b.identity
            assert a.box.left == pytest.approx(b.box.left, abs=1e-6)
            assert a.score == pytest.approx(b.score, abs=1e-6)


def test_write_is_sorted_and_idempotent():
    ann = SequenceAnnotations()
    ann.add(2, 1, BoundingBox(0, 0, 5, 5))
    ann.add(1, 2, BoundingBox(0, 0, 5, 5))
    ann.add(1, 1, BoundingBox(9, 9, 5, 5))
    text = write_mot(ann, "tracks")
    first_fields = [line.split(",")[:2] for line in text.strip().splitlines()]
    assert first_fields == [["1", "1"], ["1", "2"], ["2", "1"]]
    assert write_mot(parse_mot(lines(text), "tracks"), "tracks") == text


def test_histogram_csv_two_bins():
    hist = Histogram(np.array([0.0, 1.0, 2.0]), np.array([1, 1]), np.array([0.5, 0.5]))
    out = write_histogram_csv(hist).splitlines()
    assert out[0] == "bin_left,bin_right,count,weight"
    assert out[1] == "0.000000,1.000000,1,0.500000000"
    assert out[2] == "1.000000,2.000000,1,0.500000000"


def test_histogram_csv_empty_weights():
    hist = Histogram(np.array([0.0, 1.0]), np.array([0]), None)
    out = write_histogram_csv(hist).splitlines()
    assert out[1] == "0.000000,1.000000,0,"


def test_default_direction_histogram_layout():
    samples = [DirectionSample(0.0, 1.0, 1, 1)]
    out = write_histogram_csv(direction_histogram(samples)).splitlines()
    assert len(out) == 19  # header + 18 bins
    assert out[1].startswith("-90.000000,-80.000000,")
    assert out[-1].startswith("80.000000,90.000000,")


def test_report_renderers():
    report = {"mota": 0.85, "idsw": 1}
    assert render_report_csv(report) == "metric,value\nmota,0.850000\nidsw,1\n"
    table = render_report_table(report)
    assert "mota" in table and "0.850000" in table


def test_svg_renderer_is_selfcontained():
    hist = Histogram(np.array([0.0, 1.0, 2.0]), np.array([3, 1]), np.array([0.75, 0.25]))
    svg = render_histogram_svg(hist, title="demo")
    assert svg.startswith("<svg")
    assert 'width="800" height="400"' in svg
    assert svg.count("<rect") == 3  # background + 2 bars
    assert "http" not in svg.replace("http://www.w3.org/2000/svg", "")
