import io

import numpy as np
import pytest

from sfcqmc.image import ImageBuffer, quantize, read_pnm, write_csv


def test_quantize_round_half_up():
    v = np.array([0.0, 0.5 / 255, 1.5 / 255, 127.5 / 255, 1.0, -0.2, 1.7])
    assert quantize(v).tolist() == [0, 1, 2, 128, 255, 0, 255]


def test_buffer_clamps_and_shapes():
    img = ImageBuffer(np.array([[-1.0, 2.0]]))
    assert img.data.tolist() == [[[0.0], [1.0]]]
    assert (img.width, img.height, img.channels) == (2, 1, 1)
    with pytest.raises(ValueError):
        ImageBuffer(np.zeros((2, 2, 2)))
    with pytest.raises(ValueError):
        ImageBuffer(np.zeros((0, 2)))
    with pytest.raises(ValueError):
        img.data[0, 0, 0] = 0.5


def test_pgm_bytes_flip_rows():
    # origin bottom-left: row 0 is written last
    img = ImageBuffer(np.array([[0.0, 1.0], [0.5, 0.25]]))
    raw = img.to_pnm()
    assert raw == b"P5\n2 2\n255\n" + bytes([128, 64, 0, 255])


def test_ppm_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    data = np.round(rng.random((3, 5, 3)) * 255) / 255
    path = tmp_path / "x.ppm"
    ImageBuffer(data).write_pnm(path)
    assert path.read_bytes().startswith(b"P6\n5 3\n255\n")
    back = read_pnm(path)
    assert np.allclose(back.data, data)


def test_read_pnm_rejects_other_formats():
    with pytest.raises(ValueError):
        read_pnm(b"P2\n1 1\n255\n0")


def test_csv_output():
    buf = io.StringIO()
    ImageBuffer(np.array([[0.25, 0.5]])).write_csv(buf, "metric")
    assert buf.getvalue() == "pixel_x,pixel_y,metric\n0,0,0.25\n1,0,0.5\n"
    buf = io.StringIO()
    write_csv(buf, ["a"], [[1], [2]])
    assert buf.getvalue() == "a\n1\n2\n"


def test_equality():
    assert ImageBuffer(np.zeros((2, 2))) == ImageBuffer.blank(2, 2)
    assert ImageBuffer(np.zeros((2, 2))) != ImageBuffer.blank(2, 2, value=0.1)
