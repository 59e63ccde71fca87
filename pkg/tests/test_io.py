import struct

import numpy as np
import pytest
from PIL import Image

from ffmkit import (
    CorruptFile,
    NotBinaryMask,
    OutOfRange,
    UnsupportedFormat,
    export_png16,
    read_ffm,
    read_image,
    read_mask,
    read_probability_map,
    write_ffm,
    write_mask,
)


class TestReadImage:
    def test_p5_bytes(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255, 128, 64]))
        assert np.array_equal(read_image(path), [[0, 255], [128, 64]])

    def test_p2_ascii(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_text("P2\n# comment\n3 1\n255\n7 8 9\n")
        assert np.array_equal(read_image(path), [[7, 8, 9]])

    def test_wrong_maxval(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_bytes(b"P5\n2 2\n254\n" + bytes(4))
        with pytest.raises(UnsupportedFormat):
            read_image(path)

    def test_truncated_payload(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_bytes(b"P5\n2 2\n255\n" + bytes(3))
        with pytest.raises(CorruptFile):
            read_image(path)

    def test_png_roundtrip(self, tmp_path, rng):
        arr = rng.integers(0, 256, (9, 7), np.uint8)
        path = tmp_path / "img.png"
        Image.fromarray(arr, mode="L").save(path)
        assert np.array_equal(read_image(path), arr)

    def test_color_png_rejected(self, tmp_path, rng):
        arr = rng.integers(0, 256, (4, 4, 3), np.uint8)
        path = tmp_path / "color.png"
        Image.fromarray(arr, mode="RGB").save(path)
        with pytest.raises(UnsupportedFormat):
            read_image(path)

    def test_sixteen_bit_png_rejected(self, tmp_path):
        arr = np.arange(16, dtype=np.uint16).reshape(4, 4)
        path = tmp_path / "deep.png"
        Image.fromarray(arr).save(path)
        with pytest.raises(UnsupportedFormat):
            read_image(path)

    def test_unknown_format(self, tmp_path):
        path = tmp_path / "data.bin"
        path.write_bytes(b"GIF89a....")
        with pytest.raises(UnsupportedFormat):
            read_image(path)


class TestReadMask:
    def test_valid_mask(self, tmp_path):
        path = tmp_path / "m.pgm"
        path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255, 255, 0]))
        assert np.array_equal(read_mask(path), [[0, 1], [1, 0]])

    def test_intermediate_value_rejected(self, tmp_path):
        path = tmp_path / "m.pgm"
        path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 7, 255, 0]))
        with pytest.raises(NotBinaryMask):
            read_mask(path)

    def test_write_read_cycle(self, tmp_path, rng):
        mask = (rng.random((6, 9)) < 0.5).astype(np.uint8)
        path = tmp_path / "m.pgm"
        write_mask(mask, path)
        assert np.array_equal(read_mask(path), mask)


class TestFfmContainer:
    def test_roundtrip_is_bit_exact(self, tmp_path, rng):
        path = tmp_path / "map.ffm"
        for _ in range(20):
            arr = rng.normal(size=(int(rng.integers(1, 9)),
                                   int(rng.integers(1, 9)))).astype(np.float32)
            write_ffm(arr, path)
            back = read_ffm(path)
            assert back.dtype == np.float32
            assert np.array_equal(back.view(np.uint32), arr.view(np.uint32))

    def test_exact_bytes_for_single_value(self, tmp_path):
        path = tmp_path / "one.ffm"
        write_ffm(np.array([[0.5]], np.float32), path)
        data = path.read_bytes()
        assert len(data) == 16
        assert data == b"FFM1" + struct.pack("<II", 1, 1) + struct.pack("<f", 0.5)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.ffm"
        path.write_bytes(b"XXM1" + struct.pack("<II", 1, 1) + struct.pack("<f", 1.0))
        with pytest.raises(CorruptFile):
            read_ffm(path)

    def test_truncated_payload(self, tmp_path):
        path = tmp_path / "short.ffm"
        path.write_bytes(b"FFM1" + struct.pack("<II", 2, 2) + struct.pack("<f", 1.0))
        with pytest.raises(CorruptFile):
            read_ffm(path)

    def test_trailing_garbage(self, tmp_path):
        path = tmp_path / "long.ffm"
        path.write_bytes(
            b"FFM1" + struct.pack("<II", 1, 1) + struct.pack("<f", 1.0) + b"x"
        )
        with pytest.raises(CorruptFile):
            read_ffm(path)

    def test_non_finite_payload_rejected(self, tmp_path):
        path = tmp_path / "nan.ffm"
        path.write_bytes(
            b"FFM1" + struct.pack("<II", 1, 1) + struct.pack("<f", float("nan"))
        )
        with pytest.raises(CorruptFile):
            read_ffm(path)

    def test_write_rejects_non_finite(self, tmp_path):
        with pytest.raises(ValueError):
            write_ffm(np.array([[np.inf]]), tmp_path / "inf.ffm")


class TestPng16:
    def test_value_mapping(self, tmp_path):
        path = tmp_path / "v.png"
        export_png16(np.array([[0.0, 0.5, 1.0]]), path)
        back = np.asarray(Image.open(path))
        assert back.tolist() == [[0, 32768, 65535]]

    def test_out_of_range(self, tmp_path):
        with pytest.raises(OutOfRange):
            export_png16(np.array([[1.5]]), tmp_path / "x.png")
        with pytest.raises(OutOfRange):
            export_png16(np.array([[-0.1]]), tmp_path / "x.png")

    def test_deterministic_bytes(self, tmp_path, rng):
        arr = rng.random((12, 5))
        a = tmp_path / "a.png"
        b = tmp_path / "b.png"
        export_png16(arr, a)
        export_png16(arr, b)
        assert a.read_bytes() == b.read_bytes()


class TestReadProbabilityMap:
    def test_from_ffm(self, tmp_path, rng):
        arr = rng.random((4, 4)).astype(np.float32)
        path = tmp_path / "p.ffm"
        write_ffm(arr, path)
        assert np.array_equal(read_probability_map(path),
                              arr.astype(np.float64))

    def test_from_image(self, tmp_path):
        path = tmp_path / "p.pgm"
        path.write_bytes(b"P5\n2 1\n255\n" + bytes([0, 255]))
        assert np.array_equal(read_probability_map(path), [[0.0, 1.0]])

    def test_rejects_out_of_range_ffm(self, tmp_path):
        path = tmp_path / "p.ffm"
        write_ffm(np.array([[2.0]], np.float32), path)
        with pytest.raises(OutOfRange):
            read_probability_map(path)
