#!/usr/bin/env python3
"""Regenerates the bundled 64x64 test images (deterministic)."""
from pathlib import Path

import numpy as np

SIZE = 64
HERE = Path(__file__).resolve().parent


def write_pgm(name, pixels):
    pixels = np.clip(np.rint(pixels), 0, 255).astype(np.uint8)
    h, w = pixels.shape
    (HERE / name).write_bytes(b"P5\n%d %d\n255\n" % (w, h) + pixels.tobytes())


def write_pbm(name, bits):
    bits = bits.astype(np.uint8)
    h, w = bits.shape
    packed = np.packbits(bits, axis=1)
    (HERE / name).write_bytes(b"P4\n%d %d\n" % (w, h) + packed.tobytes())


def main():
    rng = np.random.default_rng(20160704)
    y, x = np.mgrid[0:SIZE, 0:SIZE].astype(float)

    # Soft shapes on a diagonal ramp.
    shapes = 40 + 1.5 * (x + y)
    shapes[(x - 20) ** 2 + (y - 22) ** 2 < 12**2] = 220
    shapes[38:56, 30:58] = 15
    shapes[8:16, 40:60] = 180
    write_pgm("shapes.pgm", shapes)

    # Interfering sinusoids plus mild noise.
    texture = 128 + 70 * np.sin(x / 4.0) * np.cos(y / 6.0) + rng.normal(0, 8, (SIZE, SIZE))
    write_pgm("texture.pgm", texture)

    # Low-contrast scene squeezed into [90, 150]: the equalization case.
    scene = 90 + 60 * (0.5 + 0.5 * np.tanh((x - 32) / 9.0)) * (0.6 + 0.4 * np.sin(y / 10.0))
    scene += rng.integers(0, 6, (SIZE, SIZE))
    write_pgm("lowcontrast.pgm", scene)

    # Binary: overlapping disks and bars.
    blobs = ((x - 18) ** 2 + (y - 20) ** 2 < 10**2) | ((x - 44) ** 2 + (y - 40) ** 2 < 14**2)
    blobs |= (y > 52) & (y < 57) & (x > 6) & (x < 40)
    write_pbm("blobs.pbm", blobs)

    # Binary: sparse speckle with a hollow frame, exercising thin structures.
    speckle = rng.random((SIZE, SIZE)) < 0.18
    frame = np.zeros((SIZE, SIZE), dtype=bool)
    frame[10:54, 10:54] = True
    frame[13:51, 13:51] = False
    write_pbm("speckle.pbm", speckle | frame)


if __name__ == "__main__":
    main()
