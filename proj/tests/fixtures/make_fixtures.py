#!/usr/bin/env python3
"""Regenerates tests/fixtures/natural/*.png from scikit-image's bundled photos.

Each fixture is a 96x96 crop stored as 8-bit PNG (RGB or gray). The acceptance
suite darkens them itself, so only the originals are kept here.
"""
import os

import numpy as np
from PIL import Image
from skimage import data

SIDE = 96
CROPS = [
    ("astronaut_face", data.astronaut, 60, 170),
    ("astronaut_flag", data.astronaut, 300, 380),
    ("chelsea", data.chelsea, 60, 120),
    ("coffee_cup", data.coffee, 150, 250),
    ("coffee_beans", data.coffee, 300, 30),
    ("rocket", data.rocket, 120, 200),
    ("motorcycle", lambda: data.stereo_motorcycle()[0], 250, 400),
    ("ihc", data.immunohistochemistry, 200, 200),
    ("retina", data.retina, 700, 300),
    ("camera", data.camera, 100, 200),
    ("grass", data.grass, 50, 50),
    ("brick", data.brick, 200, 200),
]

here = os.path.join(os.path.dirname(os.path.abspath(__file__)), "natural")
os.makedirs(here, exist_ok=True)
for name, loader, row, col in CROPS:
    img = np.asarray(loader())
    crop = img[row:row + SIDE, col:col + SIDE]
    if crop.ndim == 3:
        crop = crop[..., :3]
    assert crop.shape[0] == SIDE and crop.shape[1] == SIDE, name
    Image.fromarray(crop.astype(np.uint8)).save(os.path.join(here, name + ".png"))
    print(name, crop.shape, crop.mean())

# Small files exercising decoder paths and rejections.
io_dir = os.path.join(os.path.dirname(os.path.abspath(__file__)), "io")
os.makedirs(io_dir, exist_ok=True)
rgb = np.zeros((5, 7, 3), dtype=np.uint8)
for y in range(5):
    for x in range(7):
        rgb[y, x] = (x * 36, y * 60, (x * y * 11) % 256)
Image.fromarray(rgb).save(os.path.join(io_dir, "rgb_7x5.png"))
Image.fromarray(rgb).convert("P", palette=Image.ADAPTIVE, colors=16).save(os.path.join(io_dir, "palette_7x5.png"))
Image.fromarray(rgb).save(os.path.join(io_dir, "rgb_7x5.ppm"))
Image.fromarray(rgb[..., 0]).save(os.path.join(io_dir, "gray_7x5.pgm"))
Image.fromarray(np.dstack([rgb, np.full((5, 7), 200, np.uint8)])).save(os.path.join(io_dir, "rgba_7x5.png"))
Image.fromarray((rgb[..., 0].astype(np.uint16) * 257)).save(os.path.join(io_dir, "gray16_7x5.png"))
checker = ((np.add.outer(np.arange(3), np.arange(9)) % 2) * 255).astype(np.uint8)
Image.fromarray(checker).convert("1").save(os.path.join(io_dir, "checker1_9x3.png"))
