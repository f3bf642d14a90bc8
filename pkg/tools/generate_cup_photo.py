#!/usr/bin/env python3
"""Renders the bundled cup photo used by the optional real-model check.

A synthetic but photo-like scene: soft background, table plane, and a shaded
mug with a handle, centered horizontally so the expected zone is CENTER.
"""

import os

import cv2
import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "tests", "data", "cup_photo.png")


def main():
    h, w = 640, 640
    yy = np.linspace(0, 1, h)[:, None]
    base = (200 - 60 * yy).astype(np.uint8)
    img = np.dstack([base + 10, base + 5, base]).astype(np.uint8)

    # table plane
    cv2.rectangle(img, (0, 430), (w, h), (120, 160, 190), -1)
    cv2.line(img, (0, 430), (w, 430), (90, 120, 150), 3)

    # mug body with simple vertical shading
    left, right, top, bottom = 230, 410, 240, 440
    for x in range(left, right):
        t = (x - left) / (right - left)
        shade = int(235 - 110 * abs(t - 0.35))
        cv2.line(img, (x, top), (x, bottom), (shade, shade - 6, shade - 14), 1)
    cv2.ellipse(img, (320, top), (90, 26), 0, 0, 360, (150, 148, 145), -1)
    cv2.ellipse(img, (320, top), (90, 26), 0, 0, 360, (70, 70, 70), 2)
    cv2.ellipse(img, (320, top), (72, 18), 0, 0, 360, (55, 50, 48), -1)
    cv2.ellipse(img, (320, bottom), (90, 24), 0, 0, 180, (170, 168, 165), -1)

    # handle
    cv2.ellipse(img, (418, 330), (52, 62), 0, -80, 80, (180, 178, 175), 22)
    cv2.ellipse(img, (418, 330), (52, 62), 0, -80, 80, (90, 90, 90), 3)

    # soft shadow
    overlay = img.copy()
    cv2.ellipse(overlay, (330, 448), (130, 22), 0, 0, 360, (60, 80, 100), -1)
    img = cv2.addWeighted(overlay, 0.35, img, 0.65, 0)

    cv2.imwrite(OUT, img)
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
