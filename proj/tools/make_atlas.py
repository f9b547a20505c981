#!/usr/bin/env python3
"""Rasterize a TrueType font into a glyph atlas (atlas.json + atlas.png).

Pixel values in atlas.png are ink coverage (255 = full ink). Every glyph
cell is `line_height` tall and `advance` wide.
"""
import argparse
import json
import math
import pathlib

from PIL import Image, ImageDraw, ImageFont


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--font", default="/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf")
    ap.add_argument("--size", type=int, default=18)
    ap.add_argument("--id", default="dejavu-sans-18")
    ap.add_argument("--first", type=lambda s: int(s, 0), default=0x20)
    ap.add_argument("--last", type=lambda s: int(s, 0), default=0x7E)
    ap.add_argument("--extra", default="", help="additional characters to include")
    ap.add_argument("out", type=pathlib.Path)
    args = ap.parse_args()

    font = ImageFont.truetype(args.font, args.size)
    ascent, descent = font.getmetrics()
    line_height = ascent + descent
    chars = [chr(c) for c in range(args.first, args.last + 1)] + list(args.extra)

    advances = [max(1, math.ceil(font.getlength(ch))) for ch in chars]
    sheet = Image.new("L", (sum(advances), line_height), 0)
    draw = ImageDraw.Draw(sheet)
    glyphs = {}
    x = 0
    for ch, adv in zip(chars, advances):
        draw.text((x, ascent), ch, font=font, fill=255, anchor="ls")
        glyphs[str(ord(ch))] = {"rect": [x, 0, adv, line_height], "advance": adv}
        x += adv

    args.out.mkdir(parents=True, exist_ok=True)
    sheet.save(args.out / "atlas.png")
    meta = {"id": args.id, "line_height": line_height, "fallback": None, "glyphs": glyphs}
    (args.out / "atlas.json").write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
