"""Regenerates the GIF decoder fixtures. Each <name>.gif has a <name>.rgb
sidecar holding Pillow's decoding of its first frame as raw RGB bytes."""
import random
from PIL import Image

random.seed(7)


def save(img, name, **kw):
    img.save(f"{name}.gif", **kw)
    with Image.open(f"{name}.gif") as back:
        data = back.convert("RGB").tobytes()
    with open(f"{name}.rgb", "wb") as f:
        f.write(data)


# Small 16-colour palette image.
pal = Image.new("P", (37, 23))
pal.putpalette([random.randrange(256) for _ in range(16 * 3)])
pal.putdata([random.randrange(16) for _ in range(37 * 23)])
save(pal, "palette16")

# Full 256-colour noise: long code streams with table resets.
noise = Image.new("P", (211, 157))
noise.putpalette([random.randrange(256) for _ in range(256 * 3)])
noise.putdata([random.randrange(256) for _ in range(211 * 157)])
save(noise, "noise256")

# Interlaced grayscale gradient.
grad = Image.new("L", (64, 41))
grad.putdata([(x * 4 + y) % 256 for y in range(41) for x in range(64)])
save(grad, "interlaced", interlace=True)

# Binary mask in the style of a field-of-view mask.
mask = Image.new("L", (90, 70))
mask.putdata([255 if (x - 45) ** 2 + (y - 35) ** 2 <= 30 ** 2 else 0 for y in range(70) for x in range(90)])
save(mask, "mask")

# Repetitive content to exercise the KwKwK code path.
runs = Image.new("L", (120, 30))
runs.putdata([0 if (x // 13 + y // 7) % 2 else 255 for y in range(30) for x in range(120)])
save(runs, "runs")

with open("noise256.gif", "rb") as f:
    raw = f.read()
with open("truncated.gif", "wb") as f:
    f.write(raw[: len(raw) // 2])
