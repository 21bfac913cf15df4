#!/usr/bin/env python3
"""Writes the schematic battlefield sample: terrain, elevation raster,
brigade- and army-level scenarios and the ensemble spec.

The layout is a hand-drawn stand-in for the July 3 field (two north-south
ridges about 1.3 km apart, Emmitsburg Road and its fences running between
them, a stone wall with a jog in front of the eastern ridge). Coordinates
are metres, x east, y north, origin at the lower-left map corner.

usage: make_sample_data.py [output dir]   (default: data/gettysburg)
"""

import math
import sys
from pathlib import Path

import numpy as np

NX, NY, DS = 384, 309, 8.0
WIDTH, HEIGHT = NX * DS, NY * DS


def elevation():
    x = (np.arange(NX) + 0.5) * DS
    y = (np.arange(NY) + 0.5) * DS
    X, Y = np.meshgrid(x, y)  # row-major: rows are y
    h = 160.0 + 0.004 * Y
    seminary = 760.0 + 0.04 * (Y - 1200.0)
    h += 10.0 * np.exp(-(((X - seminary) / 260.0) ** 2))
    h += 12.0 * np.exp(-(((X - 2230.0) / 240.0) ** 2)) * (1.0 / (1.0 + np.exp(-(Y - 350.0) / 80.0)))
    h += 35.0 * np.exp(-(((X - 2300.0) ** 2 + (Y - 120.0) ** 2) / 160.0**2))  # round top in the south-east
    h += 18.0 * np.exp(-(((X - 2500.0) ** 2 + (Y - 2450.0) ** 2) / 260.0**2))  # hill at the north end
    # Slight rise along the road.
    road = road_points()
    d = np.full(X.shape, np.inf)
    for (ax, ay), (bx, by) in zip(road[:-1], road[1:]):
        dx, dy = bx - ax, by - ay
        t = np.clip(((X - ax) * dx + (Y - ay) * dy) / (dx * dx + dy * dy), 0.0, 1.0)
        d = np.minimum(d, np.hypot(X - (ax + t * dx), Y - (ay + t * dy)))
    h += 3.0 * np.exp(-((d / 90.0) ** 2))
    return h


def road_points():
    return [(1250.0, 0.0), (1700.0, 1200.0), (2080.0, float(HEIGHT))]


def offset_line(points, off):
    """Polyline shifted sideways by `off` metres (left of travel positive)."""
    out = []
    for k, (px, py) in enumerate(points):
        a = points[max(k - 1, 0)]
        b = points[min(k + 1, len(points) - 1)]
        tx, ty = b[0] - a[0], b[1] - a[1]
        n = math.hypot(tx, ty)
        out.append((px - ty / n * off, py + tx / n * off))
    return out


def fmt_pt(p):
    return f"[{p[0]:.1f}, {p[1]:.1f}]"


def fmt_pts(ps):
    return "[" + ", ".join(fmt_pt(p) for p in ps) + "]"


def rect(x0, y0, x1, y1):
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


def terrain_yaml():
    road = road_points()
    feats = []

    def add(kind, preset, geom, label, scale=None):
        extra = f", scale: {scale}" if scale else ""
        feats.append(f"  - {{preset: {preset}, label: \"{label}\"{extra}, {kind}: {geom}}}")

    add("polygon", "woods", fmt_pts(rect(380, 250, 690, HEIGHT - 40)), "ridge woods")
    add("polygon", "woods", fmt_pts(rect(2200, 2040, 2270, 2190)), "grove")
    add("polygon", "woods", fmt_pts(rect(2180, 1560, 2230, 1620)), "copse")
    add("polygon", "orchard", fmt_pts(rect(1250, 250, 1400, 450)), "peach orchard")
    add("polygon", "orchard", fmt_pts(rect(1450, 1640, 1560, 1760)), "farm orchard")
    add("polygon", "corn", fmt_pts(rect(1000, 1320, 1380, 1560)), "corn")
    add("polygon", "grain", fmt_pts(rect(1180, 700, 1500, 980)), "wheat")
    add("polygon", "grain", fmt_pts(rect(1820, 560, 2000, 860)), "wheat east")
    add("point", "building", fmt_pt((1500, 1600)), "barn")
    add("point", "building", fmt_pt((1530, 1670)), "farm house")
    add("point", "building", fmt_pt((1680, 1235)), "road farm")
    add("point", "building", fmt_pt((1430, 640)), "south farm")
    add("line", "road", fmt_pts(road), "Emmitsburg Road")
    # Line features get wider profiles than the presets so that they still slow a
    # march after the overlay smoothing.
    add("line", "post_and_rail_fence", fmt_pts(offset_line(road, 18.0)), "road fence west", 24.0)
    add("line", "post_and_rail_fence", fmt_pts(offset_line(road, -18.0)), "road fence east", 24.0)
    add("line", "stone_wall", fmt_pts([(2070, 900), (2070, 1560), (2135, 1560), (2135, 2160)]), "stone wall", 24.0)
    add("line", "worm_fence", fmt_pts([(1100, 480), (1100, 1000)]), "field fence", 16.0)
    add("line", "worm_fence", fmt_pts([(1320, 1050), (1400, 1700), (1480, 2400)]), "farm lane fence", 16.0)
    add("line", "worm_fence", fmt_pts([(1650, 350), (1800, 950)]), "south field fence", 16.0)
    add("line", "worm_fence", fmt_pts([(1900, 1400), (1940, 2300)]), "north field fence", 16.0)
    add("line", "worm_fence", fmt_pts([(1860, 1290), (2020, 1290)]), "lane fence", 16.0)

    return "\n".join([
        "# Schematic battlefield: two ridges, the road between them with fences",
        "# on both sides, and a stone wall in front of the eastern ridge.",
        f"grid: {{nx: {NX}, ny: {NY}, ds: {DS}, origin: [0.0, 0.0]}}",
        "base_speed: 1.0",
        "smoothing_passes: 3",
        "elevation: {file: elevation.f64}",
        "features:",
        *feats,
        "",
    ])


# id, side, label, morale, strength, center, bearing_deg
BRIGADES = [
    # 141 + 150 in the source table, whose printed total (8036) exceeds its rows by one.
    # 141 + 150 in the source table, whose printed total exceeds its rows by one
    (1, "blue", "8 OH / 126 NY", 0.7, 292, (1760, 2330), 270),
    (2, "blue", "Willard", 0.7, 1030, (2190, 2240), 180),
    (3, "blue", "Smyth", 0.7, 828, (2180, 2000), 180),
    (4, "blue", "Webb", 0.7, 895, (2190, 1680), 180),
    (5, "blue", "Hall", 0.7, 669, (2170, 1470), 180),
    (6, "blue", "Stone", 0.8, 745, (2250, 1130), 180),
    (7, "blue", "Harrow", 0.7, 831, (2170, 1290), 180),
    (8, "blue", "Stannard", 0.7, 1715, (2190, 960), 180),
    (9, "blue", "Cross", 0.7, 632, (2180, 760), 180),
    (10, "blue", "Kelly", 0.7, 399, (2190, 600), 180),
    (11, "red", "Brockenbrough", 0.8, 829, (900, 2300), 0),
    (12, "red", "Lane", 0.7, 1203, (650, 1950), 0),
    (13, "red", "Davis", 0.8, 1484, (900, 2020), 0),
    (14, "red", "Lowrance (Scales)", 0.7, 879, (650, 1660), 0),
    (15, "red", "Marshall (Pettigrew)", 0.8, 1495, (900, 1730), 0),
    (16, "red", "Fry (Archer)", 0.8, 739, (900, 1460), 0),
    (17, "red", "Armistead", 1.0, 1223, (860, 1080), 0),
    (18, "red", "Garnett", 1.0, 824, (1050, 1220), 0),
    (19, "red", "Kemper", 1.0, 1163, (1050, 960), 0),
    (20, "red", "Lang (Perry)", 0.7, 437, (1060, 700), 0),
    (21, "red", "Wilcox", 0.7, 1205, (1000, 470), 0),
]

# Red: waypoints toward the eastern ridge. Blue: position to take at the wall.
RED_ROUTES = {
    11: [(1960, 2270)],
    12: [(1990, 1960)],
    13: [(2010, 2060)],
    14: [(2010, 1760)],
    15: [(2030, 1860)],
    16: [(2040, 1650)],
    17: [(1450, 1160), (2050, 1520)],
    18: [(1500, 1260), (2040, 1600)],
    19: [(1500, 1040), (2030, 1420)],
    20: [(2010, 1060)],
    21: [(2000, 820)],
}
BLUE_POSTS = {
    2: (2150, 2240),
    3: (2110, 2000),
    4: (2100, 1680),
    5: (2040, 1470),
    6: (2150, 1130),
    7: (2040, 1290),
    9: (2100, 760),
    10: (2110, 600),
}
BLUE_FLANKS = {
    1: ((1760, 2200), 270.0, 500.0),
    8: ((1930, 1180), 90.0, 500.0),
}

# id, label, guns, position
BLUE_BATTERIES = [
    (22, "Bancroft / Wilkeson", 6, (2420, 2420)),
    (23, "Mason / Eakin", 6, (2330, 2380)),
    (24, "Edgell", 4, (2470, 2320)),
    (25, "Hill", 4, (2380, 2300)),
    (26, "Norton", 6, (2300, 2290)),
    (27, "McCartney", 6, (2460, 2200)),
    (28, "Woodruff", 6, (2290, 2120)),
    (29, "Milton / Bigelow", 6, (2300, 1960)),
    (30, "Arnold", 6, (2270, 1800)),
    (31, "Cushing", 6, (2250, 1640)),
    (32, "Brown / Perrin", 6, (2270, 1480)),
    (33, "Rorty", 4, (2280, 1340)),
    (34, "Daniels / Thomas", 12, (2310, 1060)),
    (35, "Hart / Phillips / Thompson", 15, (2300, 820)),
    (36, "Rank", 2, (2320, 560)),
]
RED_BATTERIES = [
    (37, "Brander", 4, (1060, 2380)),
    (38, "McGraw", 4, (1070, 2280)),
    (39, "Brunson / Zimmerman", 4, (1060, 2180)),
    (40, "Johnston", 4, (1070, 2080)),
    (41, "Marye", 4, (1060, 1980)),
    (42, "Ross", 6, (1070, 1880)),
    (43, "Wingfield", 5, (1060, 1780)),
    (44, "Graham", 4, (1070, 1680)),
    (45, "Wyatt", 4, (1060, 1580)),
    (46, "Brooke", 4, (1180, 1450)),
    (47, "Ward", 4, (1190, 1360)),
    (48, "Woolfolk", 4, (1200, 1270)),
    (49, "Blount", 4, (1210, 1180)),
    (50, "Caskie", 4, (1220, 1090)),
    (51, "Macon", 4, (1230, 1000)),
    (52, "Stribling", 6, (1240, 910)),
    (53, "Richardson", 3, (1250, 820)),
    (54, "Norcom", 3, (1250, 730)),
    (55, "Miller", 3, (1240, 640)),
    (56, "Taylor", 4, (1230, 550)),
    (57, "Gilbert", 4, (1220, 460)),
]


def formation_size(strength, side):
    width = min(max(0.2 * strength, 100.0), 260.0 if side == "red" else 200.0)
    depth = 40.0 if strength < 1000 else 60.0
    return width, depth


def unit_yaml(uid, side, label, morale, strength, center, bearing, orders, march, width=None, depth=None):
    if width is None:
        width, depth = formation_size(strength, side)
    lines = [
        f"  - id: {uid}",
        f"    side: {side}",
        f"    label: \"{label}\"",
        f"    strength: {strength}",
        f"    morale: {morale}",
        f"    march_speed: {march}",
        f"    formation: {{center: {fmt_pt(center)}, width: {width:.1f}, depth: {depth:.1f}, bearing_deg: {bearing}}}",
        "    orders:",
    ]
    lines += [f"      - {o}" for o in orders]
    return lines


def red_orders(route):
    return ["{rotate_to_deg: 0}"] + [f"{{translate_to: {fmt_pt(p)}}}" for p in route] + ["face_nearest_enemy"]


def blue_defend(post, bearing, trigger):
    return [f"{{wait_until_enemy_within: {trigger}}}", f"{{rotate_to_deg: {bearing}}}",
            f"{{translate_to: {fmt_pt(post)}}}", "face_nearest_enemy"]


def blue_flank(point, bearing, trigger):
    return [f"{{wait_until_enemy_within: {trigger}}}",
            f"{{flank: {{to: {fmt_pt(point)}, bearing_deg: {bearing}}}}}", "face_nearest_enemy"]


HEADER_PARAMS = """time: {dt: 1.0, duration: 3600.0, snapshot_every: 60.0}
terrain_effects: true
params:
  max_speed: 1.4
  max_density: 5.6
  diffusion: 0.0
  closein_k: 0.05
  ranged_k_infantry: %(kinf)s
  ranged_k_artillery: %(kart)s
  range_infantry: 100.0
  range_artillery: 1200.0
  alpha_r_deg: 90.0
  theta_r_deg: 30.0
  reference_speed: 1.4
  reference_losses: 0.35
  morale_increment: 0.5
  ranged_reference_area: %(aref)s
"""

# Normalisation area for ranged fire, calibrated per aggregation level like k'.
BRIGADE_REFERENCE_AREA = 7.0e5
ARMY_REFERENCE_AREA = 2.0e6
RED_MARCH = 0.6
BLUE_MARCH = 0.6
DEFEND_TRIGGER = 500.0


def brigade_yaml():
    out = ["# Brigade-level sample: infantry strengths and morale per brigade,",
           "# batteries by reference number (two aggregated Union groups).",
           "name: brigade", "terrain: terrain.yaml",
           HEADER_PARAMS % {"kinf": 8.0, "kart": 16.0, "aref": BRIGADE_REFERENCE_AREA},
           "units:"]
    for uid, side, label, morale, strength, center, bearing in BRIGADES:
        if side == "red":
            orders, march = red_orders(RED_ROUTES[uid]), RED_MARCH
        elif uid in BLUE_FLANKS:
            point, fb, trig = BLUE_FLANKS[uid]
            orders, march = blue_flank(point, fb, trig), BLUE_MARCH
        else:
            orders, march = blue_defend(BLUE_POSTS[uid], bearing, DEFEND_TRIGGER), BLUE_MARCH
        out += unit_yaml(uid, side, label, morale, strength, center, bearing, orders, march)
    out.append("artillery:")
    for side, table in (("blue", BLUE_BATTERIES), ("red", RED_BATTERIES)):
        for bid, label, guns, pos in table:
            out.append(f"  - {{id: {bid}, side: {side}, label: \"{label}\", guns: {guns}, position: {fmt_pt(pos)}}}")
    return "\n".join(out) + "\n"


def army_yaml():
    blue_total = sum(b[4] for b in BRIGADES if b[1] == "blue")
    red_total = sum(b[4] for b in BRIGADES if b[1] == "red")
    blue_guns = sum(b[2] for b in BLUE_BATTERIES)
    red_guns = sum(b[2] for b in RED_BATTERIES)
    out = ["# Army-level sample: each side's infantry and artillery aggregated into one",
           "# entity; the batteries start at the army centres.",
           "name: army", "terrain: terrain.yaml",
           HEADER_PARAMS % {"kinf": 2.0, "kart": 4.0, "aref": ARMY_REFERENCE_AREA},
           "units:"]
    out += unit_yaml(1, "blue", "Union infantry", 1.0, blue_total, (2170, 1500), 180,
                     blue_defend((2090, 1500), 180, DEFEND_TRIGGER), BLUE_MARCH, width=1600.0, depth=50.0)
    out += unit_yaml(2, "red", "Confederate infantry", 1.0, red_total, (930, 1450), 0,
                     red_orders([(2060, 1500)]), RED_MARCH, width=2000.0, depth=60.0)
    out.append("artillery:")
    out.append(f"  - {{id: 3, side: blue, label: \"Union artillery\", guns: {blue_guns}, position: [2170.0, 1500.0]}}")
    out.append(f"  - {{id: 4, side: red, label: \"Confederate artillery\", guns: {red_guns}, position: [930.0, 1450.0]}}")
    return "\n".join(out) + "\n"


ENSEMBLE = """# Randomized cases around the brigade sample. Case 0 is the unperturbed
# baseline; case k draws from a PCG-64 stream seeded with k.
scenario: brigade.yaml
cases: 100
position_sigma: 100.0
bearing_sigma_deg: 10.0
unit_band: [0.8, 1.2]
combat_band: [0.5, 2.0]
"""


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data/gettysburg")
    out.mkdir(parents=True, exist_ok=True)
    h = elevation()
    h.astype("<f8").tofile(out / "elevation.f64")
    (out / "terrain.yaml").write_text(terrain_yaml())
    (out / "brigade.yaml").write_text(brigade_yaml())
    (out / "army.yaml").write_text(army_yaml())
    (out / "ensemble.yaml").write_text(ENSEMBLE)
    print(f"wrote {out}: elevation {h.min():.1f}..{h.max():.1f} m")


if __name__ == "__main__":
    main()
