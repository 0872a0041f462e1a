"""Regenerate ``src/sgft/data/weather_fixture.csv``.

The fixture is SYNTHETIC: station positions are drawn inside a rough
continental-US bounding region and annual mean temperatures (deg F) follow a
latitude gradient with a cold band over the western mountains, a warm
Florida peninsula and Gulf coast, and Gaussian noise. It only has to
exercise the station pipeline at realistic scale, not reproduce any real
measurements.

    python scripts/make_weather_fixture.py
"""

import csv
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "sgft" / "data" / "weather_fixture.csv"


def temperature(lon, lat, rng):
    t = 100.0 - 1.15 * lat
    mountains = np.exp(-((lon + 109.0) / 5.0) ** 2) * np.clip((lat - 31.0) / 6.0, 0, 1)
    t -= 9.0 * mountains
    gulf = np.exp(-((lat - 29.5) / 2.0) ** 2) * (lon > -98)
    t += 2.0 * gulf
    return t + rng.normal(0.0, 0.8, size=np.shape(lon))


def main(seed=2014):
    rng = np.random.default_rng(seed)
    # mainland: rejection-sample a crude outline
    pts = []
    while len(pts) < 260:
        lon = rng.uniform(-124.0, -67.5)
        lat = rng.uniform(29.0, 48.8)
        if lat < 32.0 and (lon < -106 or lon > -82):
            continue  # Mexico / Atlantic
        if lon > -75 and lat < 38:
            continue  # Atlantic
        if lon > -70 and lat < 41.5:
            continue
        pts.append((lon, lat))
    # Florida peninsula
    while len(pts) < 300:
        lat = rng.uniform(25.2, 30.8)
        width = 1.2 + 0.35 * (lat - 25.2)
        centre = -80.9 - 0.12 * (lat - 25.2)
        lon = centre + rng.uniform(-width / 2, width / 2)
        pts.append((lon, lat))
    pts = np.round(np.array(pts), 4)
    temps = np.round(temperature(pts[:, 0], pts[:, 1], rng), 2)

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", newline="") as fh:
        fh.write("# SYNTHETIC station fixture, generated by scripts/make_weather_fixture.py\n")
        fh.write("# columns: station_id, latitude (deg), longitude (deg), value (annual mean temp, deg F)\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["station_id", "latitude", "longitude", "value"])
        for k, ((lon, lat), t) in enumerate(zip(pts, temps)):
            w.writerow([f"SYN{k:04d}", f"{lat:.4f}", f"{lon:.4f}", f"{t:.2f}"])
    print(f"wrote {len(pts)} stations to {OUT}")


if __name__ == "__main__":
    main()
