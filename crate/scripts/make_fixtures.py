#!/usr/bin/env python3
"""Writes the synthetic 5-minute bar fixtures under fixtures/bars/."""

import datetime as dt
import math
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "bars"

# name: (seed, start price, mu, phi, omega, alpha, beta)
SERIES = {
    "spy": (11, 382.0, 2e-5, -0.04, 4e-8, 0.08, 0.88),
    "pff": (12, 37.5, 0.0, 0.10, 2e-8, 0.12, 0.80),
    "vnq": (13, 88.0, -1e-5, 0.02, 9e-8, 0.06, 0.90),
    "bwx": (14, 27.0, 0.0, -0.08, 3e-8, 0.10, 0.70),
}
ROWS = 1500


def sessions(start):
    day = start
    while True:
        if day.weekday() < 5:
            t = dt.datetime.combine(day, dt.time(9, 30))
            for _ in range(78):
                yield t
                t += dt.timedelta(minutes=5)
        day += dt.date.resolution


def write(name, seed, price, mu, phi, omega, alpha, beta):
    rng = random.Random(seed)
    var = omega / (1 - alpha - beta)
    eps = 0.0
    prev = 0.0
    lines = ["timestamp,open,high,low,close,volume"]
    stamps = sessions(dt.date(2021, 3, 1))
    for _ in range(ROWS):
        var = omega + alpha * eps * eps + beta * var
        eps = math.sqrt(var) * rng.gauss(0.0, 1.0)
        r = mu + phi * prev + eps
        prev = r
        open_ = price
        price *= math.exp(r)
        wiggle = abs(rng.gauss(0.0, math.sqrt(var)))
        high = max(open_, price) * (1 + wiggle)
        low = min(open_, price) * (1 - wiggle)
        volume = rng.randint(1_000, 90_000)
        lines.append(
            f"{next(stamps):%Y-%m-%dT%H:%M:%S},{open_:.4f},{high:.4f},{low:.4f},{price:.4f},{volume}"
        )
    (ROOT / f"{name}_5min.csv").write_text("\n".join(lines) + "\n")


def main():
    ROOT.mkdir(parents=True, exist_ok=True)
    for name, args in SERIES.items():
        write(name, *args)


if __name__ == "__main__":
    main()
