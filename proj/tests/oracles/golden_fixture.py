"""Synthetic plant-level inputs for the end-to-end pipeline (2016-01 .. 2020-12).

Monthly generation per plant follows capacity x capacity factor, where the
capacity factor responds to heating and cooling degree days, a 12-month
cycle, a slow coal-to-gas trend and, for fossil units, a demand dip in
April and May 2020. Output goes to data/fixtures/golden/.
"""
import calendar
import csv
import math
import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parents[2] / "data" / "fixtures" / "golden"
OUT.mkdir(parents=True, exist_ok=True)
rng = random.Random(2016)

months = [(y, m) for y in range(2016, 2021) for m in range(1, 13)]

# population-weighted degree days with weather noise
dd = {}
for (y, m) in months:
    phase = 2 * math.pi * (m - 1) / 12
    hdd = max(5.0, 520 + 430 * math.cos(phase) + rng.gauss(0, 45))
    cdd = max(3.0, 190 - 180 * math.cos(phase) + rng.gauss(0, 22))
    dd[(y, m)] = (round(hdd, 1), round(cdd, 1))

with open(OUT / "degree_days.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["year", "month", "hdd", "cdd"])
    for (y, m) in months:
        w.writerow([y, m, *dd[(y, m)]])

with open(OUT / "emission_factors.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["fuel_code", "kg_co2_per_mmbtu", "provenance"])
    for code, kg in [("BIT", 93.28), ("SUB", 97.17), ("LIG", 97.72), ("RC", 93.28),
                     ("NG", 53.06), ("DFO", 73.96), ("RFO", 75.10), ("PC", 102.41),
                     ("KER", 75.20), ("JF", 72.22), ("WO", 95.25)]:
        w.writerow([code, kg, "EIA kg CO2 per MMBtu"])

states = ["PA", "OH", "TX", "WV", "KY", "IN", "IL", "WY", "MO", "GA", "FL", "NY", "CA", "AZ",
          "LA", "NC", "MI", "AL", "WA", "DC", "AK", "HI"]
# fuel, count, MW range, base capacity factor, heat rate (MMBtu/MWh), trend per year
fleet_spec = [
    ("BIT", 9, (400, 1300), 0.58, 10.3, -0.035),
    ("SUB", 7, (500, 2000), 0.62, 10.8, -0.03),
    ("LIG", 2, (500, 900), 0.65, 11.2, -0.02),
    ("NG", 14, (200, 1500), 0.45, 7.4, 0.025),
    ("DFO", 3, (40, 150), 0.03, 11.5, 0.0),
    ("RFO", 2, (100, 400), 0.02, 10.9, -0.01),
    ("NUC", 5, (900, 2300), 0.92, 0.0, 0.0),
    ("WND", 6, (100, 500), 0.34, 0.0, 0.06),
    ("SUN", 4, (50, 300), 0.24, 0.0, 0.12),
    ("WAT", 3, (200, 1200), 0.40, 0.0, 0.0),
]
plants = []
pid = 1000
for fuel, count, (lo, hi), cf, hr, trend in fleet_spec:
    for _ in range(count):
        pid += 1
        plants.append({"id": str(pid), "state": rng.choice(states), "fuel": fuel,
                       "mw": rng.uniform(lo, hi), "cf": cf * rng.uniform(0.85, 1.15),
                       "hr": hr * rng.uniform(0.95, 1.05), "trend": trend})

mean_hdd = sum(v[0] for v in dd.values()) / len(dd)
mean_cdd = sum(v[1] for v in dd.values()) / len(dd)
rows = []
for (y, m) in months:
    hours = calendar.monthrange(y, m)[1] * 24
    hdd, cdd = dd[(y, m)]
    years = (y - 2016) + (m - 1) / 12
    for p in plants:
        fossil = p["hr"] > 0
        weather = 1.0
        if fossil:
            weather = 1.0 + 0.18 * (hdd / mean_hdd - 1.0) + 0.30 * (cdd / mean_cdd - 1.0)
        seasonal = 1.0
        if p["fuel"] == "SUN":
            seasonal = 1.0 + 0.35 * math.sin(2 * math.pi * (m - 4) / 12)
        if p["fuel"] == "WND":
            seasonal = 1.0 + 0.2 * math.cos(2 * math.pi * (m - 3) / 12)
        if p["fuel"] == "NUC" and m in (4, 10) and rng.random() < 0.3:
            seasonal = 0.5  # refuelling outage
        trend = (1.0 + p["trend"]) ** years
        shock = 1.0
        if fossil and (y, m) in ((2020, 4), (2020, 5)):
            shock = 0.80 if p["fuel"] in ("BIT", "SUB", "LIG") else 0.90
        cf = min(0.98, max(0.0, p["cf"] * weather * seasonal * trend * shock * rng.gauss(1.0, 0.015)))
        gen = p["mw"] * hours * cf
        heat = gen * p["hr"] * rng.gauss(1.0, 0.01) if fossil else 0.0
        rows.append([p["id"], p["state"], y, m, p["fuel"], f"{gen:.3f}", f"{heat:.3f}"])

with open(OUT / "generation.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["plant_id", "state", "year", "month", "fuel_code", "generation_mwh",
                "fuel_consumed_mmbtu"])
    w.writerows(rows)
print(len(rows), "rows,", len(plants), "plants")
