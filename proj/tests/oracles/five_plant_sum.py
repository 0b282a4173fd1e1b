"""Spreadsheet-style oracle for the 5-plant ingest fixture.

Writes five_plants_generation.csv, five_plants_factors.csv and the expected
national monthly totals (unannualized kg and MWh, plus annualized MMT/TWh)
computed row by row with plain Python arithmetic.
"""
import calendar
import csv
import pathlib
import random

out = pathlib.Path(__file__).resolve().parent.parent / "data"
rng = random.Random(20240501)

factors = {"BIT": ("coal", 93.3), "NG": ("gas", 53.06), "DFO": ("oil", 73.96),
           "SUB": ("coal", 97.17), "NUC": ("other", 0.0)}
plants = [("P1", "OH", "BIT"), ("P2", "TX", "NG"), ("P3", "NY", "DFO"),
          ("P4", "WY", "SUB"), ("P5", "IL", "NUC")]
months = [(2019, m) for m in range(1, 13)]

rows = []
for (y, m) in months:
    for pid, st, fuel in plants:
        gen = round(rng.uniform(5e4, 4e5), 3)
        heat = 0.0 if fuel == "NUC" else round(gen * rng.uniform(7.0, 11.0), 3)
        rows.append((pid, st, y, m, fuel, gen, heat))

with open(out / "five_plants_generation.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["plant_id", "state", "year", "month", "fuel_code", "generation_mwh",
                "fuel_consumed_mmbtu"])
    w.writerows(rows)

with open(out / "five_plants_factors.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["fuel_code", "kg_co2_per_mmbtu", "category", "provenance"])
    for code, (cat, kg) in factors.items():
        w.writerow([code, kg, cat, "test fixture"])

with open(out / "five_plants_expected.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["year", "month", "emissions_kg", "generation_mwh", "c_mmt_annualized",
                "e_twh_annualized", "c_over_e_kg_per_mwh"])
    for (y, m) in months:
        kg = 0.0
        mwh = 0.0
        for pid, st, yy, mm, fuel, gen, heat in rows:
            if (yy, mm) != (y, m):
                continue
            kg += heat * factors[fuel][1]
            mwh += gen
        days = calendar.monthrange(y, m)[1]
        w.writerow([y, m, repr(kg), repr(mwh), repr(kg / 1e9 * 365 / days),
                    repr(mwh / 1e6 * 365 / days), repr(kg / mwh)])
