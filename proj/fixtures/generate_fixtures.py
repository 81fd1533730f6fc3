#!/usr/bin/env python3
"""Regenerates the fixture corpora.

Deterministic: identical output on every run. The registry mirrors the
national portal web addresses; the demo corpus carries synthetic
observations at portal-specific quality levels so scoring, ranking and
clustering all have something to chew on.
"""

import hashlib
import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))

REGISTRY = [
    ("Austria", "EU", "https://www.data.gv.at"),
    ("Bahrain", "GCC", "https://www.data.gov.bh/pages/homepage/"),
    ("Belgium", "EU", "https://data.gov.be/en"),
    ("Bulgaria", "EU", "https://data.egov.bg/"),
    ("Croatia", "EU", "https://data.gov.hr/en"),
    ("Cyprus", "EU", "https://www.data.gov.cy/?language=en"),
    ("Czechia", "EU", "https://data.gov.cz/english/"),
    ("Denmark", "EU", "https://www.opendata.dk/"),
    ("Estonia", "EU", "https://avaandmed.eesti.ee/"),
    ("Finland", "EU", "https://www.avoindata.fi/en"),
    ("France", "EU", "https://data.gouv.fr"),
    ("Germany", "EU", "https://www.govdata.de/"),
    ("Greece", "EU", "https://www.data.gov.gr/"),
    ("Hungary", "EU", "https://kozadatportal.hu/"),
    ("Ireland", "EU", "https://data.gov.ie"),
    ("Italy", "EU", "https://www.dati.gov.it/"),
    ("Kuwait", "GCC", "https://e.gov.kw/sites/kgenglish/Pages/OtherTopics/OpenData.aspx"),
    ("Latvia", "EU", "https://data.gov.lv/eng"),
    ("Lithuania", "EU", "https://data.gov.lt/"),
    ("Luxembourg", "EU", "https://data.public.lu/en/"),
    ("Malta", "EU", "https://data.gov.mt/"),
    ("Netherlands", "EU", "https://data.overheid.nl/en"),
    ("Oman", "GCC", "https://data.gov.om/"),
    ("Poland", "EU", "https://dane.gov.pl/en"),
    ("Portugal", "EU", "https://dados.gov.pt/en/"),
    ("Qatar", "GCC", "https://www.data.gov.qa/pages/home/"),
    ("Romania", "EU", "https://data.gov.ro/"),
    ("Saudi Arabia", "GCC", "https://od.data.gov.sa/en"),
    ("Slovakia", "EU", "https://data.gov.sk/en"),
    ("Slovenia", "EU", "https://podatki.gov.si/#"),
    ("Spain", "EU", "https://datos.gob.es/"),
    ("Sweden", "EU", "https://www.dataportal.se/en"),
    ("United Arab Emirates", "GCC", "https://bayanat.ae/"),
]

# Demo corpus portals with a rough quality level each.
DEMO = [
    ("France", 0.95),
    ("Ireland", 0.85),
    ("Poland", 0.80),
    ("Estonia", 0.75),
    ("Lithuania", 0.70),
    ("Saudi Arabia", 0.65),
    ("Bahrain", 0.45),
    ("Kuwait", 0.15),
]

DIMENSION_SIZES = {"a": 4, "b": 3, "c": 4, "d": 11, "e": 9, "f": 15, "g": 13, "h": 7, "i": 6}
SAMPLED = {"d2", "d3", "d4", "d5", "d7", "d8", "d10", "d11", "e1", "e2", "e3", "e7", "f10", "f11"}


def all_ids():
    for letter in sorted(DIMENSION_SIZES):
        for index in range(1, DIMENSION_SIZES[letter] + 1):
            yield f"{letter}{index}"


def dice(portal, sub_id, salt=""):
    """Deterministic uniform value in [0, 1)."""
    digest = hashlib.md5(f"{portal}/{sub_id}/{salt}".encode()).hexdigest()
    return int(digest[:8], 16) / 0xFFFFFFFF


def observation_for(portal, sub_id, quality):
    passes = dice(portal, sub_id) < quality
    roll = dice(portal, sub_id, "magnitude")
    if sub_id == "c1":
        value = round(1.0 + roll * 2.5, 2) if passes else round(4.0 + roll * 5.0, 2)
        return {"kind": "measured", "value": value, "unit": "s"}
    if sub_id == "c4":
        value = int(61 + roll * 39) if passes else int(roll * 61)
        return {"kind": "measured", "value": value}
    if sub_id == "e4":
        return None  # derived from e3 below
    if sub_id in SAMPLED:
        satisfied = 10 + int(roll * 5) if passes else int(roll * 10)
        return {"kind": "sample", "satisfied": min(satisfied, 14), "total": 14}
    return {"kind": "bool", "value": passes}


def build_demo_record(portal, region, url, quality):
    observations = {}
    for sub_id in all_ids():
        obs = observation_for(portal, sub_id, quality)
        if obs is not None:
            observations[sub_id] = obs
    stated = observations["e3"]["satisfied"]
    accurate_roll = dice(portal, "e4", "accuracy")
    accurate = min(stated, int(round(stated * (quality * 0.6 + accurate_roll * 0.4))))
    observations["e4"] = {
        "kind": "accuracy",
        "accurate": accurate,
        "frequency_specified": stated,
    }
    return {
        "portal": portal,
        "country": portal,
        "region": region,
        "url": url,
        "assessed_on": "2025-06-01",
        "observations": observations,
        "provenance": {sub_id: "manual" for sub_id in observations},
    }


def write(path, doc):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as handle:
        json.dump(doc, handle, indent=2, sort_keys=True)
        handle.write("\n")


def main():
    registry_index = {name: (region, url) for name, region, url in REGISTRY}

    for name, region, url in REGISTRY:
        doc = {
            "portal": name,
            "country": name,
            "region": region,
            "url": url,
            "assessed_on": "",
            "observations": {},
            "provenance": {},
        }
        filename = name.replace(" ", "_") + ".json"
        write(os.path.join(HERE, "registry", filename), doc)

    for name, quality in DEMO:
        region, url = registry_index[name]
        doc = build_demo_record(name, region, url, quality)
        filename = name.replace(" ", "_") + ".json"
        write(os.path.join(HERE, "assessments", filename), doc)

    print(f"wrote {len(REGISTRY)} registry files and {len(DEMO)} demo assessments")


if __name__ == "__main__":
    main()
