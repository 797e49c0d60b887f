#!/usr/bin/env python3
"""Regenerates the synthetic fixtures under tests/fixtures.

Output is deterministic; rerunning rewrites identical files.
"""
import json
import os
import random
from datetime import datetime, timedelta

HERE = os.path.dirname(os.path.abspath(__file__))
B32 = "ABCDEFGHIJKLMNOPQRSTUVWXYZ234567"


def out(*parts):
    path = os.path.join(HERE, *parts)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    return path


def digest(rng):
    return "".join(rng.choice(B32) for _ in range(32))


def surt(url):
    rest = url.split("://", 1)[1]
    host, _, path = rest.partition("/")
    labels = host.lower().split(".")
    if labels[0] == "www":
        labels = labels[1:]
    return ",".join(reversed(labels)) + ")/" + path.lower().rstrip("/")


def ts(dt):
    return dt.strftime("%Y%m%d%H%M%S")


def random_instant(rng, lo, hi):
    span = int((hi - lo).total_seconds())
    return lo + timedelta(seconds=rng.randrange(span + 1))


LO = datetime(2008, 5, 1)
HI = datetime(2015, 7, 31, 23, 59, 59)

MIMES = ["text/html", "text/html", "text/html", "application/pdf", "image/jpeg", "text/plain"]
STATUSES = ["200", "200", "200", "200", "301", "302", "404", "-"]


def cdx_line(rng, url, when, status=None, mime=None):
    return " ".join([
        surt(url),
        ts(when),
        url,
        mime or rng.choice(MIMES),
        status or rng.choice(STATUSES),
        digest(rng),
        str(rng.randrange(300, 250000)),
    ])


HOSTS = [
    "www.tibetinfonet.net", "www.hrw.org", "www.amnesty.org", "phayul.com", "www.savetibet.org",
    "occupywallst.org", "www.nycga.net", "interoccupy.net", "www.freetibet.org", "www.hrichina.org",
    "www.uyghurcongress.org", "www.burmacampaign.org.uk", "www.humanrightsfirst.org", "www.fidh.org",
    "www.ohchr.org", "occupyoakland.org", "www.occupyboston.org", "www.tchrd.org", "www.icj.org",
    "www.article19.org", "rsf.org", "www.witness.org", "www.frontlinedefenders.org",
]


def write_cdx_fixtures():
    rng = random.Random(20080515)
    golden = []
    # One seed captured across May 2008 to July 2015.
    # Paper-anchored capture range for one seed.
    rows = [
        "net,tibetinfonet)/ 20080515000000 http://www.tibetinfonet.net/ text/html 200 "
        "3I42H3S6NNFQ2MSVX7XZKYAYSCX5QBYJ 5123"
    ]
    when = datetime(2008, 5, 15)
    while True:
        when += timedelta(days=rng.randrange(60, 200), seconds=rng.randrange(86400))
        if when >= datetime(2015, 7, 1):
            break
        rows.append(cdx_line(rng, "http://www.tibetinfonet.net/", when, status="200", mime="text/html"))
    rows.append(cdx_line(rng, "http://www.tibetinfonet.net/", datetime(2015, 7, 30, 12, 0, 0), "200", "text/html"))
    golden.append(("tibetinfonet_2008_2015", rows))

    for i in range(21):
        host = HOSTS[i % len(HOSTS)]
        path = rng.choice(["", "about", "news", "reports/2011", "campaigns/tibet", "blog/2012/03/statement"])
        url = "http://" + host + "/" + path
        n = rng.choice([1, 2, 3, 5, 8, 13, 40, 120])
        whens = sorted(random_instant(rng, LO, HI) for _ in range(n))
        lines = [cdx_line(rng, url, w) for w in whens]
        if i % 5 == 4 and n > 1:
            # a revisit listed twice, as CDX servers do without collapse
            lines.insert(1, lines[0])
        golden.append(("%02d_%s" % (i, host.replace("www.", "").replace(".", "_")), lines))

    for name, lines in golden:
        with open(out("cdx", "golden", name + ".cdx"), "w", newline="\n") as f:
            f.write("".join(line + "\n" for line in lines))

    # Responses that must be rejected, with the 1-based line that is wrong.
    malformed = {}

    def bad(name, lines, line):
        with open(out("cdx", "malformed", name + ".cdx"), "w", newline="\n") as f:
            f.write("".join(line_ + "\n" for line_ in lines))
        malformed[name] = line

    base = [cdx_line(rng, "http://www.hrw.org/news", random_instant(rng, LO, HI)) for _ in range(6)]
    six = base[2].rsplit(" ", 1)[0]
    bad("six_fields_line3", base[:2] + [six] + base[3:], 3)
    eight = base[0] + " extra"
    bad("eight_fields_line1", [eight] + base[1:], 1)
    short_ts = base[4].split(" ")
    short_ts[1] = "2008"
    bad("short_timestamp_line5", base[:4] + [" ".join(short_ts)] + base[5:], 5)
    feb30 = base[1].split(" ")
    feb30[1] = "20120230101010"
    bad("invalid_date_line2", [base[0], " ".join(feb30)] + base[2:], 2)
    pre96 = base[3].split(" ")
    pre96[1] = "19951231235959"
    bad("pre_1996_line4", base[:3] + [" ".join(pre96)] + base[4:], 4)
    letters = base[5].split(" ")
    letters[6] = "12kb"
    bad("bad_length_line6", base[:5] + [" ".join(letters)], 6)
    status = base[0].split(" ")
    status[4] = "OK"
    bad("bad_status_line1", [" ".join(status)] + base[1:], 1)
    # blank lines are skipped but still counted
    bad("after_blank_line4", base[:2] + [""] + [six] + base[3:], 4)

    with open(out("cdx", "malformed", "expected.json"), "w") as f:
        json.dump(malformed, f, indent=2, sort_keys=True)
        f.write("\n")

    # fetch_captures fixture: five lines, one exact duplicate, out of order.
    url = "http://www.savetibet.org/"
    whens = [datetime(2011, 3, 4, 5, 6, 7), datetime(2009, 1, 2, 3, 4, 5), datetime(2013, 9, 9, 9, 9, 9),
             datetime(2010, 6, 30, 0, 0, 0)]
    lines = [cdx_line(rng, url, w, "200", "text/html") for w in whens]
    lines.insert(2, lines[1])
    with open(out("cdx", "five_with_duplicate.cdx"), "w", newline="\n") as f:
        f.write("".join(line + "\n" for line in lines))

    url = "http://occupywallst.org/"
    whens = [datetime(2011, 9, 17, 14, 0, 0), datetime(2012, 5, 1, 8, 30, 0), datetime(2014, 11, 20, 22, 15, 0)]
    with open(out("cdx", "three_captures.cdx"), "w", newline="\n") as f:
        f.write("".join(cdx_line(rng, url, w, "200", "text/html") + "\n" for w in whens))

    whens = [datetime(2012, m, d, 12, 0, 0) for m, d in
             [(3, 1), (3, 9), (3, 20), (3, 31), (4, 2), (4, 15), (4, 16), (4, 30), (5, 5), (5, 6), (5, 21), (5, 31)]]
    with open(out("cdx", "twelve_over_three_months.cdx"), "w", newline="\n") as f:
        f.write("".join(cdx_line(rng, "http://www.nycga.net/", w, "200", "text/html") + "\n" for w in whens))


HR_TOPICS = ["Tibet", "Burma", "Uyghur", "China", "Darfur", "Sudan", "Sri Lanka", "Iran", "Syria", "Colombia",
             "Guatemala", "Chechnya", "Zimbabwe", "Congo", "Nepal", "Cambodia", "Egypt", "Bahrain"]
HR_KINDS = ["Human Rights Watch", "Campaign", "Information Network", "Centre for Human Rights",
            "Human Rights Documentation Center", "Solidarity Network", "Legal Aid", "Press Freedom Monitor"]
HR_SUBJECTS = ["human rights", "freedom of expression", "refugees", "political prisoners", "torture",
               "women's rights", "indigenous peoples", "rule of law", "religious freedom", "minority rights"]
AUTHORS = ["", "", "Columbia University Libraries", "Human Rights Watch", "Amnesty International",
           "Tibet Information Network", "International Campaign for Tibet", "Physicians for Human Rights"]


def slug(s):
    return "".join(c.lower() if c.isalnum() else "-" for c in s).strip("-").replace("--", "-")


def seed_period(rng):
    a = random_instant(rng, LO, HI)
    b = random_instant(rng, LO, HI)
    a, b = min(a, b), max(a, b)
    return ts(a), ts(b)


def write_manifest(path, header, seeds):
    with open(path, "w", newline="\n", encoding="utf-8") as f:
        f.write(json.dumps(header, ensure_ascii=False) + "\n")
        for s in seeds:
            f.write(json.dumps(s, ensure_ascii=False) + "\n")


def write_manifests():
    rng = random.Random(711)
    seeds = []
    used = set()
    while len(seeds) < 711:
        topic = rng.choice(HR_TOPICS)
        kind = rng.choice(HR_KINDS)
        title = topic + " " + kind
        tld = rng.choice(["org", "org", "net", "org.uk", "info", "ch"])
        host = "www." + slug(topic + "-" + kind)[:40].strip("-") + "." + tld
        path = rng.choice(["", "", "about", "reports", "news/archive", "campaigns/" + slug(topic)])
        url = "http://" + host + "/" + path
        if url in used:
            url += "?page=%d" % len(seeds)
        used.add(url)
        first, last = seed_period(rng)
        subjects = sorted({rng.choice(HR_SUBJECTS), rng.choice(HR_SUBJECTS), topic})
        seeds.append({
            "url": url,
            "title": title,
            "description": "Website documenting human rights conditions in %s: %s." %
                           (topic, rng.choice(["reports", "news releases", "testimonies", "legal analysis"])),
            "author": rng.choice(AUTHORS),
            "subjects": subjects,
            "firstCapture": first,
            "lastCapture": last,
        })
    seeds[0] = {
        "url": "http://www.tibetinfonet.net/",
        "title": "Tibet Information Network",
        "description": "Independent news and research service on Tibet, human rights and politics.",
        "author": "Tibet Information Network",
        "subjects": ["human rights", "Tibet"],
        "firstCapture": "20080515000000",
        "lastCapture": "20150731235959",
    }
    write_manifest(out("manifests", "hrwa.jsonl"), {
        "collectionId": "hrwa",
        "title": "Human Rights Web Archive",
        "description": "Websites of human rights organizations and related resources, selected and "
                       "archived by Columbia University Libraries.",
        "collectorName": "Columbia University Libraries",
    }, seeds)

    rng = random.Random(933)
    kinds = ["news", "social", "movement"]
    cities = ["wall street", "oakland", "boston", "london", "portland", "chicago", "seattle", "denver",
              "philadelphia", "toronto", "los angeles", "atlanta", "austin", "madrid", "frankfurt"]
    news = ["nytimes.com", "theguardian.com", "washingtonpost.com", "aljazeera.com", "reuters.com", "npr.org",
            "cnn.com", "bbc.co.uk", "latimes.com", "democracynow.org"]
    social = ["twitter.com", "facebook.com", "youtube.com", "livestream.com", "tumblr.com", "flickr.com"]
    seeds = []
    used = set()
    while len(seeds) < 933:
        kind = kinds[len(seeds) % 3]
        city = rng.choice(cities)
        n = len(seeds)
        if kind == "news":
            host = "www." + rng.choice(news)
            url = "http://%s/2011/%02d/%02d/occupy-%s-%d" % (host, rng.randrange(9, 13), rng.randrange(1, 29),
                                                             slug(city), n)
            title = "Occupy %s protesters %s" % (city.title(), rng.choice(["march", "camp", "evicted", "return"]))
        elif kind == "social":
            host = rng.choice(social)
            url = "https://%s/occupy%s%d" % (host, slug(city).replace("-", ""), n)
            title = "Occupy %s on %s" % (city.title(), host.split(".")[0].title())
        else:
            host = "occupy" + slug(city).replace("-", "") + ".org"
            url = "http://%s/%s" % (host, rng.choice(["", "about", "events", "forum", "minutes/%d" % n]))
            title = "Occupy %s" % city.title()
        if url in used:
            continue
        used.add(url)
        first, last = seed_period(rng)
        if first < "20110917000000":
            first = "20110917000000"
        if last < first:
            last = first
        seeds.append({
            "url": url,
            "title": title,
            "description": "Occupy movement %s resource for %s." % (kind, city),
            "author": "",
            "subjects": ["occupy movement", kind],
            "firstCapture": first,
            "lastCapture": last,
        })
    write_manifest(out("manifests", "occupy.jsonl"), {
        "collectionId": "occupy-movement-2011",
        "title": "Occupy Movement 2011/2012",
        "description": "News articles, social media and movement sites about the Occupy protests.",
        "collectorName": "Internet Archive Global Events",
    }, seeds)

    write_manifest(out("manifests", "minimal.jsonl"), {
        "collectionId": "minimal",
        "title": "Minimal",
        "description": "One seed.",
        "collectorName": "Columbia University Libraries",
    }, [{"url": "http://www.tibetinfonet.net/", "title": "Tibet Information Network", "description": "",
         "author": "", "subjects": ["Tibet"], "firstCapture": "20080515000000", "lastCapture": "20150731235959"}])

    write_manifest(out("manifests", "bad_timestamp.jsonl"), {
        "collectionId": "bad-ts",
        "title": "Bad timestamp",
        "description": "",
        "collectorName": "Columbia University Libraries",
    }, [{"url": "http://www.hrw.org/", "title": "HRW", "firstCapture": "2008"}])

    with open(out("manifests", "dirty.jsonl"), "w", newline="\n") as f:
        f.write(json.dumps({"collectionId": "dirty", "title": "Dirty seeds", "description": "Some seeds are unusable.",
                            "collectorName": "Columbia University Libraries", "extraHeaderField": 1}) + "\n")
        f.write(json.dumps({"url": "http://www.hrw.org/", "title": "HRW", "unknownField": [1, 2]}) + "\n")
        f.write(json.dumps({"url": "ftp://files.example.org/", "title": "FTP mirror"}) + "\n")
        f.write("\n")
        f.write(json.dumps({"url": "HTTP://WWW.HRW.ORG:80/#top", "title": "HRW again"}) + "\n")
        f.write(json.dumps({"url": "http://www.amnesty.org/en", "title": "Amnesty"}) + "\n")
        f.write(json.dumps({"url": "http://exa mple.org/", "title": "Space in host"}) + "\n")

    with open(out("manifests", "broken_json.jsonl"), "w", newline="\n") as f:
        f.write(json.dumps({"collectionId": "broken", "title": "Broken", "collectorName": "x"}) + "\n")
        f.write(json.dumps({"url": "http://www.hrw.org/"}) + "\n")
        f.write('{"url": "http://www.amnesty.org/", "title": \n')


def write_linkrot():
    rng = random.Random(582)
    rows = []
    plan = [("movement sites", 582, 239), ("social media", 203, 173), ("news articles", 163, 147)]
    dead_statuses = ["http404", "http404", "otherError", "redirectSquat"]
    for category, total, alive in plan:
        statuses = ["alive"] * alive + [rng.choice(dead_statuses) for _ in range(total - alive)]
        rng.shuffle(statuses)
        for i, status in enumerate(statuses):
            host = "%s-%d.example.%s" % (slug(category), i, rng.choice(["org", "net", "com"]))
            rows.append({"url": "http://%s/" % host, "category": category, "status": status})
    with open(out("linkrot", "occupy_seeds.json"), "w", newline="\n") as f:
        json.dump({"seeds": rows}, f, indent=0)
        f.write("\n")


def write_live():
    hits = [
        {"url": "https://occupywallst.org/", "title": "OccupyWallSt | The Official Site of the Occupy Movement",
         "snippet": "The revolution continues worldwide."},
        {"url": "https://en.wikipedia.org/wiki/Occupy_movement", "title": "Occupy movement - Wikipedia",
         "snippet": "The Occupy movement was an international populist socio-political movement."},
        {"url": "https://www.theguardian.com/world/occupy-movement", "title": "Occupy movement | The Guardian",
         "snippet": "Latest news and comment on the Occupy movement."},
        {"url": "https://www.flickr.com/photos/occupy/", "title": "Occupy photos", "snippet": "Photo stream",
         "mediaType": "image"},
    ]
    with open(out("live", "fixture_provider.json"), "w", newline="\n") as f:
        json.dump({"name": "fixture-web", "queries": {"occupy": hits, "human rights": hits[1:2]}}, f, indent=2)
        f.write("\n")
    with open(out("live", "provider_config.json"), "w", newline="\n") as f:
        json.dump({"kind": "fixture", "path": "fixture_provider.json"}, f, indent=2)
        f.write("\n")


def write_tokens():
    with open(out("tokens.json"), "w", newline="\n") as f:
        json.dump({"tokens": [
            {"token": "alice-token", "userId": "alice", "displayName": "Alice"},
            {"token": "bob-token", "userId": "bob", "displayName": "Bob"},
            {"token": "carol-token", "userId": "carol", "displayName": "Carol"},
        ]}, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    write_cdx_fixtures()
    write_manifests()
    write_linkrot()
    write_live()
    write_tokens()
