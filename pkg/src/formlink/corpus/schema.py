"""Category schemas and the shared synthetic text pools.

Each form category owns a fixed set of value-type labels, a key phrase per
label, and a small number of layout templates. All text is drawn from the
pools below so the whole corpus stays within a small closed vocabulary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ConfigError, ParseError

FIRST_NAMES = [
    "Alma", "Bruno", "Carla", "Devin", "Edith", "Felix", "Greta", "Hugo",
    "Irene", "Jonas", "Karin", "Lars", "Mira", "Noel", "Olga", "Pavel",
    "Quinn", "Rosa", "Stefan", "Tessa", "Ulric", "Vera", "Wade", "Xenia",
    "Yusuf", "Zelda", "Anders", "Bianca", "Casper", "Dalia", "Emil", "Freya",
]

LAST_NAMES = [
    "Abbott", "Berger", "Calloway", "Dietrich", "Eklund", "Ferrara", "Grimaldi",
    "Holt", "Iverson", "Jensen", "Kovacs", "Lindqvist", "Moreau", "Novak",
    "Okafor", "Petrov", "Quist", "Rahman", "Salgado", "Tanaka", "Ueda",
    "Vasquez", "Weber", "Xiang", "Yilmaz", "Zhang", "Almeida", "Brandt",
]

ORG_WORDS = [
    "Natural", "Resources", "Municipal", "Harbor", "Trade", "Customs", "Revenue",
    "Forestry", "Housing", "Transport", "Water", "Power", "Grain", "Textile",
    "Mining", "Coastal", "Northern", "Southern", "Eastern", "Western", "Central",
    "Provincial", "Regional", "District", "Industrial", "Agricultural",
]

ORG_SUFFIXES = ["Bureau", "Office", "Agency", "Group", "Ltd", "Inc", "Department", "Authority", "Cooperative", "Union"]

STREET_NUMBERS = [str(n) for n in (7, 12, 18, 25, 31, 44, 58, 63, 77, 82, 96, 104, 119, 127, 138, 152, 171, 189, 203, 215)]
STREET_NAMES = ["Maple", "Cedar", "Birch", "Juniper", "Willow", "Aspen", "Linden", "Poplar", "Magnolia", "Sycamore", "Elm", "Laurel"]
STREET_SUFFIXES = ["Street", "Avenue", "Road", "Lane", "Boulevard", "Court"]

CITIES = [
    "Arlem", "Brivane", "Corvyn", "Daleth", "Esmora", "Farholt", "Gravenne",
    "Halden", "Istra", "Jorvale", "Kelmont", "Lorane", "Meridan", "Norwick",
    "Ostermere", "Pelago", "Quenby", "Ravensholm", "Solmara", "Tervon",
]

COUNTRIES = ["Aldoria", "Belmark", "Cordova", "Drellia", "Evantia", "Ferland", "Galmore", "Hestria", "Ikaria", "Jontar"]

MONTHS = ["January", "February", "March", "April", "May", "June", "July", "August", "September", "October", "November", "December"]
DAYS = [str(d) for d in range(1, 29)]
YEARS = [str(y) for y in range(2016, 2028)]

AMOUNTS = [
    "1,250.00", "3,480.50", "7,905.25", "12,300.00", "48.75", "265.90", "819.40",
    "2,074.60", "5,612.80", "9,938.15", "15,420.00", "27,655.35", "64,210.90",
    "130.25", "452.00", "88,914.70", "340.10", "6,008.45", "21,777.00", "950.55",
]
CURRENCIES = ["USD", "EUR", "CNY", "SEK", "GBP"]

PHONES = [
    "555-0104", "555-0119", "555-0126", "555-0131", "555-0148", "555-0152",
    "555-0167", "555-0173", "555-0185", "555-0190", "555-0211", "555-0228",
    "555-0234", "555-0246", "555-0257", "555-0263", "555-0279", "555-0288",
]

CODES = [
    "AB-10293", "CK-55817", "DT-90412", "EF-33276", "GH-71058", "JM-24689",
    "LP-80931", "NQ-46125", "RS-17740", "TV-62384", "WX-95507", "YZ-30866",
    "BD-74219", "CE-58003", "FG-11652", "HK-42977", "LN-86340", "PR-29514",
    "SU-63801", "VW-97136", "XA-50428", "ZB-14785", "CM-68092", "DN-35617",
]

EMAILS = [
    "records@arlem-forms.example", "intake@brivane-desk.example", "filings@corvyn-gov.example",
    "office@daleth-reg.example", "clerk@esmora-hall.example", "desk@farholt-admin.example",
    "mail@gravenne-bureau.example", "contact@halden-office.example",
]

PERCENTS = ["2.5%", "4%", "5.75%", "7%", "8.25%", "10%", "12.5%", "15%", "17.25%", "20%", "22%", "25.5%"]

SMALL_COUNTS = [str(n) for n in (1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 16, 20, 24, 25, 30, 36, 40, 48, 50, 60, 72, 80, 90, 96)]
COUNT_UNITS = ["boxes", "crates", "pallets", "units", "rolls", "sheets", "bundles", "sets"]
TIME_UNITS = ["days", "weeks", "months", "years"]
MEASURE_UNITS = ["kg", "tons", "liters", "meters", "pieces"]

DEPARTMENT_WORDS = ["Licensing", "Registry", "Inspection", "Audit", "Permits", "Records", "Compliance", "Valuation"]
TITLE_WORDS = ["Senior", "Chief", "Deputy", "Assistant", "Acting", "Lead"]
TITLE_ROLES = ["Clerk", "Inspector", "Registrar", "Assessor", "Examiner", "Officer"]

NOISE_TITLE_WORDS = ["Official", "Certified", "Standard", "Annual", "Quarterly", "Consolidated", "Provisional", "Registered"]
NOISE_FORM_WORDS = ["Form", "Record", "Certificate", "Statement", "Notice", "Summary"]

CATEGORY_FLAVORS = [
    "invoice", "receipt", "permit", "license", "registration", "certificate",
    "declaration", "statement", "contract", "application", "filing", "voucher",
    "manifest", "claim", "report", "order",
]


def _pick(rng: np.random.Generator, pool: list[str]) -> str:
    return pool[int(rng.integers(len(pool)))]


def _gen_name(rng):
    return [_pick(rng, FIRST_NAMES), _pick(rng, LAST_NAMES)]


def _gen_date(rng):
    return [_pick(rng, DAYS), _pick(rng, MONTHS), _pick(rng, YEARS)]


def _gen_org(rng):
    n = int(rng.integers(1, 4))
    words = [_pick(rng, ORG_WORDS) for _ in range(n)]
    return words + [_pick(rng, ORG_SUFFIXES)]


def _gen_address(rng):
    out = [_pick(rng, STREET_NUMBERS), _pick(rng, STREET_NAMES), _pick(rng, STREET_SUFFIXES)]
    if rng.random() < 0.4:
        out.append(_pick(rng, CITIES))
    return out


def _gen_amount(rng):
    if rng.random() < 0.3:
        return [_pick(rng, AMOUNTS)]
    return [_pick(rng, AMOUNTS), _pick(rng, CURRENCIES)]


def _gen_quantity(rng):
    return [_pick(rng, SMALL_COUNTS), _pick(rng, COUNT_UNITS)]


def _gen_duration(rng):
    return [_pick(rng, SMALL_COUNTS), _pick(rng, TIME_UNITS)]


def _gen_rate(rng):
    return [_pick(rng, AMOUNTS), "per", _pick(rng, MEASURE_UNITS)]


def _gen_department(rng):
    return [_pick(rng, DEPARTMENT_WORDS), "Department"]


def _gen_title(rng):
    return [_pick(rng, TITLE_WORDS), _pick(rng, TITLE_ROLES)]


def _gen_unit(rng):
    return [_pick(rng, MEASURE_UNITS)]


# label -> (content generator, key phrase variants); every variant keeps the
# label word so key phrasing transfers across categories
VALUE_TYPES: dict[str, tuple] = {
    "address": (_gen_address, [["address"], ["registered", "address"], ["street", "address"]]),
    "amount": (_gen_amount, [["amount"], ["total", "amount"], ["amount", "due"]]),
    "applicant": (_gen_name, [["applicant"], ["applicant", "name"]]),
    "approver": (_gen_name, [["approver"], ["approver", "name"]]),
    "bank": (_gen_org, [["bank"], ["issuing", "bank"]]),
    "city": (lambda rng: [_pick(rng, CITIES)], [["city"], ["city", "of", "issue"]]),
    "company": (_gen_org, [["company"], ["company", "name"]]),
    "country": (lambda rng: [_pick(rng, COUNTRIES)], [["country"], ["country", "of", "origin"]]),
    "date": (_gen_date, [["date"], ["issue", "date"], ["date", "of", "issue"]]),
    "department": (_gen_department, [["department"], ["issuing", "department"]]),
    "duration": (_gen_duration, [["duration"], ["duration", "period"]]),
    "email": (lambda rng: [_pick(rng, EMAILS)], [["email"], ["contact", "email"]]),
    "expiry": (_gen_date, [["expiry"], ["expiry", "date"]]),
    "holder": (_gen_name, [["holder"], ["license", "holder"]]),
    "id_number": (lambda rng: [_pick(rng, CODES)], [["id", "number"], ["id", "code"]]),
    "invoice_no": (lambda rng: [_pick(rng, CODES)], [["invoice", "no"], ["invoice", "number"]]),
    "issuer": (_gen_org, [["issuer"], ["issuer", "office"]]),
    "name": (_gen_name, [["name"], ["full", "name"]]),
    "org": (_gen_org, [["org"], ["org", "unit"]]),
    "percent": (lambda rng: [_pick(rng, PERCENTS)], [["percent"], ["percent", "rate"]]),
    "phone": (lambda rng: [_pick(rng, PHONES)], [["phone"], ["phone", "number"], ["contact", "phone"]]),
    "quantity": (_gen_quantity, [["quantity"], ["total", "quantity"]]),
    "rate": (_gen_rate, [["rate"], ["unit", "rate"]]),
    "reference": (lambda rng: [_pick(rng, CODES)], [["reference"], ["reference", "code"]]),
    "signatory": (_gen_title, [["signatory"], ["signatory", "title"]]),
    "tax": (_gen_amount, [["tax"], ["tax", "amount"]]),
    "unit": (_gen_unit, [["unit"], ["unit", "of", "measure"]]),
    "valuation": (_gen_amount, [["valuation"], ["valuation", "amount"]]),
}

LAYOUT_KINDS = ["kv_rows", "kv_grid", "stacked", "table"]


@dataclass(frozen=True)
class CategorySchema:
    """Per-category generation contract: labels, key phrasing, layout count."""

    name: str
    n_layout_templates: int
    value_types: tuple[str, ...]
    key_phrases: dict[str, tuple[str, ...]] = field(hash=False)
    no_key_ratio: float = 0.305
    multi_span_ratio: float = 0.15
    question_phrases: dict[str, str] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        if self.n_layout_templates < 1:
            raise ConfigError(f"schema {self.name}: needs at least one layout template")
        if not self.value_types:
            raise ConfigError(f"schema {self.name}: needs at least one value type")

    def question_text(self, label: str) -> str:
        return self.question_phrases.get(label, label)


@dataclass(frozen=True)
class GeneratorConfig:
    n_categories: int = 10
    layouts_per_category: int = 2
    docs_per_category: int = 30
    no_key_ratio: float = 0.305
    multi_span_ratio: float = 0.12
    field_presence: float = 0.88
    second_instance_ratio: float = 0.05
    min_types: int = 6
    max_types: int = 9
    type_pool_size: int = 14
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_categories < 1:
            raise ConfigError("n_categories must be >= 1")
        if self.docs_per_category < 1:
            raise ConfigError("docs_per_category must be >= 1")
        if self.layouts_per_category < 1:
            raise ConfigError("layouts_per_category must be >= 1")
        if not 0.0 <= self.no_key_ratio <= 1.0:
            raise ConfigError("no_key_ratio must lie in [0, 1]")
        if not 0.0 <= self.multi_span_ratio <= 1.0:
            raise ConfigError("multi_span_ratio must lie in [0, 1]")
        if not 1 <= self.min_types <= self.max_types <= self.type_pool_size <= len(VALUE_TYPES):
            raise ConfigError("type count bounds out of range")


def rng_for(seed: int, *key: int) -> np.random.Generator:
    """Independent deterministic stream for (seed, key...)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, *key))))


def build_schemas(config: GeneratorConfig) -> list[CategorySchema]:
    """Derive the category schemas for a generator configuration.

    Categories draw their value types from a shared pool of
    ``type_pool_size`` labels, so every label recurs across categories.
    """
    labels = sorted(VALUE_TYPES)[: config.type_pool_size]
    schemas = []
    for cat in range(config.n_categories):
        rng = rng_for(config.seed, 101, cat)
        flavor = CATEGORY_FLAVORS[cat % len(CATEGORY_FLAVORS)]
        n_types = int(rng.integers(config.min_types, config.max_types + 1))
        chosen = sorted(str(x) for x in rng.choice(labels, size=n_types, replace=False))
        phrases = {}
        for label in chosen:
            variants = VALUE_TYPES[label][1]
            phrases[label] = tuple(variants[int(rng.integers(len(variants)))])
        schemas.append(
            CategorySchema(
                name=f"{flavor}_{cat:02d}",
                n_layout_templates=config.layouts_per_category,
                value_types=tuple(chosen),
                key_phrases=phrases,
                no_key_ratio=config.no_key_ratio,
                multi_span_ratio=config.multi_span_ratio,
            )
        )
    return schemas


def schema_by_category(schemas: list[CategorySchema]) -> dict[str, CategorySchema]:
    return {s.name: s for s in schemas}


def save_schemas(schemas: list[CategorySchema], path: str | Path) -> None:
    payload = {
        "categories": [
            {
                "name": s.name,
                "n_layout_templates": s.n_layout_templates,
                "value_types": list(s.value_types),
                "key_phrases": {k: list(v) for k, v in s.key_phrases.items()},
                "no_key_ratio": s.no_key_ratio,
                "multi_span_ratio": s.multi_span_ratio,
                "question_phrases": dict(s.question_phrases),
            }
            for s in schemas
        ]
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_schemas(path: str | Path) -> list[CategorySchema]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return [
            CategorySchema(
                name=rec["name"],
                n_layout_templates=rec["n_layout_templates"],
                value_types=tuple(rec["value_types"]),
                key_phrases={k: tuple(v) for k, v in rec["key_phrases"].items()},
                no_key_ratio=rec["no_key_ratio"],
                multi_span_ratio=rec["multi_span_ratio"],
                question_phrases=dict(rec.get("question_phrases", {})),
            )
            for rec in payload["categories"]
        ]
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ParseError(f"malformed schema file {path}: {exc}") from exc
