"""Document model: tokens with boxes, entities, and key-value links."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ValidationError

KEY = "key"
VALUE = "value"


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box, top-left (x1, y1) to bottom-right (x2, y2), pixels."""

    x1: int
    y1: int
    x2: int
    y2: int

    def __post_init__(self) -> None:
        if self.x1 > self.x2 or self.y1 > self.y2:
            raise ValidationError(f"degenerate bbox {self.as_list()}")
        if min(self.x1, self.y1) < 0:
            raise ValidationError(f"negative bbox coordinate {self.as_list()}")

    @property
    def height(self) -> int:
        return self.y2 - self.y1

    def as_list(self) -> list[int]:
        return [self.x1, self.y1, self.x2, self.y2]


@dataclass(frozen=True)
class Token:
    text: str
    bbox: BBox

    def __post_init__(self) -> None:
        if not self.text or any(c.isspace() for c in self.text):
            raise ValidationError(f"token text must be non-empty and whitespace-free: {self.text!r}")


@dataclass(frozen=True)
class Entity:
    """A key or value span set. Spans are (start, end) token ranges, end exclusive.

    Multi-span entities model folded rows and other discontinuities; spans are
    sorted, disjoint, and listed in reading order.
    """

    role: str
    label: str | None
    spans: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.role not in (KEY, VALUE):
            raise ValidationError(f"entity role must be key or value, got {self.role!r}")
        if self.role == VALUE and not self.label:
            raise ValidationError("value entity requires a label")
        if not self.spans:
            raise ValidationError("entity requires at least one span")
        prev_end = -1
        for start, end in self.spans:
            if start >= end:
                raise ValidationError(f"empty span ({start}, {end})")
            if start < prev_end:
                raise ValidationError(f"spans overlap or are unsorted: {self.spans}")
            prev_end = end

    def token_indices(self) -> list[int]:
        out: list[int] = []
        for start, end in self.spans:
            out.extend(range(start, end))
        return out


@dataclass(frozen=True)
class KVLink:
    key_entity_index: int
    value_entity_index: int


@dataclass
class Document:
    id: str
    form_category: str
    page_width: int
    page_height: int
    tokens: list[Token] = field(default_factory=list)
    entities: list[Entity] = field(default_factory=list)
    kv_links: list[KVLink] = field(default_factory=list)

    def validate(self) -> None:
        """Raise ValidationError naming this document on any broken invariant."""
        for tok in self.tokens:
            if tok.bbox.x2 > self.page_width or tok.bbox.y2 > self.page_height:
                raise ValidationError(f"doc {self.id}: token bbox {tok.bbox.as_list()} exceeds page")
        n = len(self.tokens)
        for ent in self.entities:
            for start, end in ent.spans:
                if end > n:
                    raise ValidationError(f"doc {self.id}: span ({start}, {end}) beyond {n} tokens")
        linked_values: set[int] = set()
        for link in self.kv_links:
            for idx in (link.key_entity_index, link.value_entity_index):
                if not 0 <= idx < len(self.entities):
                    raise ValidationError(f"doc {self.id}: kv link references entity {idx}")
            if self.entities[link.key_entity_index].role != KEY:
                raise ValidationError(f"doc {self.id}: link key side is not a key entity")
            if self.entities[link.value_entity_index].role != VALUE:
                raise ValidationError(f"doc {self.id}: link value side is not a value entity")
            if link.value_entity_index in linked_values:
                raise ValidationError(f"doc {self.id}: value entity {link.value_entity_index} linked twice")
            linked_values.add(link.value_entity_index)

    def value_entities(self) -> list[tuple[int, Entity]]:
        return [(i, e) for i, e in enumerate(self.entities) if e.role == VALUE]

    def key_for_value(self, value_index: int) -> int | None:
        for link in self.kv_links:
            if link.value_entity_index == value_index:
                return link.key_entity_index
        return None
