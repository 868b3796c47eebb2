"""Object-annotation ingestion: COCO instances files, class registries with
synonyms, and image-level frequency / co-occurrence statistics."""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import IngestionError, ValidationError


@dataclass(frozen=True)
class ObjectClass:
    id: int
    name: str
    synonyms: tuple[str, ...] = ()


@dataclass
class ClassRegistry:
    """Fixed inventory of object classes plus their matching synonyms."""

    classes: list[ObjectClass]
    _by_id: dict[int, ObjectClass] = field(init=False, repr=False)
    _by_name: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        by_id: dict[int, ObjectClass] = {}
        by_name: dict[str, int] = {}
        phrase_owner: dict[str, int] = {}
        for cls in self.classes:
            if cls.id in by_id:
                raise ValidationError(f"duplicate class id {cls.id}")
            name = cls.name.lower().strip()
            if name in by_name:
                raise ValidationError(f"duplicate class name {cls.name!r}")
            by_id[cls.id] = cls
            by_name[name] = cls.id
            for phrase in (name, *[s.lower().strip() for s in cls.synonyms]):
                owner = phrase_owner.get(phrase)
                if owner is not None and owner != cls.id:
                    raise ValidationError(
                        f"synonym {phrase!r} maps to both class {owner} and {cls.id}"
                    )
                phrase_owner[phrase] = cls.id
        self._by_id = by_id
        self._by_name = by_name

    def __len__(self) -> int:
        return len(self.classes)

    def __contains__(self, class_id: int) -> bool:
        return class_id in self._by_id

    def get(self, class_id: int) -> ObjectClass:
        return self._by_id[class_id]

    def name_of(self, class_id: int) -> str:
        return self._by_id[class_id].name

    def id_of(self, name: str) -> int:
        return self._by_name[name.lower().strip()]

    def ids(self) -> list[int]:
        return sorted(self._by_id)

    def match_lexicon(self) -> dict[str, int]:
        """Lowercased phrase -> class id, names and synonyms together."""
        lex: dict[str, int] = {}
        for cls in self.classes:
            lex[cls.name.lower().strip()] = cls.id
            for syn in cls.synonyms:
                lex[syn.lower().strip()] = cls.id
        return lex


@dataclass(frozen=True)
class ImageRecord:
    image_id: int | str
    present: frozenset[int]


@dataclass
class Corpus:
    """Images with their annotated object-class sets (order: by image_id)."""

    images: list[ImageRecord]
    registry: ClassRegistry

    def __post_init__(self):
        seen = set()
        for img in self.images:
            if img.image_id in seen:
                raise ValidationError(f"duplicate image_id {img.image_id!r}")
            seen.add(img.image_id)
            for cid in img.present:
                if cid not in self.registry:
                    raise ValidationError(
                        f"image {img.image_id!r} references unknown class id {cid}"
                    )
        self.images = sorted(
            self.images, key=lambda im: (isinstance(im.image_id, str), im.image_id)
        )
        self._by_id = {img.image_id: img for img in self.images}

    def __len__(self) -> int:
        return len(self.images)

    def __contains__(self, image_id) -> bool:
        return image_id in self._by_id

    def present(self, image_id) -> frozenset[int]:
        return self._by_id[image_id].present

    def digest(self) -> str:
        """Digest over the logical content; stable across file formatting."""
        payload = {
            "classes": [
                [c.id, c.name, sorted(c.synonyms)] for c in sorted(self.registry.classes, key=lambda c: c.id)
            ],
            "images": [[str(im.image_id), sorted(im.present)] for im in self.images],
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return "sha256:" + hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass
class CooccurrenceTable:
    """Image-level class frequencies and symmetric pair counts."""

    frequency: dict[int, int]
    counts: dict[tuple[int, int], int]

    def freq(self, class_id: int) -> int:
        return self.frequency.get(class_id, 0)

    def pair(self, a: int, b: int) -> int:
        if a == b:
            return self.frequency.get(a, 0)
        key = (a, b) if a < b else (b, a)
        return self.counts.get(key, 0)

    def ranking(self) -> list[int]:
        """Class ids by descending frequency, ties broken by ascending id."""
        return sorted(self.frequency, key=lambda c: (-self.frequency[c], c))


def load_synonyms(path: str | Path | None = None) -> dict[str, list[str]]:
    """Read a synonym TSV (class_name<TAB>synonym, one pair per line).

    ``None`` loads the bundled MSCOCO list.
    """
    if path is None:
        text = resources.files("capeval.data").joinpath("mscoco_synonyms.tsv").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    table: dict[str, list[str]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise IngestionError(f"synonym file line {lineno}: expected 2 tab-separated fields")
        name, syn = (p.strip().lower() for p in parts)
        table.setdefault(name, [])
        if syn and syn != name and syn not in table[name]:
            table[name].append(syn)
    return table


def load_class_split(path: str | Path) -> list[str]:
    """Newline-separated class names (comments and blanks skipped)."""
    names = []
    for line in Path(path).read_text("utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            names.append(line.lower())
    return names


def registry_from_categories(
    categories: list[dict],
    synonyms: dict[str, list[str]] | None = None,
) -> ClassRegistry:
    classes = []
    syn_table = synonyms or {}
    for cat in sorted(categories, key=lambda c: c["id"]):
        name = cat["name"].strip()
        classes.append(
            ObjectClass(
                id=int(cat["id"]),
                name=name,
                synonyms=tuple(syn_table.get(name.lower(), ())),
            )
        )
    return ClassRegistry(classes)


def load_coco_instances(
    path: str | Path,
    registry_filter: set[int] | None = None,
    synonyms: dict[str, list[str]] | None = None,
) -> Corpus:
    """Build a Corpus from a COCO "instances" JSON file.

    Every image listed in ``images[]`` is kept, including ones without
    annotations. ``registry_filter`` restricts both the registry and the
    present sets to the given class ids (how the O365/COCO and
    O365/non-COCO splits are produced).
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise IngestionError(f"cannot read COCO instances file {path}: {exc}") from exc

    for key in ("images", "annotations", "categories"):
        if key not in data:
            raise IngestionError(f"COCO instances file {path} missing key {key!r}")

    categories = data["categories"]
    if registry_filter is not None:
        categories = [c for c in categories if c["id"] in registry_filter]
        if not categories:
            raise IngestionError("registry filter removed every category")
    registry = registry_from_categories(categories, synonyms)

    known_ids = {c["id"] for c in data["categories"]}
    present: dict = {}
    for img in data["images"]:
        if "id" not in img:
            raise IngestionError(f"image record without id: {img!r}")
        present[img["id"]] = set()
    for ann in data["annotations"]:
        if "image_id" not in ann or "category_id" not in ann:
            raise IngestionError(f"annotation record missing keys: {ann!r}")
        img_id, cat_id = ann["image_id"], ann["category_id"]
        if img_id not in present:
            raise IngestionError(f"annotation {ann.get('id', '?')} references unknown image {img_id}")
        if cat_id not in known_ids:
            raise IngestionError(f"annotation {ann.get('id', '?')} references unknown category {cat_id}")
        if registry_filter is None or cat_id in registry_filter:
            present[img_id].add(cat_id)

    images = [
        ImageRecord(image_id=k, present=frozenset(v)) for k, v in present.items()
    ]
    return Corpus(images=images, registry=registry)


def build_stats(corpus: Corpus) -> CooccurrenceTable:
    """Exact image-level frequencies and symmetric co-occurrence counts."""
    if not corpus.images:
        raise ValidationError("cannot build statistics for an empty corpus")
    frequency: Counter = Counter()
    counts: Counter = Counter()
    for img in corpus.images:
        ids = sorted(img.present)
        frequency.update(ids)
        for i, a in enumerate(ids):
            for b in ids[i + 1 :]:
                counts[(a, b)] += 1
    table = {cid: 0 for cid in corpus.registry.ids()}
    table.update(frequency)
    return CooccurrenceTable(frequency=table, counts=dict(counts))
