import sys
from pathlib import Path

import pytest

from capeval.annotations import Corpus, ImageRecord, ClassRegistry, ObjectClass, load_coco_instances, load_synonyms

sys.path.insert(0, str(Path(__file__).parent))

MINI_DIR = Path(__file__).parent.parent / "src" / "capeval" / "data" / "mini"


@pytest.fixture(scope="session")
def mini_dir() -> Path:
    return MINI_DIR


@pytest.fixture(scope="session")
def mini_corpus() -> Corpus:
    return load_coco_instances(MINI_DIR / "instances.json", synonyms=load_synonyms())


def make_registry(*specs) -> ClassRegistry:
    """specs: (id, name) or (id, name, [synonyms...])."""
    classes = []
    for spec in specs:
        cid, name = spec[0], spec[1]
        syns = tuple(spec[2]) if len(spec) > 2 else ()
        classes.append(ObjectClass(id=cid, name=name, synonyms=syns))
    return ClassRegistry(classes)


def make_corpus(registry: ClassRegistry, present_by_image: dict) -> Corpus:
    images = [
        ImageRecord(image_id=image_id, present=frozenset(present))
        for image_id, present in present_by_image.items()
    ]
    return Corpus(images=images, registry=registry)
