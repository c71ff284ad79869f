"""Dataset assembly, seeding and JSONL persistence."""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import yaml

from .lingo import TemplatePack, render_story, shipped_pack
from .naming import NamePool, NonceSpec, assign_names, builtin_pool, nonce_pool
from .solver import verify_instance
from .walks import (
    DEFAULT_MAX_K,
    ShufflePolicy,
    default_distractor_count,
    generate_walk,
    inject_noise,
    make_skeleton,
    order_story,
)

DEFAULT_K_VALUES = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 50, 100)
VARIANTS = ("clean-ordered", "clean-shuffled", "noisy-ordered", "noisy-shuffled")
RECORD_FIELDS = ("id", "k", "story", "question", "answer", "meta")


class VerificationError(RuntimeError):
    pass


class DatasetFormatError(ValueError):
    def __init__(self, path, line: int, reason: str):
        self.line = line
        super().__init__(f"{path}:{line}: {reason}")


@dataclass
class StoryInstance:
    id: str
    k: int
    story: list[str]
    question: str
    answer: str
    meta: dict


@dataclass
class BuildConfig:
    k_values: list[int] = field(default_factory=lambda: list(DEFAULT_K_VALUES))
    per_k_count: int = 200
    language: str = "english"
    naming: str = "symbolic"
    variants: list[str] = field(default_factory=lambda: list(VARIANTS))
    master_seed: int = 0
    distractors: int | None = None  # None: max(1, ceil(k/2))
    chain_depth: int = 1
    shuffle: str = "full"  # "full" or "partial:<p>"
    randomize_query: bool = False
    max_k: int = DEFAULT_MAX_K
    nonce_pool_size: int = 256
    nonce_per_instance: bool = False

    def __post_init__(self):
        if self.per_k_count < 1:
            raise ValueError("per_k_count must be at least 1")
        if not self.k_values:
            raise ValueError("k_values must not be empty")
        bad = [v for v in self.variants if v not in VARIANTS]
        if bad:
            raise ValueError(f"unknown variants {bad}; choose from {VARIANTS}")
        if ShufflePolicy.parse(self.shuffle).kind == "ordered":
            raise ValueError("shuffle policy for shuffled variants cannot be 'ordered'")

    @classmethod
    def from_file(cls, path) -> "BuildConfig":
        doc = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        return cls(**doc)

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()

    def distractors_for(self, k: int) -> int:
        return default_distractor_count(k) if self.distractors is None else self.distractors


def derive_seed(master: int, key: tuple) -> int:
    """First 8 bytes (big-endian) of SHA-256 over "master:k:index:label" in UTF-8."""
    text = ":".join(str(p) for p in (master, *key))
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")


def instance_id(k: int, index: int, variant: str) -> str:
    return f"k{k:03d}-{index:06d}-{variant}"


class Builder:
    """Holds the packs and name pools for one build; produces instances by key."""

    def __init__(self, cfg: BuildConfig, pack: TemplatePack | None = None, pool: NamePool | None = None):
        self.cfg = cfg
        self.pack = pack or shipped_pack(cfg.language)
        self.pool = pool if pool is not None else self._make_pool()

    def _direction_tokens(self) -> list[str]:
        try:
            tokens = shipped_pack("nonce-direction").direction_lexicon
        except KeyError:
            return []
        return [t for v in tokens.values() for t in v]

    def _make_pool(self) -> NamePool | None:
        if self.cfg.naming != "nonce":
            return builtin_pool(self.cfg.naming)
        if self.cfg.nonce_per_instance:
            return None
        rng = random.Random(derive_seed(self.cfg.master_seed, ("nonce-pool",)))
        return nonce_pool(self.cfg.nonce_pool_size, NonceSpec(), rng, exclude=self._direction_tokens())

    def _stream(self, k: int, index: int, label: str) -> random.Random:
        return random.Random(derive_seed(self.cfg.master_seed, (k, index, label)))

    def instance(self, k: int, index: int, variant: str) -> StoryInstance:
        cfg = self.cfg
        noisy = variant.startswith("noisy")
        shuffled = variant.endswith("shuffled")
        walk_rng = self._stream(k, index, "walk")
        skel = make_skeleton(generate_walk(k, walk_rng, max_k=cfg.max_k), walk_rng,
                             randomize_query=cfg.randomize_query)
        m = cfg.distractors_for(k)
        if noisy:
            skel = inject_noise(skel, m, self._stream(k, index, "noise"), chain_depth=cfg.chain_depth)
        if shuffled:
            skel = order_story(skel, cfg.shuffle, self._stream(k, index, "order"))
        # Names are drawn for the noisy node count in every variant so paired variants agree.
        name_rng = self._stream(k, index, "names")
        pool = self.pool
        if pool is None:
            pool = nonce_pool(k + 1 + m, NonceSpec(), name_rng, exclude=self._direction_tokens())
        names = assign_names(k + 1 + m, pool, name_rng)
        rendered = render_story(skel, names, self.pack, self._stream(k, index, "render"))
        return StoryInstance(
            id=instance_id(k, index, variant),
            k=k,
            story=rendered.lines,
            question=rendered.question,
            answer=self.pack.label_of(skel.answer),
            meta={
                "language": self.pack.language,
                "naming": cfg.naming,
                "noisy": noisy,
                "shuffled": shuffled,
                "seed": cfg.master_seed,
                "index": index,
                "distractors": skel.distractors,
            },
        )


def build_dataset(cfg: BuildConfig, builder: Builder | None = None, verify: bool = True) -> Iterator[StoryInstance]:
    """Instances ordered by (variant, k, index); each is re-verified before it is yielded."""
    builder = builder or Builder(cfg)
    for variant in cfg.variants:
        for k in cfg.k_values:
            for index in range(cfg.per_k_count):
                inst = builder.instance(k, index, variant)
                if verify and not verify_instance(inst, builder.pack):
                    raise VerificationError(f"instance {inst.id} failed verification")
                yield inst


def to_json(inst: StoryInstance) -> str:
    return json.dumps(asdict(inst), ensure_ascii=False, separators=(",", ":"))


def write_jsonl(instances: Iterable[StoryInstance], path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for inst in instances:
            fh.write(to_json(inst) + "\n")
            n += 1
    return n


def _from_obj(obj) -> StoryInstance:
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    missing = [f for f in RECORD_FIELDS if f not in obj]
    if missing:
        raise ValueError(f"missing fields {missing}")
    if not isinstance(obj["story"], list) or not isinstance(obj["meta"], dict):
        raise ValueError("story must be a list and meta an object")
    return StoryInstance(**{f: obj[f] for f in RECORD_FIELDS})


def read_jsonl(path, spot_check: float = 0.0, pack: TemplatePack | None = None) -> list[StoryInstance]:
    """Load records; with spot_check > 0, re-verify every round(1/spot_check)-th one."""
    out = []
    stride = max(1, round(1 / spot_check)) if spot_check > 0 else 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                inst = _from_obj(json.loads(line))
            except (json.JSONDecodeError, ValueError, TypeError) as e:
                raise DatasetFormatError(path, lineno, str(e)) from None
            if stride and len(out) % stride == 0 and not verify_instance(inst, pack):
                raise VerificationError(f"{path}:{lineno}: instance {inst.id} failed verification")
            out.append(inst)
    return out


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _shard_lines(cfg_dict: dict, variant: str, k: int) -> list[str]:
    cfg = BuildConfig(**{**cfg_dict, "variants": [variant], "k_values": [k]})
    return [to_json(inst) for inst in build_dataset(cfg)]


def _shards(cfg: BuildConfig, builder: Builder, workers: int) -> Iterator[tuple[str, int, list[str]]]:
    """(variant, k, lines) per shard, always in (variant, k) config order."""
    keys = [(v, k) for v in cfg.variants for k in cfg.k_values]
    if workers <= 1:
        for v, k in keys:
            sub = BuildConfig(**{**cfg.to_dict(), "variants": [v], "k_values": [k]})
            yield v, k, [to_json(i) for i in build_dataset(sub, Builder(sub, builder.pack, builder.pool))]
        return
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(workers) as pool:
        futures = [pool.submit(_shard_lines, cfg.to_dict(), v, k) for v, k in keys]
        for (v, k), fut in zip(keys, futures):
            yield v, k, fut.result()


def write_dataset(cfg: BuildConfig, out_dir, builder: Builder | None = None, workers: int = 1) -> dict:
    """Write instances.jsonl and manifest.json into out_dir; returns the manifest.

    Shards may be built in parallel processes; they are written in config order,
    so the bytes do not depend on `workers`.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    builder = builder or Builder(cfg)
    counts: dict[str, int] = {}
    data = out / "instances.jsonl"
    total = 0
    with open(data, "w", encoding="utf-8", newline="\n") as fh:
        for variant, k, lines in _shards(cfg, builder, workers):
            counts[f"{variant}/k={k}"] = len(lines)
            total += len(lines)
            fh.writelines(line + "\n" for line in lines)
    manifest = {
        "config": cfg.to_dict(),
        "config_sha256": cfg.digest(),
        "master_seed": cfg.master_seed,
        "pack": {"language": builder.pack.language, "version": builder.pack.version,
                 "digest": builder.pack.digest},
        "name_pool": {"scheme": cfg.naming, "size": len(builder.pool) if builder.pool else None},
        "counts": counts,
        "total": total,
        "files": {"instances.jsonl": file_sha256(data)},
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return manifest


def load_dataset(path, spot_check: float = 0.01) -> list[StoryInstance]:
    p = Path(path)
    if p.is_dir():
        p = p / "instances.jsonl"
    return read_jsonl(p, spot_check=spot_check)
