"""Named experiment configurations.

Each experiment fixes a prompt mode plus the dataset parameters it is run
on. The baseline data is clean, shuffled, English, symbolic names.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..dataset import DEFAULT_K_VALUES, BuildConfig

SUBSTITUTIVITY_K = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 50, 100)
ASP_K = (1, 2, 5, 10, 20, 50, 100)


@dataclass(frozen=True)
class Experiment:
    name: str
    mode: str
    language: str = "english"
    naming: str = "symbolic"
    variant: str = "clean-shuffled"
    k_values: tuple[int, ...] = DEFAULT_K_VALUES
    per_k_count: int = 200
    repeats: int = 3
    baseline: str | None = None  # name of the experiment to compare against
    note: str = ""

    def build_config(self, master_seed: int = 0, per_k_count: int | None = None,
                     k_values=None) -> BuildConfig:
        return BuildConfig(
            k_values=list(k_values or self.k_values),
            per_k_count=per_k_count or self.per_k_count,
            language=self.language,
            naming=self.naming,
            variants=[self.variant],
            master_seed=master_seed,
        )


def _all() -> dict[str, Experiment]:
    exps = [
        Experiment("productivity", "five_shot_default", note="five-shot, every k"),
        Experiment("productivity_zero_shot", "zero_shot", baseline="productivity"),
        Experiment("systematicity", "five_shot_familiarization", language="nonce-direction",
                   baseline="productivity", note="nonce direction words after a familiarisation prompt"),
        Experiment("overgeneralisation_ordered_baseline", "five_shot_ordered", variant="clean-ordered"),
        Experiment("overgeneralisation_shuffled", "five_shot_ordered", variant="clean-shuffled",
                   baseline="overgeneralisation_ordered_baseline", note="ordered prompt, shuffled test stories"),
        Experiment("overgeneralisation_noisy", "five_shot_default", variant="noisy-shuffled",
                   baseline="productivity", note="default prompt, noisy test stories"),
        Experiment("overgeneralisation_shuffled_zero_shot", "zero_shot", variant="clean-shuffled",
                   baseline="overgeneralisation_ordered_zero_shot"),
        Experiment("overgeneralisation_ordered_zero_shot", "zero_shot", variant="clean-ordered"),
        Experiment("overgeneralisation_noisy_zero_shot", "zero_shot", variant="noisy-shuffled",
                   baseline="productivity_zero_shot"),
    ]
    for naming in ("symbolic", "male", "female", "nonce", "city"):
        for mode, tag in (("five_shot_default", ""), ("zero_shot", "_zero_shot")):
            exps.append(Experiment(f"substitutivity_{naming}{tag}", mode, naming=naming,
                                   k_values=SUBSTITUTIVITY_K,
                                   baseline=None if naming == "symbolic" else f"substitutivity_symbolic{tag}"))
    for language in ("english", "hindi", "swedish"):
        exps.append(Experiment(f"translation_{language}", "five_shot_default", language=language,
                               variant="clean-ordered",
                               baseline=None if language == "english" else "translation_english"))
    exps.append(Experiment("llm_asp", "asp_translation", k_values=ASP_K, repeats=1,
                           note="facts from the model, answer from the solver"))
    return {e.name: e for e in exps}


EXPERIMENTS: dict[str, Experiment] = _all()


def get(name: str) -> Experiment:
    try:
        return EXPERIMENTS[name]
    except KeyError:
        raise KeyError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}") from None
