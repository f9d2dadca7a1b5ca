"""Benchmark harness: synthetic scenes, dataset ingestion, reports, CLI.

A dataset on disk is a directory with ``images/`` and ``masks/`` holding
matching basenames (synthetic datasets add ``skylines/`` CSVs). A benchmark
run scores a list of pipelines over one dataset and emits Table-style rows:
approach name, mean accuracy, skyline distance mean and spread.

Pipelines come in two kinds: ``internal`` ones run a trained patch
classifier plus a DP extractor; ``external`` ones evaluate masks somebody
else produced, one PNG per image id.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from PIL import Image

from . import __version__
from .classifier import (
    BOUNDARY,
    REGION,
    TrainConfig,
    dense_score_map,
    load_model,
    sample_keypoints,
    save_model,
    save_score_map,
    train,
)
from .dpextract import DCSI, ENERGY, DpConfig, extract_dcsi, extract_energy
from .errors import DataError
from .imagecore import (
    gradient_field,
    load_gray_image,
    load_mask,
    mask_from_skyline,
    save_gray_image,
    save_mask,
    save_skyline,
    skyline_from_mask,
    skyline_from_mask_clamped,
)
from .metrics import (
    POPULATION,
    SAMPLE,
    ImageScore,
    LayerSpec,
    aggregate,
    conv_out_resolution,
    deconv_out_resolution,
    pixel_accuracy,
    pixel_distance,
)
from .postprocess import postprocess_I, postprocess_II

INTERNAL = "internal"
EXTERNAL = "external"

PP_NONE = "none"
PP1 = "pp1"
PP2 = "pp2"

_SKY_GRADIENT_SPAN = 0.12  # sky darkens by this much from top row to bottom
_GROUND_SPECKLE = 0.08  # uniform texture amplitude around the ground base


@dataclass(frozen=True)
class ManifestEntry:
    image: Path
    mask: Path
    id: str


@dataclass(frozen=True)
class DatasetManifest:
    entries: list[ManifestEntry]


@dataclass(frozen=True)
class SynthConfig:
    count: int
    seed: int = 0
    width: int = 256
    height: int = 192
    ridge_roughness: float = 0.5
    noise_sigma: float = 0.02
    sky_base: float = 0.85
    ground_base: float = 0.35

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if self.width < 32 or self.height < 32:
            raise ValueError("width and height must be at least 32")
        if not 0.0 < self.ridge_roughness <= 1.0:
            raise ValueError("ridge_roughness must lie in (0, 1]")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be non-negative")
        if not (0.0 <= self.ground_base <= 1.0 and 0.0 <= self.sky_base <= 1.0):
            raise ValueError("base luminances must lie in [0, 1]")
        if self.sky_base - self.ground_base < 0.2:
            raise ValueError("sky_base must exceed ground_base by at least 0.2")


@dataclass(frozen=True)
class PipelineSpec:
    name: str
    source: str
    postproc: str = PP_NONE
    variant: str | None = None
    model: Path | None = None
    dp: DpConfig | None = None
    masks_dir: Path | None = None
    connectivity: int = 4

    def __post_init__(self) -> None:
        if not self.name or any(ch in self.name for ch in ",\n|"):
            raise ValueError("pipeline name must be non-empty without ',', '|', newline")
        if self.postproc not in (PP_NONE, PP1, PP2):
            raise ValueError(f"unknown postproc {self.postproc!r}")
        if self.connectivity not in (4, 8):
            raise ValueError("connectivity must be 4 or 8")
        if self.source == INTERNAL:
            if self.variant not in (DCSI, ENERGY):
                raise ValueError("internal pipeline needs variant dcsi or energy")
            if self.model is None:
                raise ValueError("internal pipeline needs a model path")
            if self.dp is None:
                object.__setattr__(self, "dp", DpConfig(variant=self.variant))
            elif self.dp.variant != self.variant:
                raise ValueError("dp config variant does not match the pipeline variant")
        elif self.source == EXTERNAL:
            if self.masks_dir is None:
                raise ValueError("external pipeline needs a masks_dir")
        else:
            raise ValueError(f"unknown source {self.source!r}")


@dataclass(frozen=True)
class ReportRow:
    approach: str
    accuracy: float
    dist_mean: float
    dist_std: float
    n_images: int = 0
    n_failed: int = 0


def _ridge_profile(rng: np.random.Generator, cfg: SynthConfig) -> np.ndarray:
    """Seeded 1-D midpoint displacement, clipped away from the borders."""
    size = 1
    while size < cfg.width:
        size *= 2
    prof = np.empty(size + 1)
    prof[0] = rng.uniform(0.3, 0.7)
    prof[size] = prof[0] + cfg.ridge_roughness * rng.uniform(-0.2, 0.2)
    amp = 0.5 * cfg.ridge_roughness
    step = size
    while step > 1:
        half = step // 2
        mids = np.arange(half, size, step)
        prof[mids] = 0.5 * (prof[mids - half] + prof[mids + half]) + rng.uniform(
            -amp, amp, mids.size
        )
        amp *= 0.5
        step = half
    rows = np.rint(prof[: cfg.width] * (cfg.height - 1)).astype(np.int64)
    return np.clip(rows, cfg.height // 8, cfg.height - cfg.height // 8)


def _render_scene(rng: np.random.Generator, mask: np.ndarray, cfg: SynthConfig) -> np.ndarray:
    rows, cols = mask.shape
    ramp = np.arange(rows, dtype=np.float64)[:, None] / (rows - 1)
    sky = np.broadcast_to(cfg.sky_base - _SKY_GRADIENT_SPAN * ramp, (rows, cols))
    ground = cfg.ground_base + rng.uniform(-_GROUND_SPECKLE, _GROUND_SPECKLE, (rows, cols))
    img = np.where(mask, ground, sky)
    img = img + rng.normal(0.0, cfg.noise_sigma, (rows, cols))
    return np.clip(img, 0.0, 1.0)


def synth_generate(cfg: SynthConfig, out: str | Path) -> DatasetManifest:
    """Render ``cfg.count`` scenes with ground truth; reruns are byte-identical.

    Every image draws from its own generator seeded by (cfg.seed, index), so
    any subset can be regenerated without replaying the rest.
    """
    root = Path(out)
    for sub in ("images", "masks", "skylines"):
        (root / sub).mkdir(parents=True, exist_ok=True)
    entries = []
    for i in range(cfg.count):
        rng = np.random.default_rng([cfg.seed, i])
        profile = _ridge_profile(rng, cfg)
        mask = mask_from_skyline(profile, cfg.height)
        img = _render_scene(rng, mask, cfg)
        name = f"{i:04d}"
        image_path = root / "images" / f"{name}.png"
        mask_path = root / "masks" / f"{name}.png"
        save_gray_image(img, image_path)
        save_mask(mask, mask_path)
        save_skyline(profile, root / "skylines" / f"{name}.csv")
        entries.append(ManifestEntry(image=image_path, mask=mask_path, id=name))
    return DatasetManifest(entries=entries)


def _png_dims(path: Path) -> tuple[int, int]:
    try:
        with Image.open(path) as im:
            return im.height, im.width
    except OSError as exc:
        raise DataError(f"unreadable image {path}: {exc}") from exc


def ingest_dataset(root: str | Path) -> DatasetManifest:
    """Scan a dataset directory into a manifest sorted by image id."""
    root = Path(root)
    images = root / "images"
    masks = root / "masks"
    if not images.is_dir() or not masks.is_dir():
        raise DataError(f"{root} must contain images/ and masks/ directories")
    image_files = sorted(p for p in images.iterdir() if p.is_file())
    if not image_files:
        raise DataError(f"empty dataset: no files under {images}")
    entries = []
    for image_path in image_files:
        name = image_path.stem
        mask_path = masks / f"{name}.png"
        if not mask_path.is_file():
            raise DataError(f"no mask for image {name}")
        if _png_dims(image_path) != _png_dims(mask_path):
            raise DataError(f"image and mask dimensions differ for {name}")
        entries.append(ManifestEntry(image=image_path, mask=mask_path, id=name))
    known = {e.id for e in entries}
    for mask_path in sorted(p for p in masks.iterdir() if p.is_file()):
        if mask_path.stem not in known:
            raise DataError(f"no image for mask {mask_path.stem}")
    return DatasetManifest(entries=sorted(entries, key=lambda e: e.id))


def train_from_manifest(
    manifest: DatasetManifest, cfg: TrainConfig, mode: str = BOUNDARY
):
    """Pool keypoint samples over all manifest images and fit one model.

    Each image samples with its own seed (cfg.seed + image index) so the
    draw does not repeat across images.
    """
    samples = []
    for i, entry in enumerate(manifest.entries):
        img = load_gray_image(entry.image)
        gt_mask = load_mask(entry.mask)
        if gt_mask.shape != img.shape:
            raise DataError(f"image and mask dimensions differ for {entry.id}")
        gt = skyline_from_mask_clamped(gt_mask)
        samples += sample_keypoints(img, gt, replace(cfg, seed=cfg.seed + i), mode)
    return train(samples, cfg, mode)


def load_pipeline_specs(path: str | Path) -> list[PipelineSpec]:
    """Parse the key=value pipeline spec file, one pipeline per section."""
    parser = configparser.ConfigParser()
    try:
        if not parser.read(path):
            raise DataError(f"unreadable pipeline spec {path}")
    except configparser.Error as exc:
        raise DataError(f"malformed pipeline spec {path}: {exc}") from exc
    if not parser.sections():
        raise DataError(f"pipeline spec {path} defines no pipelines")
    base = Path(path).parent
    specs = []
    for section in parser.sections():
        sec = parser[section]
        try:
            source = sec.get("source", INTERNAL)
            dp = None
            variant = sec.get("variant")
            model = sec.get("model")
            masks_dir = sec.get("masks_dir")
            if source == INTERNAL and variant is not None:
                dp = DpConfig(
                    variant=variant,
                    delta=sec.getint("delta", DpConfig.delta),
                    jump_weight=sec.getfloat("lambda", DpConfig.jump_weight),
                    edge_weight=sec.getfloat("mu", DpConfig.edge_weight),
                    likelihood_floor=sec.getfloat(
                        "likelihood_floor", DpConfig.likelihood_floor
                    ),
                )
            specs.append(
                PipelineSpec(
                    name=sec.get("name", section),
                    source=source,
                    postproc=sec.get("postproc", PP_NONE).lower(),
                    variant=variant,
                    model=base / model if model else None,
                    dp=dp,
                    masks_dir=base / masks_dir if masks_dir else None,
                    connectivity=sec.getint("connectivity", 4),
                )
            )
        except ValueError as exc:
            raise DataError(f"bad pipeline section [{section}]: {exc}") from exc
    return specs


_MODE_FOR_VARIANT = {DCSI: BOUNDARY, ENERGY: REGION}


def _prepare_runner(pipeline: PipelineSpec):
    """Load and validate what a pipeline needs before the image loop."""
    if pipeline.source == INTERNAL:
        model = load_model(pipeline.model)
        needed = _MODE_FOR_VARIANT[pipeline.variant]
        if model.mode != needed:
            raise DataError(
                f"pipeline {pipeline.name}: {pipeline.variant} extraction needs a "
                f"{needed}-mode model, got {model.mode}"
            )
        return pipeline, model
    if not pipeline.masks_dir.is_dir():
        raise DataError(f"pipeline {pipeline.name}: masks_dir {pipeline.masks_dir} missing")
    return pipeline, None


_POSTPROC_FN = {
    PP_NONE: lambda mask, connectivity: mask,
    PP1: postprocess_I,
    PP2: postprocess_II,
}


def _evaluate_entry(task) -> list:
    """Score one image under every pipeline; failures become messages."""
    entry, runners, clamp = task
    to_skyline = skyline_from_mask_clamped if clamp else skyline_from_mask
    try:
        img = load_gray_image(entry.image)
        gt_mask = load_mask(entry.mask)
        if gt_mask.shape != img.shape:
            raise DataError(f"image and mask dimensions differ for {entry.id}")
        gt_skyline = to_skyline(gt_mask)
    except (DataError, ValueError) as exc:
        return [str(exc)] * len(runners)
    grad = None
    results = []
    for pipeline, model in runners:
        try:
            if pipeline.source == INTERNAL:
                scores = dense_score_map(img, model)
                if pipeline.variant == DCSI:
                    pred = extract_dcsi(scores, pipeline.dp)
                else:
                    if grad is None:
                        grad = gradient_field(img)
                    pred = extract_energy(scores, grad, pipeline.dp)
                mask = mask_from_skyline(pred.skyline, img.shape[0])
            else:
                mask = load_mask(pipeline.masks_dir / f"{entry.id}.png")
                if mask.shape != gt_mask.shape:
                    raise DataError(f"external mask dimensions differ for {entry.id}")
            mask = _POSTPROC_FN[pipeline.postproc](mask, pipeline.connectivity)
            results.append(
                ImageScore(
                    accuracy=pixel_accuracy(mask, gt_mask),
                    mean_abs_distance=pixel_distance(to_skyline(mask), gt_skyline),
                )
            )
        except (DataError, ValueError) as exc:
            results.append(str(exc))
    return results


def run_benchmark(
    manifest: DatasetManifest,
    pipelines: list[PipelineSpec],
    workers: int = 1,
    std_mode: str = POPULATION,
    clamp_empty_columns: bool = True,
) -> list[ReportRow]:
    """Evaluate every pipeline over the manifest and aggregate per pipeline.

    Per-image work is independent; with workers > 1 it runs in a process
    pool. Aggregation always follows manifest order, so the report does not
    depend on scheduling. Images that fail under a pipeline are counted in
    that row's n_failed and excluded from its averages.
    """
    if not manifest.entries:
        raise DataError("empty manifest")
    if not pipelines:
        raise ValueError("no pipelines given")
    runners = [_prepare_runner(p) for p in pipelines]
    tasks = [(entry, runners, clamp_empty_columns) for entry in manifest.entries]
    if workers <= 1:
        per_image = [_evaluate_entry(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_image = list(pool.map(_evaluate_entry, tasks))
    rows = []
    for k, pipeline in enumerate(pipelines):
        scores = [res[k] for res in per_image if isinstance(res[k], ImageScore)]
        failed = len(per_image) - len(scores)
        if not scores:
            first = next(res[k] for res in per_image if not isinstance(res[k], ImageScore))
            raise DataError(f"pipeline {pipeline.name}: all images failed ({first})")
        agg = aggregate(scores, std_mode)
        rows.append(
            ReportRow(
                approach=pipeline.name,
                accuracy=agg.mean_accuracy,
                dist_mean=agg.distance_mean,
                dist_std=agg.distance_std,
                n_images=agg.n_images,
                n_failed=failed,
            )
        )
    return rows


REPORT_CSV = "csv"
REPORT_MD = "md"


def emit_report(rows: list[ReportRow], fmt: str, path: str | Path) -> None:
    """Write benchmark rows as CSV (4/3/3 decimals) or a Markdown table."""
    if not rows:
        raise ValueError("no report rows")
    if fmt == REPORT_CSV:
        lines = ["approach,accuracy,dist_mean,dist_std"]
        lines += [
            f"{r.approach},{r.accuracy:.4f},{r.dist_mean:.3f},{r.dist_std:.3f}"
            for r in rows
        ]
    elif fmt == REPORT_MD:
        lines = [
            "| Approach | Accuracy | Distance mean | Distance std |",
            "| --- | --- | --- | --- |",
        ]
        lines += [
            f"| {r.approach} | {r.accuracy:.4f} | {r.dist_mean:.3f} | {r.dist_std:.3f} |"
            for r in rows
        ]
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def render_report_figures(rows: list[ReportRow], report_path: str | Path) -> list[Path]:
    """Render bar and errorbar charts next to the report file."""
    if not rows:
        raise ValueError("no report rows")
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    base = Path(report_path).with_suffix("")
    names = [r.approach for r in rows]
    x = np.arange(len(rows))
    width = max(4.0, 1.5 + 0.9 * len(rows))

    acc_path = base.parent / f"{base.name}_accuracy.png"
    fig, ax = plt.subplots(figsize=(width, 3.2), dpi=120)
    ax.bar(x, [r.accuracy for r in rows], color="#4878a8")
    ax.set_xticks(x, names, rotation=20, ha="right")
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("mean accuracy")
    fig.tight_layout()
    fig.savefig(acc_path)
    plt.close(fig)

    dist_path = base.parent / f"{base.name}_distance.png"
    fig, ax = plt.subplots(figsize=(width, 3.2), dpi=120)
    ax.errorbar(
        x,
        [r.dist_mean for r in rows],
        yerr=[r.dist_std for r in rows],
        fmt="o",
        color="#a85448",
        capsize=4,
    )
    ax.set_xticks(x, names, rotation=20, ha="right")
    ax.set_ylabel("skyline distance (px)")
    fig.tight_layout()
    fig.savefig(dist_path)
    plt.close(fig)
    return [acc_path, dist_path]


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="horizonbench", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--count", type=int, required=True, help="number of images")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=int, default=256)
    p.add_argument("--height", type=int, default=192)
    p.add_argument("--noise", type=float, default=0.02, help="additive Gaussian sigma")
    p.add_argument("--roughness", type=float, default=0.5, help="ridge roughness in (0, 1]")
    p.add_argument("--out", required=True, help="output dataset directory")

    p = sub.add_parser("train", help="train a patch classifier on a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--mode", choices=[BOUNDARY, REGION], required=True)
    p.add_argument("--epochs", type=int, default=TrainConfig.epochs)
    p.add_argument("--lr", type=float, default=TrainConfig.learning_rate)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="model file to write")

    p = sub.add_parser("score", help="write the dense score map for one image")
    p.add_argument("--model", required=True)
    p.add_argument("--image", required=True)
    p.add_argument("--out", required=True, help="score map file to write")

    p = sub.add_parser("extract", help="extract a skyline from one image")
    p.add_argument("--variant", choices=[DCSI, ENERGY], required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--region-model", help="sky-ness model for the energy variant")
    p.add_argument("--image", required=True)
    p.add_argument("--delta", type=int, default=DpConfig.delta, help="max row jump")
    p.add_argument("--lambda", dest="lam", type=float, default=DpConfig.jump_weight,
                   help="jump penalty per row")
    p.add_argument("--mu", type=float, default=DpConfig.edge_weight,
                   help="gradient reward (energy variant)")
    p.add_argument("--out", required=True, help="skyline CSV to write")

    p = sub.add_parser("postprocess", help="clean up a mask file")
    p.add_argument("--in", dest="in_path", required=True, metavar="IN")
    p.add_argument("--method", choices=[PP1, PP2], required=True)
    p.add_argument("--connectivity", type=int, choices=[4, 8], default=4)
    p.add_argument("--out", required=True)

    p = sub.add_parser("evaluate", help="run pipelines over a dataset and report")
    p.add_argument("--dataset", required=True)
    p.add_argument("--pipeline", required=True, help="pipeline spec file")
    p.add_argument("--report", required=True, help="report file to write")
    p.add_argument("--format", choices=[REPORT_CSV, REPORT_MD], default=REPORT_CSV)
    p.add_argument("--std", choices=[POPULATION, SAMPLE], default=POPULATION)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True,
                   help="render charts next to the report")
    p.add_argument("--clamp-empty-columns", action=argparse.BooleanOptionalAction,
                   default=True, help="clamp all-sky columns to the bottom row")

    p = sub.add_parser("convcalc", help="layer output resolution calculator")
    p.add_argument("--in-res", dest="in_res", type=int, required=True)
    p.add_argument("--filter", type=int, required=True)
    p.add_argument("--pad", type=int, default=0)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--deconv", action="store_true", help="transposed convolution")
    return parser


def _cmd_synth(args) -> int:
    cfg = SynthConfig(
        count=args.count,
        seed=args.seed,
        width=args.width,
        height=args.height,
        ridge_roughness=args.roughness,
        noise_sigma=args.noise,
    )
    manifest = synth_generate(cfg, args.out)
    print(f"wrote {len(manifest.entries)} images under {args.out}")
    return 0


def _cmd_train(args) -> int:
    manifest = ingest_dataset(args.dataset)
    cfg = TrainConfig(learning_rate=args.lr, epochs=args.epochs, seed=args.seed)
    model = train_from_manifest(manifest, cfg, args.mode)
    save_model(model, args.out)
    print(f"trained {args.mode} model on {len(manifest.entries)} images -> {args.out}")
    return 0


def _cmd_score(args) -> int:
    model = load_model(args.model)
    img = load_gray_image(args.image)
    save_score_map(dense_score_map(img, model), args.out)
    print(f"wrote score map {args.out}")
    return 0


def _cmd_extract(args) -> int:
    img = load_gray_image(args.image)
    cfg = DpConfig(
        variant=args.variant, delta=args.delta, jump_weight=args.lam, edge_weight=args.mu
    )
    if args.variant == DCSI:
        model = load_model(args.model)
        if model.mode != BOUNDARY:
            raise DataError("dcsi extraction needs a boundary-mode model")
        result = extract_dcsi(dense_score_map(img, model), cfg)
    else:
        model = load_model(args.region_model or args.model)
        if model.mode != REGION:
            raise DataError("energy extraction needs a region-mode model")
        result = extract_energy(dense_score_map(img, model), gradient_field(img), cfg)
    save_skyline(result.skyline, args.out)
    print(f"wrote skyline {args.out} (total cost {result.total_cost:.6f})")
    return 0


def _cmd_postprocess(args) -> int:
    mask = load_mask(args.in_path)
    fn = postprocess_I if args.method == PP1 else postprocess_II
    save_mask(fn(mask, args.connectivity), args.out)
    print(f"wrote mask {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    manifest = ingest_dataset(args.dataset)
    pipelines = load_pipeline_specs(args.pipeline)
    rows = run_benchmark(
        manifest,
        pipelines,
        workers=args.workers,
        std_mode=args.std,
        clamp_empty_columns=args.clamp_empty_columns,
    )
    emit_report(rows, args.format, args.report)
    written = [Path(args.report)]
    if args.figures:
        written += render_report_figures(rows, args.report)
    for row in rows:
        if row.n_failed:
            print(f"warning: {row.approach}: {row.n_failed} images failed", file=sys.stderr)
    print("wrote " + ", ".join(str(w) for w in written))
    return 0


def _cmd_convcalc(args) -> int:
    spec = LayerSpec(in_res=args.in_res, filter=args.filter, pad=args.pad, stride=args.stride)
    print(deconv_out_resolution(spec) if args.deconv else conv_out_resolution(spec))
    return 0


_COMMANDS = {
    "synth": _cmd_synth,
    "train": _cmd_train,
    "score": _cmd_score,
    "extract": _cmd_extract,
    "postprocess": _cmd_postprocess,
    "evaluate": _cmd_evaluate,
    "convcalc": _cmd_convcalc,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (DataError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort CLI boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
