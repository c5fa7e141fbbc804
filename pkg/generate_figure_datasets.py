#!/usr/bin/env python3
"""
Generate every figure dataset in one go.
Datasets are grouped by kind (time-geometry maps, channel configurations,
geometry-width maps) and written next to their manifests.
Usage:
    python generate_figure_datasets.py [--out-dir figure_data] [--workers 4]
"""
import argparse
import sys
from pathlib import Path
from typing import Dict, List

from dotenv import load_dotenv

from qbgeom.commands import params_from_args, physics_options
from qbgeom.exceptions import QBGeomError
from qbgeom.export import write_columns, write_manifest, write_matrix
from qbgeom.figures import FIGURE_NAMES, build_figure, figure_recipe


def get_figure_groups() -> Dict[str, List[str]]:
    """Figure names grouped by dataset kind, in generation order."""
    groups: Dict[str, List[str]] = {}
    for name in FIGURE_NAMES:
        groups.setdefault(figure_recipe(name).kind, []).append(name)
    return groups


def generate_group_files(
    args: argparse.Namespace, output_dir: Path
) -> tuple[Dict[str, List[Path]], Dict[str, List[str]]]:
    print("📊 Generating figure datasets...")
    params = params_from_args(args)
    saved: Dict[str, List[Path]] = {}
    failed: Dict[str, List[str]] = {}

    for kind, names in get_figure_groups().items():
        print(f"\n📂 Generating {kind} datasets...")
        saved[kind], failed[kind] = [], []
        for name in names:
            print(f"  📄 Generating {name}...")
            try:
                dataset = build_figure(
                    name,
                    params,
                    workers=args.workers,
                    horizon_factor=args.horizon_factor,
                )
                target = output_dir / f"{name}.{args.format}"
                if dataset.result is not None:
                    path = write_matrix(target, dataset.result, args.format)
                else:
                    path = write_columns(target, dataset.columns, args.format)
                write_manifest(path, dataset.manifest)
                saved[kind].append(path)
                print(f"    ✅ Generated {name}")
            except QBGeomError as e:
                failed[kind].append(name)
                print(f"    ❌ Error with {name}: {e}")

    return saved, failed


def main():
    """Generate all figure datasets."""
    load_dotenv()
    parser = argparse.ArgumentParser(
        description="Generate every figure dataset", parents=[physics_options()]
    )
    parser.add_argument("--out-dir", default="figure_data")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    print("🚀 Starting Figure Dataset Generation")
    print("=" * 50)

    output_dir = Path(args.out_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    try:
        saved, failed = generate_group_files(args, output_dir)
    except (QBGeomError, ValueError) as e:
        print(f"\n❌ Critical Error: {e}")
        sys.exit(1)

    successful = sum(len(paths) for paths in saved.values())
    failures = sum(len(names) for names in failed.values())

    print("\n" + "=" * 50)
    print("📊 Figure Generation Complete!")
    print(f"✅ Successful datasets: {successful}")
    print(f"❌ Failed datasets: {failures}")
    print(f"📁 Files saved to: {output_dir}")

    print("\n📈 Success Breakdown:")
    for kind, paths in saved.items():
        if paths:
            print(f"  ✅ {kind}: {len(paths)} datasets")

    if failures:
        print("\n⚠️  Failed Datasets:")
        for kind, names in failed.items():
            for name in names:
                print(f"  ❌ {kind}: {name}")
        sys.exit(1)


if __name__ == "__main__":
    main()
